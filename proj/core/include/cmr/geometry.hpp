#ifndef CMR_GEOMETRY_HPP
#define CMR_GEOMETRY_HPP

#include <span>
#include <vector>

#include "cmr/types.hpp"

namespace cmr {

/// One coprime axis: two nested sparse uniform linear arrays with coprime
/// inter-element steps (in units of d = lambda/2) sharing the origin element.
struct CoprimeAxisSpec {
    int m_step = 0;
    int n_step = 0;
    int m_count = 0;
    int n_count = 0;
};

enum class ArrayKind { Cplsa, Cppa };

enum class Axis { X, Y };

/// Unit direction vector with nonnegative z component (targets are observed
/// in the upper half space).
class Direction {
public:
    Direction() : u_(0.0, 0.0, 1.0) {}
    explicit Direction(const Vec3& v);

    const Vec3& u() const { return u_; }
    double x() const { return u_.x(); }
    double y() const { return u_.y(); }
    double z() const { return u_.z(); }

private:
    Vec3 u_;
};

/// Sensor layout of one coprime array.
///
/// Positions are integer-coordinate points in units of d = lambda/2, so a
/// steering phase is always pi * (position . direction); the carrier
/// wavelength cancels out of every expression once positions are expressed
/// in half-wavelength units.
///
/// Ordering convention (fixed so that the planar steering matrix factors as
/// a Khatri-Rao product of its axis parts):
///  - Cplsa: x-axis set sorted ascending (origin first), then the y-axis set
///    without the origin, sorted ascending.
///  - Cppa: full Cartesian grid, x-major: position p = ix * |Sy| + iy.
struct ArrayGeometry {
    ArrayKind kind = ArrayKind::Cplsa;
    CoprimeAxisSpec x_spec, y_spec;

    std::vector<Vec3> positions;

    // Sorted integer coordinates of the axis sets Sx and Sy.
    std::vector<int> axis_x, axis_y;

    // Cplsa only: indices into `positions` of the x-axis and y-axis sets,
    // in axis order. Empty for Cppa (the grid makes them redundant).
    std::vector<int> q_x, q_y;

    // Indices into axis_x / axis_y of the two sparse subarrays per axis,
    // listed in arithmetic-progression order starting at the origin.
    std::vector<int> q_x1, q_x2, q_y1, q_y2;

    int origin_index = 0;

    int size() const { return static_cast<int>(positions.size()); }
    int axis_x_count() const { return static_cast<int>(axis_x.size()); }
    int axis_y_count() const { return static_cast<int>(axis_y.size()); }

    /// Largest subarray element count (the I' of the working conditions).
    int max_subarray_count() const;
};

/// Builds a coprime L-shaped array: the union of the two-axis sparse ULAs.
/// Throws std::invalid_argument for non-coprime steps or counts < 2.
ArrayGeometry build_cplsa(const CoprimeAxisSpec& x, const CoprimeAxisSpec& y);

/// Builds a coprime planar array: the Cartesian product of the axis sets.
ArrayGeometry build_cppa(const CoprimeAxisSpec& x, const CoprimeAxisSpec& y);

/// The Cppa whose axis sets match a Cplsa; the target of the virtual
/// steering construction.
ArrayGeometry virtual_cppa(const ArrayGeometry& cplsa);

/// Steering matrix: entry (i, r) = exp(i * pi * positions[i] . dirs[r]).
Matrix steering_matrix(const ArrayGeometry& g, std::span<const Direction> dirs);

/// Row selection in the order given by q. Throws on out-of-range indices.
Matrix subarray_rows(const Matrix& a, std::span<const int> q);

} // namespace cmr

#endif
