#ifndef CMR_LOCALIZATION_HPP
#define CMR_LOCALIZATION_HPP

#include <span>
#include <vector>

#include "cmr/geometry.hpp"
#include "cmr/types.hpp"

namespace cmr {

/// One per-subarray estimate of the Vandermonde generator of a steering
/// column: z = exp(i * pi * step * u) for direction cosine u along the axis.
struct GeneratorEstimate {
    Complex z{1.0, 0.0};
    int step = 1;
    Axis axis = Axis::X;
    int subarray = 1;
};

/// Least-squares shift-ratio generators of a steering column, one per sparse
/// subarray. Works on both array kinds; for a planar array the shift acts on
/// whole grid rows/columns. Invariant to complex scaling of the column.
std::vector<GeneratorEstimate> extract_generators(const Vector& a_col,
                                                  const ArrayGeometry& g);

/// Resolves the direction cosine from two generator estimates with coprime
/// steps: enumerates the phase-wrap candidates of each and returns the
/// midpoint of the closest pair. Coprimality makes the match unique on exact
/// data. Throws when no candidate pair agrees within 0.1 cosine units.
double disambiguate_coprime(const GeneratorEstimate& za, const GeneratorEstimate& zb);

/// Khatri-Rao lift of an L-shaped steering column onto the matching planar
/// grid, normalized so the origin entry is one.
Vector virtual_steering(const Vector& a_col, const ArrayGeometry& g);

/// Direction from its x/y cosines: u = (ux, uy, sqrt(1 - ux^2 - uy^2)).
/// Throws when the cosine pair lies outside the unit disk beyond 1e-6.
Direction doa_from_cosines(double ux, double uy);

/// Full column-to-direction estimate: generators, coprime disambiguation per
/// axis (falling back to the smallest-step principal value when the
/// candidate sets disagree), cosine pair clipped to the unit disk.
/// L-shaped columns go through the virtual planar lift first.
Direction estimate_doa(const Vector& a_col, const ArrayGeometry& g);

struct LocalizationResult {
    Vec3 position{0.0, 0.0, 0.0};
    std::vector<Direction> doas;
    double residual = 0.0; // sum of squared point-to-line distances at position
};

/// Closed-form minimizer of the sum of squared distances to the lines
/// (center_m, direction_m): solves sum_m (I - v v^T) xi = sum_m (I - v v^T) p.
/// Requires at least two non-parallel lines.
LocalizationResult fuse_lines(std::span<const Vec3> centers, std::span<const Direction> doas);

/// Mean angular error over arrays and targets: mean of acos(|v^T v_hat|),
/// assuming est[m][r] is already aligned with truth[m][r].
double mae(const std::vector<std::vector<Direction>>& truth,
           const std::vector<std::vector<Direction>>& est);

} // namespace cmr

#endif
