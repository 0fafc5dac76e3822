#include "cmr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cmr {

namespace {

void validate_spec(const CoprimeAxisSpec& s) {
    if (s.m_step < 1 || s.n_step < 1)
        throw std::invalid_argument("CoprimeAxisSpec: steps must be positive");
    if (std::gcd(s.m_step, s.n_step) != 1)
        throw std::invalid_argument("CoprimeAxisSpec: steps must be coprime");
    if (s.m_count < 2 || s.n_count < 2)
        throw std::invalid_argument("CoprimeAxisSpec: counts must be at least 2");
}

struct AxisSet {
    std::vector<int> coords;          // sorted union of both subarrays
    std::vector<int> sub1, sub2;      // indices into coords, progression order
};

AxisSet build_axis(const CoprimeAxisSpec& s) {
    AxisSet out;
    for (int i = 0; i < s.m_count; ++i) out.coords.push_back(s.m_step * i);
    for (int i = 0; i < s.n_count; ++i) out.coords.push_back(s.n_step * i);
    std::sort(out.coords.begin(), out.coords.end());
    out.coords.erase(std::unique(out.coords.begin(), out.coords.end()), out.coords.end());

    auto index_of = [&out](int coord) {
        const auto it = std::lower_bound(out.coords.begin(), out.coords.end(), coord);
        return static_cast<int>(it - out.coords.begin());
    };
    for (int i = 0; i < s.m_count; ++i) out.sub1.push_back(index_of(s.m_step * i));
    for (int i = 0; i < s.n_count; ++i) out.sub2.push_back(index_of(s.n_step * i));
    return out;
}

} // namespace

Direction::Direction(const Vec3& v) {
    const double n = v.norm();
    if (n == 0.0) throw std::invalid_argument("Direction: zero vector");
    u_ = v / n;
    if (u_.z() < -1e-9) throw std::invalid_argument("Direction: negative z component");
    if (u_.z() < 0.0) u_.z() = 0.0;
}

int ArrayGeometry::max_subarray_count() const {
    return std::max({static_cast<int>(q_x1.size()), static_cast<int>(q_x2.size()),
                     static_cast<int>(q_y1.size()), static_cast<int>(q_y2.size())});
}

ArrayGeometry build_cplsa(const CoprimeAxisSpec& x, const CoprimeAxisSpec& y) {
    validate_spec(x);
    validate_spec(y);
    const AxisSet ax = build_axis(x);
    const AxisSet ay = build_axis(y);

    ArrayGeometry g;
    g.kind = ArrayKind::Cplsa;
    g.x_spec = x;
    g.y_spec = y;
    g.axis_x = ax.coords;
    g.axis_y = ay.coords;
    g.q_x1 = ax.sub1;
    g.q_x2 = ax.sub2;
    g.q_y1 = ay.sub1;
    g.q_y2 = ay.sub2;

    // x-axis set first (its leading element is the origin), then the y-axis
    // set with the shared origin skipped.
    for (int c : ax.coords) {
        g.q_x.push_back(static_cast<int>(g.positions.size()));
        g.positions.emplace_back(c, 0.0, 0.0);
    }
    g.q_y.push_back(0);
    for (int c : ay.coords) {
        if (c == 0) continue;
        g.q_y.push_back(static_cast<int>(g.positions.size()));
        g.positions.emplace_back(0.0, c, 0.0);
    }
    g.origin_index = 0;
    return g;
}

ArrayGeometry build_cppa(const CoprimeAxisSpec& x, const CoprimeAxisSpec& y) {
    validate_spec(x);
    validate_spec(y);
    const AxisSet ax = build_axis(x);
    const AxisSet ay = build_axis(y);

    ArrayGeometry g;
    g.kind = ArrayKind::Cppa;
    g.x_spec = x;
    g.y_spec = y;
    g.axis_x = ax.coords;
    g.axis_y = ay.coords;
    g.q_x1 = ax.sub1;
    g.q_x2 = ax.sub2;
    g.q_y1 = ay.sub1;
    g.q_y2 = ay.sub2;

    for (int cx : ax.coords)
        for (int cy : ay.coords) g.positions.emplace_back(cx, cy, 0.0);
    g.origin_index = 0;
    return g;
}

ArrayGeometry virtual_cppa(const ArrayGeometry& cplsa) {
    if (cplsa.kind != ArrayKind::Cplsa)
        throw std::invalid_argument("virtual_cppa: geometry is not L-shaped");
    return build_cppa(cplsa.x_spec, cplsa.y_spec);
}

Matrix steering_matrix(const ArrayGeometry& g, std::span<const Direction> dirs) {
    if (dirs.empty()) throw std::invalid_argument("steering_matrix: no directions");
    Matrix a(g.size(), static_cast<Eigen::Index>(dirs.size()));
    for (Eigen::Index r = 0; r < a.cols(); ++r) {
        const Vec3& u = dirs[r].u();
        for (int i = 0; i < g.size(); ++i) {
            const double phase = std::numbers::pi * g.positions[i].dot(u);
            a(i, r) = std::polar(1.0, phase);
        }
    }
    return a;
}

Matrix subarray_rows(const Matrix& a, std::span<const int> q) {
    Matrix out(static_cast<Eigen::Index>(q.size()), a.cols());
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < 0 || q[i] >= a.rows())
            throw std::out_of_range("subarray_rows: index out of range");
        out.row(static_cast<Eigen::Index>(i)) = a.row(q[i]);
    }
    return out;
}

} // namespace cmr
