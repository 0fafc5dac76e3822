#include "cmr/localization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cmr {

namespace {

/// Scalar least-squares ratio between the shifted halves of a subarray
/// segment vector: z = (under^H over) / (under^H under).
Complex shift_ratio(const Vector& segment, Eigen::Index block) {
    const Eigen::Index n = segment.size() - block;
    const Vector under = segment.head(n);
    const Vector over = segment.tail(n);
    const Complex denom = under.squaredNorm();
    if (std::abs(denom) == 0.0)
        throw std::runtime_error("extract_generators: zero subarray segment");
    return under.dot(over) / denom;
}

/// Candidate direction cosines compatible with one generator: all phase
/// unwrappings (arg(z)/pi + 2q) / step inside [-1, 1].
std::vector<double> cosine_candidates(const GeneratorEstimate& g) {
    const double phase = std::arg(g.z) / std::numbers::pi; // in (-1, 1]
    std::vector<double> out;
    const int qmin = static_cast<int>(std::ceil((-g.step - phase) / 2.0 - 1e-12));
    const int qmax = static_cast<int>(std::floor((g.step - phase) / 2.0 + 1e-12));
    for (int q = qmin; q <= qmax; ++q) {
        const double u = (phase + 2.0 * q) / g.step;
        if (u >= -1.0 - 1e-9 && u <= 1.0 + 1e-9) out.push_back(std::clamp(u, -1.0, 1.0));
    }
    return out;
}

double principal_cosine(const GeneratorEstimate& g) {
    return std::clamp(std::arg(g.z) / (std::numbers::pi * g.step), -1.0, 1.0);
}

/// Coprime fusion of the two subarray estimates of one axis, degrading to the
/// smallest-step principal value when they are inconsistent (deep noise).
double fuse_axis(const GeneratorEstimate& g1, const GeneratorEstimate& g2) {
    try {
        return disambiguate_coprime(g1, g2);
    } catch (const std::runtime_error&) {
        return principal_cosine(g1.step <= g2.step ? g1 : g2);
    }
}

} // namespace

std::vector<GeneratorEstimate> extract_generators(const Vector& a_col,
                                                  const ArrayGeometry& g) {
    if (a_col.size() != g.size())
        throw std::invalid_argument("extract_generators: column length != element count");

    std::vector<GeneratorEstimate> out;
    const auto subarrays = std::array{
        std::tuple{Axis::X, 1, &g.q_x1, g.x_spec.m_step}, std::tuple{Axis::X, 2, &g.q_x2, g.x_spec.n_step},
        std::tuple{Axis::Y, 1, &g.q_y1, g.y_spec.m_step}, std::tuple{Axis::Y, 2, &g.q_y2, g.y_spec.n_step}};

    for (const auto& [axis, sub, indices, step] : subarrays) {
        if (indices->size() < 2)
            throw std::invalid_argument("extract_generators: subarray has fewer than 2 elements");

        Vector segment;
        Eigen::Index block = 1;
        if (g.kind == ArrayKind::Cplsa) {
            const std::vector<int>& axis_to_pos = axis == Axis::X ? g.q_x : g.q_y;
            segment.resize(static_cast<Eigen::Index>(indices->size()));
            for (std::size_t i = 0; i < indices->size(); ++i)
                segment(static_cast<Eigen::Index>(i)) = a_col(axis_to_pos[(*indices)[i]]);
        } else {
            // Gather whole grid rows (x subarrays) or columns (y subarrays) so
            // the one-step shift stays contiguous.
            const int nx = g.axis_x_count(), ny = g.axis_y_count();
            if (axis == Axis::X) {
                block = ny;
                segment.resize(static_cast<Eigen::Index>(indices->size()) * ny);
                for (std::size_t i = 0; i < indices->size(); ++i)
                    for (int iy = 0; iy < ny; ++iy)
                        segment(static_cast<Eigen::Index>(i) * ny + iy) =
                            a_col(static_cast<Eigen::Index>((*indices)[i]) * ny + iy);
            } else {
                block = nx;
                segment.resize(static_cast<Eigen::Index>(indices->size()) * nx);
                for (std::size_t i = 0; i < indices->size(); ++i)
                    for (int ix = 0; ix < nx; ++ix)
                        segment(static_cast<Eigen::Index>(i) * nx + ix) =
                            a_col(static_cast<Eigen::Index>(ix) * ny + (*indices)[i]);
            }
        }
        out.push_back({shift_ratio(segment, block), step, axis, sub});
    }
    return out;
}

double disambiguate_coprime(const GeneratorEstimate& za, const GeneratorEstimate& zb) {
    if (std::gcd(za.step, zb.step) != 1)
        throw std::invalid_argument("disambiguate_coprime: steps are not coprime");

    const std::vector<double> ca = cosine_candidates(za);
    const std::vector<double> cb = cosine_candidates(zb);
    double best = std::numeric_limits<double>::infinity();
    double value = 0.0;
    for (double ua : ca)
        for (double ub : cb) {
            const double d = std::abs(ua - ub);
            if (d < best) {
                best = d;
                value = 0.5 * (ua + ub);
            }
        }
    if (best > 0.1)
        throw std::runtime_error("disambiguate_coprime: candidate sets disagree");
    return std::clamp(value, -1.0, 1.0);
}

Vector virtual_steering(const Vector& a_col, const ArrayGeometry& g) {
    if (g.kind != ArrayKind::Cplsa)
        throw std::invalid_argument("virtual_steering: geometry is not L-shaped");
    if (a_col.size() != g.size())
        throw std::invalid_argument("virtual_steering: column length != element count");

    Vector ax(static_cast<Eigen::Index>(g.q_x.size()));
    for (std::size_t i = 0; i < g.q_x.size(); ++i)
        ax(static_cast<Eigen::Index>(i)) = a_col(g.q_x[i]);
    Vector ay(static_cast<Eigen::Index>(g.q_y.size()));
    for (std::size_t i = 0; i < g.q_y.size(); ++i)
        ay(static_cast<Eigen::Index>(i)) = a_col(g.q_y[i]);

    Vector v(ax.size() * ay.size());
    for (Eigen::Index i = 0; i < ax.size(); ++i) v.segment(i * ay.size(), ay.size()) = ax(i) * ay;
    if (std::abs(v(0)) == 0.0)
        throw std::runtime_error("virtual_steering: zero origin entry");
    return v / v(0);
}

Direction doa_from_cosines(double ux, double uy) {
    const double rad2 = ux * ux + uy * uy;
    if (rad2 > 1.0 + 1e-6)
        throw std::invalid_argument("doa_from_cosines: cosine pair outside the unit disk");
    return Direction(Vec3(ux, uy, std::sqrt(std::max(0.0, 1.0 - rad2))));
}

Direction estimate_doa(const Vector& a_col, const ArrayGeometry& g) {
    std::vector<GeneratorEstimate> gens;
    if (g.kind == ArrayKind::Cplsa) {
        gens = extract_generators(virtual_steering(a_col, g), virtual_cppa(g));
    } else {
        gens = extract_generators(a_col, g);
    }

    const auto find = [&gens](Axis axis, int sub) -> const GeneratorEstimate& {
        for (const GeneratorEstimate& e : gens)
            if (e.axis == axis && e.subarray == sub) return e;
        throw std::logic_error("estimate_doa: missing generator");
    };
    double ux = fuse_axis(find(Axis::X, 1), find(Axis::X, 2));
    double uy = fuse_axis(find(Axis::Y, 1), find(Axis::Y, 2));

    const double rad = std::hypot(ux, uy);
    if (rad > 1.0) {
        ux /= rad;
        uy /= rad;
    }
    return doa_from_cosines(ux, uy);
}

LocalizationResult fuse_lines(std::span<const Vec3> centers, std::span<const Direction> doas) {
    if (centers.size() != doas.size())
        throw std::invalid_argument("fuse_lines: center/direction count mismatch");
    if (centers.size() < 2) throw std::invalid_argument("fuse_lines: need at least two lines");

    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Vec3 rhs = Vec3::Zero();
    for (std::size_t m = 0; m < centers.size(); ++m) {
        const Vec3& v = doas[m].u();
        const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - v * v.transpose();
        normal += proj;
        rhs += proj * centers[m];
    }

    const Eigen::FullPivLU<Eigen::Matrix3d> lu(normal);
    if (!lu.isInvertible())
        throw std::runtime_error("fuse_lines: all lines are parallel (singular system)");

    LocalizationResult out;
    out.position = lu.solve(rhs);
    out.doas.assign(doas.begin(), doas.end());
    for (std::size_t m = 0; m < centers.size(); ++m) {
        const Vec3 d = out.position - centers[m];
        const double along = d.dot(doas[m].u());
        out.residual += std::max(0.0, d.squaredNorm() - along * along);
    }
    return out;
}

double mae(const std::vector<std::vector<Direction>>& truth,
           const std::vector<std::vector<Direction>>& est) {
    if (truth.size() != est.size() || truth.empty())
        throw std::invalid_argument("mae: mismatched or empty inputs");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t m = 0; m < truth.size(); ++m) {
        if (truth[m].size() != est[m].size())
            throw std::invalid_argument("mae: mismatched target counts");
        for (std::size_t r = 0; r < truth[m].size(); ++r) {
            const double c = std::abs(truth[m][r].u().dot(est[m][r].u()));
            sum += std::acos(std::clamp(c, 0.0, 1.0));
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

} // namespace cmr
