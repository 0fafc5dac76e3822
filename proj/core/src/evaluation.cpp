#include "cmr/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cmr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RealMatrix correlation_cost(const Matrix& ref, const Matrix& est) {
    const Eigen::Index n = ref.cols();
    RealMatrix cost(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index e = 0; e < n; ++e) {
            const double denom = ref.col(r).norm() * est.col(e).norm();
            const double corr = denom > 0.0 ? std::abs(est.col(e).dot(ref.col(r))) / denom : 0.0;
            cost(r, e) = 1.0 - corr;
        }
    return cost;
}

std::vector<int> greedy_assignment(RealMatrix cost) {
    const Eigen::Index n = cost.rows();
    std::vector<int> out(n, -1);
    for (Eigen::Index step = 0; step < n; ++step) {
        Eigen::Index bi = 0, bj = 0;
        cost.minCoeff(&bi, &bj);
        out[bi] = static_cast<int>(bj);
        cost.row(bi).setConstant(kInf);
        cost.col(bj).setConstant(kInf);
    }
    return out;
}

} // namespace

std::vector<int> min_cost_assignment(const RealMatrix& cost) {
    if (cost.rows() != cost.cols())
        throw std::invalid_argument("min_cost_assignment: cost matrix must be square");
    const int n = static_cast<int>(cost.rows());

    // Potentials-based O(n^3) shortest augmenting path formulation.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> out(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) out[p[j] - 1] = j - 1;
    return out;
}

std::vector<int> match_columns(const Matrix& est, const Matrix& ref) {
    if (est.cols() != ref.cols())
        throw std::invalid_argument("match_columns: column counts differ");
    const RealMatrix cost = correlation_cost(ref, est);
    if (cost.rows() <= 64) return min_cost_assignment(cost);
    return greedy_assignment(cost);
}

double factor_error(const FactorSet& est, const FactorSet& ref) {
    if (est.count() != ref.count() || est.rank() != ref.rank())
        throw std::invalid_argument("factor_error: shape mismatch");
    const std::vector<int> perm = match_columns(est.B, ref.B);

    auto matrix_error = [&perm](const Matrix& e, const Matrix& r) {
        double num = 0.0;
        for (Eigen::Index c = 0; c < r.cols(); ++c) {
            const Vector ec = e.col(perm[static_cast<std::size_t>(c)]);
            const double en = ec.squaredNorm();
            const Complex scale = en > 0.0 ? ec.dot(r.col(c)) / en : Complex(0.0, 0.0);
            num += (scale * ec - r.col(c)).squaredNorm();
        }
        const double den = r.squaredNorm();
        return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    };

    double worst = matrix_error(est.B, ref.B);
    for (int m = 0; m < ref.count(); ++m) {
        worst = std::max(worst, matrix_error(est.A[m], ref.A[m]));
        worst = std::max(worst, matrix_error(est.C[m], ref.C[m]));
    }
    return worst;
}

std::vector<int> align_directions(const std::vector<std::vector<Direction>>& truth,
                                  const std::vector<std::vector<Direction>>& est) {
    if (truth.size() != est.size() || truth.empty())
        throw std::invalid_argument("align_directions: mismatched inputs");
    const std::size_t targets = truth[0].size();
    RealMatrix cost = RealMatrix::Zero(static_cast<Eigen::Index>(targets),
                                       static_cast<Eigen::Index>(targets));
    for (std::size_t m = 0; m < truth.size(); ++m) {
        if (truth[m].size() != targets || est[m].size() != targets)
            throw std::invalid_argument("align_directions: ragged inputs");
        for (std::size_t r = 0; r < targets; ++r)
            for (std::size_t e = 0; e < targets; ++e) {
                const double c = std::abs(truth[m][r].u().dot(est[m][e].u()));
                cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e)) +=
                    std::acos(std::clamp(c, 0.0, 1.0));
            }
    }
    if (targets <= 64) return min_cost_assignment(cost);
    return greedy_assignment(cost);
}

std::vector<std::vector<Direction>> apply_alignment(
    const std::vector<std::vector<Direction>>& est, const std::vector<int>& perm) {
    std::vector<std::vector<Direction>> out(est.size());
    for (std::size_t m = 0; m < est.size(); ++m) {
        out[m].reserve(perm.size());
        for (int idx : perm) out[m].push_back(est[m][static_cast<std::size_t>(idx)]);
    }
    return out;
}

} // namespace cmr
