#include "cmr/ccpd.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cmr/linalg.hpp"

namespace cmr {

namespace {

constexpr double kRankTol = 1e-8;          // full-column-rank gate for shifted systems
constexpr double kSingularDiagCond = 1e12; // diagonalizer invertibility gate

Matrix solve_ls(const Matrix& a, const Matrix& rhs) {
    return a.colPivHouseholderQr().solve(rhs);
}

/// diag(B^-1 * g * B) for every slice, plus the off-diagonal fraction left
/// behind by the similarity transform.
void diagonal_table(const Matrix& diagonalizer, std::span<const Matrix> slices,
                    Matrix& table, RealVector& offdiag) {
    const Eigen::Index rank = diagonalizer.rows();
    const auto lu = diagonalizer.partialPivLu();
    table.resize(static_cast<Eigen::Index>(slices.size()), rank);
    offdiag.resize(static_cast<Eigen::Index>(slices.size()));
    for (std::size_t w = 0; w < slices.size(); ++w) {
        const Matrix d = lu.solve(slices[w] * diagonalizer);
        table.row(static_cast<Eigen::Index>(w)) = d.diagonal().transpose();
        const double diag_norm = d.diagonal().norm();
        const double off_norm = std::sqrt(std::max(0.0, d.squaredNorm() - d.diagonal().squaredNorm()));
        offdiag(static_cast<Eigen::Index>(w)) =
            diag_norm > 0.0 ? off_norm / diag_norm : std::numeric_limits<double>::infinity();
    }
}

Tensor3 select_mode1(const Tensor3& t, std::span<const int> rows) {
    Tensor3 out(static_cast<int>(rows.size()), t.dim2(), t.dim3());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < t.dim2(); ++j)
            for (int k = 0; k < t.dim3(); ++k)
                out(static_cast<int>(i), j, k) = t(rows[i], j, k);
    return out;
}

Tensor4 reshape_grid(const Tensor3& t, int nx, int ny) {
    if (t.dim1() != nx * ny)
        throw std::invalid_argument("reshape_grid: element mode is not an nx*ny grid");
    Tensor4 out(nx, ny, t.dim2(), t.dim3());
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            for (int j = 0; j < t.dim2(); ++j)
                for (int k = 0; k < t.dim3(); ++k) out(ix, iy, j, k) = t(ix * ny + iy, j, k);
    return out;
}

Tensor4 swap_modes12(const Tensor4& t) {
    Tensor4 out(t.dim2(), t.dim1(), t.dim3(), t.dim4());
    for (int i = 0; i < t.dim1(); ++i)
        for (int j = 0; j < t.dim2(); ++j)
            for (int k = 0; k < t.dim3(); ++k)
                for (int l = 0; l < t.dim4(); ++l) out(j, i, k, l) = t(i, j, k, l);
    return out;
}

Tensor4 select_mode1(const Tensor4& t, std::span<const int> rows) {
    Tensor4 out(static_cast<int>(rows.size()), t.dim2(), t.dim3(), t.dim4());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < t.dim2(); ++j)
            for (int k = 0; k < t.dim3(); ++k)
                for (int l = 0; l < t.dim4(); ++l)
                    out(static_cast<int>(i), j, k, l) = t(rows[i], j, k, l);
    return out;
}

/// Shift-invariance target matrix from a mode-2/mode-3 unfolded subarray
/// block: G = (pinv(top) * shifted_top)^T, where the shift drops one block of
/// rows from either end. Returns false when the unshifted block is rank
/// deficient.
bool shift_target(const Matrix& unfolded, Eigen::Index block_rows, Matrix& g) {
    const Eigen::Index shifted = unfolded.rows() - block_rows;
    const Matrix m1 = unfolded.topRows(shifted);
    const Matrix m2 = unfolded.bottomRows(shifted);
    const Eigen::BDCSVD<Matrix> svd(m1, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    if (m1.rows() < m1.cols() || s(s.size() - 1) <= kRankTol * s(0)) return false;
    const Matrix gt = svd.matrixV() * s.cwiseInverse().asDiagonal() * (svd.matrixU().adjoint() * m2);
    g = gt.transpose();
    return true;
}

struct SubarraySelector {
    Axis axis;
    int subarray;
    const std::vector<int>* indices; // into the axis set
};

std::array<SubarraySelector, 4> subarray_order(const ArrayGeometry& g) {
    return {SubarraySelector{Axis::X, 1, &g.q_x1}, SubarraySelector{Axis::X, 2, &g.q_x2},
            SubarraySelector{Axis::Y, 1, &g.q_y1}, SubarraySelector{Axis::Y, 2, &g.q_y2}};
}

} // namespace

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::Overdetermined: return "overdetermined";
        case Scenario::SlightlyUnderdetermined: return "slightly single underdetermined";
        case Scenario::HighlyUnderdetermined: return "highly single underdetermined";
    }
    return "unknown";
}

ReducedData reduce_dimension(std::span<const Tensor3> tensors, int rank) {
    if (tensors.empty()) throw std::invalid_argument("reduce_dimension: no tensors");
    const int samples = tensors[0].dim2();
    for (const Tensor3& t : tensors)
        if (t.dim2() != samples)
            throw std::invalid_argument("reduce_dimension: sample mode differs across tensors");
    if (rank < 1) throw std::invalid_argument("reduce_dimension: rank must be positive");
    if (samples < rank)
        throw std::invalid_argument("reduce_dimension: sample count below requested rank");

    Eigen::Index total_rows = 0;
    std::vector<Matrix> unfolded;
    unfolded.reserve(tensors.size());
    for (const Tensor3& t : tensors) {
        unfolded.push_back(unfold_mode2(t));
        total_rows += unfolded.back().rows();
    }
    Matrix stack(total_rows, samples);
    Eigen::Index row = 0;
    for (const Matrix& u : unfolded) {
        stack.middleRows(row, u.rows()) = u;
        row += u.rows();
    }

    const Eigen::BDCSVD<Matrix> svd(stack, Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    const double tol = static_cast<double>(std::max(stack.rows(), stack.cols())) * s(0) *
                       std::numeric_limits<double>::epsilon();
    if (s(rank - 1) <= tol)
        throw std::runtime_error(
            "reduce_dimension: data rank below requested rank (fewer resolvable targets)");

    ReducedData rd;
    // Conjugated right-singular basis: the reduced shared factor is
    // projector^H * B and lifts back as projector * B_reduced.
    rd.projector = svd.matrixV().leftCols(rank).conjugate();
    rd.tensors.reserve(tensors.size());
    const Matrix reduce_map = rd.projector.conjugate(); // = V.leftCols(rank)
    for (std::size_t m = 0; m < tensors.size(); ++m) {
        const Matrix compressed = unfolded[m] * reduce_map;
        rd.tensors.push_back(
            fold_mode2(compressed, tensors[m].dim1(), rank, tensors[m].dim3()));
    }
    return rd;
}

WorkingConditionReport check_conditions(std::span<const ArrayGeometry> rx_geometries,
                                        int targets, int pulses, int samples,
                                        int tx_elements) {
    if (rx_geometries.empty())
        throw std::invalid_argument("check_conditions: no receive geometries");

    WorkingConditionReport rep;
    const long min_tj = std::min<long>(samples, tx_elements);
    rep.detail.push_back({"min(samples, tx_elements) >= targets", min_tj, targets,
                          min_tj >= targets});

    const ArrayKind kind = rx_geometries[0].kind;
    long shift_capacity = 0;
    if (kind == ArrayKind::Cplsa) {
        for (const ArrayGeometry& g : rx_geometries)
            shift_capacity = std::max<long>(shift_capacity, g.max_subarray_count() - 1);
        rep.detail.push_back({"(max_subarray - 1) * pulses >= targets",
                              shift_capacity * pulses, targets,
                              shift_capacity * pulses >= targets});
    } else {
        for (const ArrayGeometry& g : rx_geometries) {
            const long nx = g.axis_x_count(), ny = g.axis_y_count();
            shift_capacity = std::max({shift_capacity,
                                       (static_cast<long>(g.q_x1.size()) - 1) * ny,
                                       (static_cast<long>(g.q_x2.size()) - 1) * ny,
                                       (static_cast<long>(g.q_y1.size()) - 1) * nx,
                                       (static_cast<long>(g.q_y2.size()) - 1) * nx});
        }
        rep.detail.push_back({"max_shifted_block * pulses >= targets",
                              shift_capacity * pulses, targets,
                              shift_capacity * pulses >= targets});
    }
    rep.satisfied = std::all_of(rep.detail.begin(), rep.detail.end(),
                                [](const ConditionDetail& d) { return d.ok; });

    int min_elements = rx_geometries[0].size();
    for (const ArrayGeometry& g : rx_geometries)
        min_elements = std::min(min_elements, g.size());
    const int min_ij = std::min(min_elements, tx_elements);
    if (targets <= min_ij)
        rep.scenario = Scenario::Overdetermined;
    else if (2 * targets <= 3 * min_ij)
        rep.scenario = Scenario::SlightlyUnderdetermined;
    else
        rep.scenario = Scenario::HighlyUnderdetermined;
    return rep;
}

JevdProblem build_targets_cplsa(const ReducedData& rd,
                                std::span<const ArrayGeometry> rx_geometries) {
    if (rd.tensors.size() != rx_geometries.size())
        throw std::invalid_argument("build_targets_cplsa: tensor/geometry count mismatch");
    JevdProblem p;
    for (std::size_t m = 0; m < rd.tensors.size(); ++m) {
        const ArrayGeometry& g = rx_geometries[m];
        if (g.kind != ArrayKind::Cplsa)
            throw std::invalid_argument("build_targets_cplsa: geometry is not L-shaped");
        const Tensor3& t = rd.tensors[m];
        if (t.dim1() != g.size())
            throw std::invalid_argument("build_targets_cplsa: element mode/geometry mismatch");

        const int pulses = t.dim3();
        for (const SubarraySelector& sel : subarray_order(g)) {
            // Axis-set indices to position indices, in progression order.
            const std::vector<int>& axis_to_pos = sel.axis == Axis::X ? g.q_x : g.q_y;
            std::vector<int> rows;
            rows.reserve(sel.indices->size());
            for (int a : *sel.indices) rows.push_back(axis_to_pos[a]);

            const Matrix unfolded = unfold_mode2(select_mode1(t, rows));
            Matrix target;
            if (shift_target(unfolded, pulses, target)) {
                p.slices.push_back(std::move(target));
                p.provenance.push_back({static_cast<int>(m), sel.axis, sel.subarray});
            } else {
                p.skipped.push_back({static_cast<int>(m), sel.axis, sel.subarray});
            }
        }
    }
    if (p.slices.empty())
        throw std::runtime_error("build_targets_cplsa: every candidate slice is rank deficient");
    return p;
}

JevdProblem build_targets_cppa(const ReducedData& rd,
                               std::span<const ArrayGeometry> rx_geometries) {
    if (rd.tensors.size() != rx_geometries.size())
        throw std::invalid_argument("build_targets_cppa: tensor/geometry count mismatch");
    JevdProblem p;
    for (std::size_t m = 0; m < rd.tensors.size(); ++m) {
        const ArrayGeometry& g = rx_geometries[m];
        if (g.kind != ArrayKind::Cppa)
            throw std::invalid_argument("build_targets_cppa: geometry is not planar");
        const Tensor3& t = rd.tensors[m];
        if (t.dim1() != g.size())
            throw std::invalid_argument("build_targets_cppa: element mode/geometry mismatch");

        const int pulses = t.dim3();
        const Tensor4 grid = reshape_grid(t, g.axis_x_count(), g.axis_y_count());
        const Tensor4 grid_swapped = swap_modes12(grid);
        for (const SubarraySelector& sel : subarray_order(g)) {
            const Tensor4& source = sel.axis == Axis::X ? grid : grid_swapped;
            const Matrix unfolded = unfold_mode3(select_mode1(source, *sel.indices));
            const Eigen::Index block = static_cast<Eigen::Index>(source.dim2()) * pulses;
            Matrix target;
            if (shift_target(unfolded, block, target)) {
                p.slices.push_back(std::move(target));
                p.provenance.push_back({static_cast<int>(m), sel.axis, sel.subarray});
            } else {
                p.skipped.push_back({static_cast<int>(m), sel.axis, sel.subarray});
            }
        }
    }
    if (p.slices.empty())
        throw std::runtime_error("build_targets_cppa: every candidate slice is rank deficient");
    return p;
}

JevdResult jevd_gevd_init(const JevdProblem& p, Rng& rng) {
    if (p.slices.empty()) throw std::invalid_argument("jevd_gevd_init: no slices");
    const Eigen::Index rank = p.slices[0].rows();
    for (const Matrix& s : p.slices)
        if (s.rows() != rank || s.cols() != rank)
            throw std::invalid_argument("jevd_gevd_init: slices are not square and equal-sized");

    JevdResult out;
    if (p.slices.size() == 1) {
        // Single target matrix: the joint problem degenerates to one
        // eigendecomposition.
        Eigen::ComplexEigenSolver<Matrix> es(p.slices[0]);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("jevd_gevd_init: eigensolver failed");
        out.diagonalizer = es.eigenvectors();
        if (condition_number(out.diagonalizer) > 1e10)
            throw DefectivePencilError("jevd_gevd_init: single slice is defective");
    } else {
        constexpr int kAttempts = 20;
        bool ok = false;
        for (int attempt = 0; attempt < kAttempts && !ok; ++attempt) {
            // Two independent unit-norm random combinations of all slices;
            // random mixing avoids eigenvalue collisions any raw pair may have.
            Vector alpha(static_cast<Eigen::Index>(p.slices.size()));
            Vector beta(static_cast<Eigen::Index>(p.slices.size()));
            for (Eigen::Index w = 0; w < alpha.size(); ++w) {
                alpha(w) = rng.complex_normal();
                beta(w) = rng.complex_normal();
            }
            alpha /= alpha.norm();
            beta /= beta.norm();
            Matrix g1 = Matrix::Zero(rank, rank), g2 = Matrix::Zero(rank, rank);
            for (std::size_t w = 0; w < p.slices.size(); ++w) {
                g1 += alpha(static_cast<Eigen::Index>(w)) * p.slices[w];
                g2 += beta(static_cast<Eigen::Index>(w)) * p.slices[w];
            }
            try {
                out.diagonalizer = gevd_pair(g1, g2).eigenvectors;
                ok = true;
            } catch (const SingularPencilError&) {
            } catch (const DefectivePencilError&) {
            }
        }
        if (!ok)
            throw DefectivePencilError(
                "jevd_gevd_init: no regular slice combination found after retries");
    }

    diagonal_table(out.diagonalizer, p.slices, out.generators, out.slice_offdiag);
    out.converged = true;
    return out;
}

JevdResult jevd_refine(const JevdProblem& p, const JevdResult& init,
                       const RefineOptions& opts) {
    const Eigen::Index rank = init.diagonalizer.rows();
    const Eigen::Index nslices = static_cast<Eigen::Index>(p.slices.size());
    if (init.generators.rows() != nslices || init.diagonalizer.cols() != rank)
        throw std::invalid_argument("jevd_refine: init does not match the problem");

    // Stacked slice tensor with the eta-weighted identity appended; fitting it
    // with a third factor initialized to eta on the extra slice softly
    // enforces diagonalizer * codiagonalizer^T = I.
    const Eigen::Index depth = nslices + 1;
    Matrix stacked(rank * rank, depth); // mode-3 unfolding layout: row = i*rank + j
    for (Eigen::Index w = 0; w < nslices; ++w)
        for (Eigen::Index i = 0; i < rank; ++i)
            for (Eigen::Index j = 0; j < rank; ++j)
                stacked(i * rank + j, w) = p.slices[static_cast<std::size_t>(w)](i, j);
    for (Eigen::Index i = 0; i < rank; ++i)
        for (Eigen::Index j = 0; j < rank; ++j)
            stacked(i * rank + j, nslices) = i == j ? Complex(p.eta, 0.0) : Complex(0.0, 0.0);

    // Mode-1 and mode-2 unfoldings of the same tensor (rows (j,w) and (i,w)).
    Matrix unf1(rank * depth, rank), unf2(rank * depth, rank);
    for (Eigen::Index i = 0; i < rank; ++i)
        for (Eigen::Index j = 0; j < rank; ++j)
            for (Eigen::Index w = 0; w < depth; ++w) {
                unf1(j * depth + w, i) = stacked(i * rank + j, w);
                unf2(i * depth + w, j) = stacked(i * rank + j, w);
            }

    Matrix b = init.diagonalizer;
    Matrix d = b.inverse().transpose();
    Matrix f(depth, rank);
    f.topRows(nslices) = init.generators;
    f.row(nslices) = Complex(p.eta, 0.0) * Matrix::Ones(1, rank);

    auto objective = [&](const Matrix& fb, const Matrix& fd, const Matrix& ff) {
        return (stacked - khatri_rao(fb, fd) * ff.transpose()).squaredNorm();
    };

    JevdResult out;
    out.objective_history.push_back(objective(b, d, f));
    const double scale = std::max(1.0, out.objective_history.front());
    const double floor = 1e-26 * std::max(1.0, stacked.squaredNorm());

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        b = solve_ls(khatri_rao(d, f), unf1).transpose();
        d = solve_ls(khatri_rao(b, f), unf2).transpose();
        f = solve_ls(khatri_rao(b, d), stacked).transpose();

        const double obj = objective(b, d, f);
        const double prev = out.objective_history.back();
        out.objective_history.push_back(obj);
        out.sweeps = sweep + 1;
        if (obj > prev + 1e-6 * scale)
            throw std::runtime_error("jevd_refine: objective diverged");
        if (std::abs(prev - obj) <= opts.rel_tol * prev || obj <= floor) {
            out.converged = true;
            break;
        }
    }

    // Fix the scaling ambiguity so the identity-slice row of the third factor
    // equals eta again; the generator rows then carry unit-modulus phases.
    bool normalizable = true;
    for (Eigen::Index r = 0; r < rank; ++r)
        if (std::abs(f(nslices, r)) < 1e-8 * p.eta) normalizable = false;
    if (normalizable) {
        for (Eigen::Index r = 0; r < rank; ++r) {
            const Complex gamma = Complex(p.eta, 0.0) / f(nslices, r);
            f.col(r) *= gamma;
            d.col(r) /= gamma;
        }
    }
    for (Eigen::Index r = 0; r < rank; ++r) {
        const double nrm = b.col(r).norm();
        if (nrm > 0.0) {
            b.col(r) /= nrm;
            d.col(r) *= nrm;
        }
    }

    out.diagonalizer = b;
    if (normalizable) {
        out.generators = f.topRows(nslices);
        RealVector offdiag;
        Matrix unused;
        diagonal_table(b, p.slices, unused, offdiag);
        out.slice_offdiag = offdiag;
    } else {
        diagonal_table(b, p.slices, out.generators, out.slice_offdiag);
    }
    return out;
}

FactorSet recover_factors(const ReducedData& rd, const Matrix& diagonalizer) {
    const Eigen::Index rank = diagonalizer.rows();
    if (diagonalizer.cols() != rank)
        throw std::invalid_argument("recover_factors: diagonalizer must be square");
    if (condition_number(diagonalizer) > kSingularDiagCond)
        throw std::invalid_argument("recover_factors: singular diagonalizer");

    const auto lu = diagonalizer.partialPivLu();
    FactorSet f;
    for (const Tensor3& t : rd.tensors) {
        const int elements = t.dim1(), pulses = t.dim3();
        // unfolded * B^-T, one column per component; each column reshapes to
        // an elements x pulses rank-1 matrix.
        const Matrix omega = lu.solve(unfold_mode2(t).transpose()).transpose();
        Matrix a(elements, rank), c(pulses, rank);
        for (Eigen::Index r = 0; r < rank; ++r) {
            Matrix block(elements, pulses);
            for (int i = 0; i < elements; ++i)
                for (int k = 0; k < pulses; ++k)
                    block(i, k) = omega(static_cast<Eigen::Index>(i) * pulses + k, r);
            const Rank1Pair pair = dominant_rank1(block);
            a.col(r) = pair.left;
            c.col(r) = pair.right;
        }
        f.A.push_back(std::move(a));
        f.C.push_back(std::move(c));
    }
    f.B = rd.projector * diagonalizer;
    return f;
}

AlsResult ccpd_als(std::span<const Tensor3> tensors, const FactorSet& init,
                   const AlsOptions& opts) {
    const int count = static_cast<int>(tensors.size());
    if (count == 0) throw std::invalid_argument("ccpd_als: no tensors");
    if (init.count() != count)
        throw std::invalid_argument("ccpd_als: factor set does not match tensor count");
    const int rank = init.rank();
    for (int m = 0; m < count; ++m) {
        if (init.A[m].rows() != tensors[m].dim1() || init.C[m].rows() != tensors[m].dim3() ||
            init.B.rows() != tensors[m].dim2() || init.A[m].cols() != rank ||
            init.C[m].cols() != rank)
            throw std::invalid_argument("ccpd_als: factor shapes do not match tensors");
    }

    std::vector<Matrix> unf1(count), unf2(count), unf3(count);
    double data_norm2 = 0.0;
    Eigen::Index stacked_rows = 0;
    for (int m = 0; m < count; ++m) {
        unf1[m] = unfold_mode1(tensors[m]);
        unf2[m] = unfold_mode2(tensors[m]);
        unf3[m] = unfold_mode3(tensors[m]);
        data_norm2 += tensors[m].squared_norm();
        stacked_rows += unf2[m].rows();
    }

    AlsResult out;
    out.factors = init;
    FactorSet& f = out.factors;

    auto objective = [&]() {
        double s = 0.0;
        for (int m = 0; m < count; ++m)
            s += (unf3[m] - khatri_rao(f.A[m], f.B) * f.C[m].transpose()).squaredNorm();
        return s;
    };

    out.objective_history.push_back(objective());
    const double floor = 1e-26 * std::max(1.0, data_norm2);
    if (out.objective_history.front() <= floor) {
        out.converged = true;
        return out;
    }

    Matrix stacked_kr(stacked_rows, rank);
    Matrix stacked_rhs(stacked_rows, init.B.rows());

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        for (int m = 0; m < count; ++m)
            f.A[m] = solve_ls(khatri_rao(f.B, f.C[m]), unf1[m]).transpose();

        // One stacked solve for the shared factor across all tensors.
        Eigen::Index row = 0;
        for (int m = 0; m < count; ++m) {
            const Eigen::Index n = unf2[m].rows();
            stacked_kr.middleRows(row, n) = khatri_rao(f.A[m], f.C[m]);
            stacked_rhs.middleRows(row, n) = unf2[m];
            row += n;
        }
        f.B = solve_ls(stacked_kr, stacked_rhs).transpose();

        double obj = 0.0;
        for (int m = 0; m < count; ++m) {
            const Matrix kr = khatri_rao(f.A[m], f.B);
            f.C[m] = solve_ls(kr, unf3[m]).transpose();
            obj += (unf3[m] - kr * f.C[m].transpose()).squaredNorm();
        }

        const double prev = out.objective_history.back();
        out.objective_history.push_back(obj);
        out.sweeps = sweep + 1;
        if (std::abs(prev - obj) <= opts.rel_tol * prev || obj <= floor) {
            out.converged = true;
            break;
        }
    }
    return out;
}

FactorSet random_factors(std::span<const Tensor3> tensors, int rank, Rng& rng) {
    if (tensors.empty()) throw std::invalid_argument("random_factors: no tensors");
    FactorSet f;
    f.B.resize(tensors[0].dim2(), rank);
    for (Eigen::Index i = 0; i < f.B.rows(); ++i)
        for (Eigen::Index r = 0; r < rank; ++r) f.B(i, r) = rng.complex_normal();
    for (const Tensor3& t : tensors) {
        Matrix a(t.dim1(), rank), c(t.dim3(), rank);
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index r = 0; r < rank; ++r) a(i, r) = rng.complex_normal();
        for (Eigen::Index k = 0; k < c.rows(); ++k)
            for (Eigen::Index r = 0; r < rank; ++r) c(k, r) = rng.complex_normal();
        f.A.push_back(std::move(a));
        f.C.push_back(std::move(c));
    }
    return f;
}

} // namespace cmr
