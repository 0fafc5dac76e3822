#ifndef CMR_CCPD_HPP
#define CMR_CCPD_HPP

#include <span>
#include <string>
#include <vector>

#include "cmr/geometry.hpp"
#include "cmr/rng.hpp"
#include "cmr/tensor.hpp"
#include "cmr/types.hpp"

namespace cmr {

/// Observation tensors with the sample mode compressed to the model rank.
/// Each reduced tensor is elements x rank x pulses; the projector maps the
/// reduced sample mode back to the original sample space.
struct ReducedData {
    std::vector<Tensor3> tensors;
    Matrix projector; // samples x rank, orthonormal columns
};

/// Which array and sparse subarray a diagonalization slice came from.
struct SliceProvenance {
    int array = 0;
    Axis axis = Axis::X;
    int subarray = 1; // 1 or 2
};

/// The set of simultaneously diagonalizable target matrices.
struct JevdProblem {
    std::vector<Matrix> slices;               // rank x rank each
    std::vector<SliceProvenance> provenance;  // aligned with slices
    std::vector<SliceProvenance> skipped;     // candidates that failed the rank check
    double eta = 1.0;                          // regularization weight of the identity slice
};

/// Joint diagonalizer plus the recovered generator table.
struct JevdResult {
    Matrix diagonalizer;                 // the shared factor B, rank x rank
    Matrix generators;                   // one row per slice, aligned with provenance
    RealVector slice_offdiag;            // per-slice off-diagonal fraction after diagonalization
    std::vector<double> objective_history; // refinement only; one entry per sweep incl. start
    int sweeps = 0;
    bool converged = false;
};

enum class Scenario { Overdetermined, SlightlyUnderdetermined, HighlyUnderdetermined };

std::string to_string(Scenario s);

struct ConditionDetail {
    std::string name;
    long lhs = 0;
    long rhs = 0;
    bool ok = false;
};

struct WorkingConditionReport {
    bool satisfied = false;
    std::vector<ConditionDetail> detail;
    Scenario scenario = Scenario::Overdetermined;
};

/// Compresses the shared sample mode of all tensors onto the dominant
/// rank-dimensional row space of their stacked mode-2 unfoldings.
/// Throws when samples < rank or when the stack is numerically rank
/// deficient below the requested rank.
ReducedData reduce_dimension(std::span<const Tensor3> tensors, int rank);

/// Evaluates the generic sufficiency conditions for the rotational-invariance
/// construction on the given receive arrays, and classifies the scenario by
/// how the target count compares with min(elements, tx_elements).
WorkingConditionReport check_conditions(std::span<const ArrayGeometry> rx_geometries,
                                        int targets, int pulses, int samples,
                                        int tx_elements);

/// Builds the diagonalizable target matrices for L-shaped arrays: one per
/// (array, subarray) using the shift invariance of the subarray steering
/// block. Slices whose shifted system matrix is rank deficient are skipped
/// and recorded. Throws when no slice survives.
JevdProblem build_targets_cplsa(const ReducedData& rd,
                                std::span<const ArrayGeometry> rx_geometries);

/// Planar-array variant: the element mode is reshaped to its x/y grid and the
/// shift acts blockwise along one grid axis.
JevdProblem build_targets_cppa(const ReducedData& rd,
                               std::span<const ArrayGeometry> rx_geometries);

/// Algebraic initial diagonalizer from a generalized eigendecomposition of
/// two random unit-norm combinations of all slices (retried on degenerate
/// draws); reduces to a plain eigendecomposition for a single slice.
JevdResult jevd_gevd_init(const JevdProblem& p, Rng& rng);

struct RefineOptions {
    int max_sweeps = 500;
    double rel_tol = 1e-10;
};

/// Refines a diagonalizer by alternating least squares on the stacked slice
/// tensor augmented with an eta-weighted identity slice. The fit objective is
/// nonincreasing per sweep; a rise beyond roundoff slack throws.
JevdResult jevd_refine(const JevdProblem& p, const JevdResult& init,
                       const RefineOptions& opts = {});

/// Recovers the per-array factors from a diagonalizer: each column of
/// unfolded-data * B^-T reshapes to an elements x pulses matrix whose
/// dominant rank-1 pair gives one steering and one reflection column.
/// The returned shared factor is lifted back to sample space through the
/// projector.
FactorSet recover_factors(const ReducedData& rd, const Matrix& diagonalizer);

struct AlsOptions {
    int max_sweeps = 1000;
    double rel_tol = 1e-8;
};

struct AlsResult {
    FactorSet factors;
    std::vector<double> objective_history; // squared misfit per sweep incl. start
    int sweeps = 0;
    bool converged = false;
};

/// Unconstrained coupled alternating least squares on the tensor set: cycles
/// through {A^(m)}, the shared B (one stacked solve), and {C^(m)}.
/// Non-convergence within the sweep budget is reported, not thrown.
AlsResult ccpd_als(std::span<const Tensor3> tensors, const FactorSet& init,
                   const AlsOptions& opts = {});

/// Random complex Gaussian factor set matching the tensor shapes.
FactorSet random_factors(std::span<const Tensor3> tensors, int rank, Rng& rng);

} // namespace cmr

#endif
