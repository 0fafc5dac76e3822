#ifndef CMR_EVALUATION_HPP
#define CMR_EVALUATION_HPP

#include <vector>

#include "cmr/geometry.hpp"
#include "cmr/tensor.hpp"
#include "cmr/types.hpp"

namespace cmr {

/// Minimum-cost assignment of a square cost matrix (Hungarian algorithm):
/// returns the column assigned to each row.
std::vector<int> min_cost_assignment(const RealMatrix& cost);

/// Permutation aligning the columns of est with those of ref by normalized
/// column correlation: est column perm[r] corresponds to ref column r.
/// Hungarian assignment for up to 64 columns, greedy beyond that.
std::vector<int> match_columns(const Matrix& est, const Matrix& ref);

/// Relative factor error after resolving the permutation (from the shared
/// factor) and the per-column complex scales: the worst relative Frobenius
/// misfit over all factor matrices. Decomposition quality metric for tests
/// and experiments.
double factor_error(const FactorSet& est, const FactorSet& ref);

/// Single cross-array permutation aligning estimated arrival directions with
/// the truth: est[m][perm[r]] pairs with truth[m][r], minimizing the summed
/// angular cost.
std::vector<int> align_directions(const std::vector<std::vector<Direction>>& truth,
                                  const std::vector<std::vector<Direction>>& est);

/// Applies a column alignment: out[m][r] = est[m][perm[r]].
std::vector<std::vector<Direction>> apply_alignment(
    const std::vector<std::vector<Direction>>& est, const std::vector<int>& perm);

} // namespace cmr

#endif
