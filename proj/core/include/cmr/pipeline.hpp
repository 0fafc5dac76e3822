#ifndef CMR_PIPELINE_HPP
#define CMR_PIPELINE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmr/ccpd.hpp"
#include "cmr/localization.hpp"
#include "cmr/sim.hpp"

namespace cmr {

enum class Method { CcpdJevd, CcpdAlsAlg, CcpdAlsRand };

std::string to_string(Method m);
std::optional<Method> parse_method(const std::string& name);

struct PipelineResult {
    FactorSet factors;                          // shared factor in sample space
    std::vector<std::vector<Direction>> doas;   // [array][component]
    std::vector<Vec3> positions;                // fused position per component
    std::vector<double> position_residuals;
    std::optional<JevdResult> jevd;             // refinement diagnostics when run
    bool converged = false;
    double decomposition_seconds = 0.0;         // excludes localization
};

/// Runs one decomposition method on a set of (possibly noisy) observation
/// tensors and turns the recovered steering columns into directions and fused
/// positions. The timed span covers dimensionality reduction through factor
/// recovery only.
PipelineResult run_pipeline(Method method, const Scene& scene,
                            std::span<const Tensor3> observations, int targets,
                            Rng& rng);

} // namespace cmr

#endif
