#include "cmr/pipeline.hpp"

#include <chrono>
#include <limits>
#include <stdexcept>

namespace cmr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

FactorSet decompose(Method method, const Scene& scene, std::span<const Tensor3> observations,
                    int targets, Rng& rng, PipelineResult& out) {
    // The optimization baseline with random initialization fits the raw
    // observations directly.
    if (method == Method::CcpdAlsRand) {
        const FactorSet init = random_factors(observations, targets, rng);
        AlsResult als = ccpd_als(observations, init);
        out.converged = als.converged;
        return als.factors;
    }

    const ReducedData rd = reduce_dimension(observations, targets);
    const JevdProblem problem = scene.rx_geometries[0].kind == ArrayKind::Cplsa
                                    ? build_targets_cplsa(rd, scene.rx_geometries)
                                    : build_targets_cppa(rd, scene.rx_geometries);
    const JevdResult init = jevd_gevd_init(problem, rng);
    const JevdResult refined = jevd_refine(problem, init);
    out.jevd = refined;

    FactorSet factors = recover_factors(rd, refined.diagonalizer);
    out.converged = refined.converged;

    if (method == Method::CcpdAlsAlg) {
        // The recovered factors (shared factor already lifted to sample
        // space) seed the optimization on the raw observations.
        AlsResult als = ccpd_als(observations, factors);
        out.converged = als.converged;
        factors = std::move(als.factors);
    }
    return factors;
}

} // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::CcpdJevd: return "ccpd-jevd";
        case Method::CcpdAlsAlg: return "ccpd-als-alg";
        case Method::CcpdAlsRand: return "ccpd-als-rand";
    }
    return "unknown";
}

std::optional<Method> parse_method(const std::string& name) {
    if (name == "ccpd-jevd") return Method::CcpdJevd;
    if (name == "ccpd-als-alg") return Method::CcpdAlsAlg;
    if (name == "ccpd-als-rand") return Method::CcpdAlsRand;
    return std::nullopt;
}

PipelineResult run_pipeline(Method method, const Scene& scene,
                            std::span<const Tensor3> observations, int targets, Rng& rng) {
    if (static_cast<int>(observations.size()) != scene.num_arrays())
        throw std::invalid_argument("run_pipeline: observation/array count mismatch");

    PipelineResult out;
    const auto start = Clock::now();
    out.factors = decompose(method, scene, observations, targets, rng, out);
    out.decomposition_seconds = seconds_since(start);

    out.doas.resize(scene.num_arrays());
    for (int m = 0; m < scene.num_arrays(); ++m) {
        out.doas[m].reserve(targets);
        for (int r = 0; r < targets; ++r)
            out.doas[m].push_back(
                estimate_doa(out.factors.A[m].col(r), scene.rx_geometries[m]));
    }

    for (int r = 0; r < targets; ++r) {
        std::vector<Direction> dirs;
        dirs.reserve(scene.num_arrays());
        for (int m = 0; m < scene.num_arrays(); ++m) dirs.push_back(out.doas[m][r]);
        try {
            const LocalizationResult loc = fuse_lines(scene.rx_centers, dirs);
            out.positions.push_back(loc.position);
            out.position_residuals.push_back(loc.residual);
        } catch (const std::runtime_error&) {
            // Parallel-line degeneracy under deep noise: no finite fusion.
            out.positions.emplace_back(Vec3::Zero());
            out.position_residuals.push_back(std::numeric_limits<double>::infinity());
        }
    }
    return out;
}

} // namespace cmr
