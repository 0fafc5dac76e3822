#ifndef CMR_SIM_HPP
#define CMR_SIM_HPP

#include <span>
#include <vector>

#include "cmr/geometry.hpp"
#include "cmr/rng.hpp"
#include "cmr/tensor.hpp"
#include "cmr/types.hpp"

namespace cmr {

/// Scene template: array placements, target region, and signal sizes.
/// Distances are in carrier wavelengths.
struct SceneConfig {
    ArrayGeometry tx_geometry;
    std::vector<ArrayGeometry> rx_geometries;

    Vec3 tx_center{0.0, -8000.0, 0.0};
    std::vector<Vec3> rx_centers{{-8000.0, 8000.0, 0.0}, {0.0, 8000.0, 0.0}, {8000.0, 8000.0, 0.0}};

    Vec3 region_min{-7000.0, -7000.0, 4000.0};
    Vec3 region_max{7000.0, 7000.0, 8000.0};

    int targets = 1;
    int pulses = 1;
    int samples = 1;

    /// Minimum angular separation (degrees) between any two targets as seen
    /// from every array; draws violating it are resampled.
    double min_separation_deg = 0.5;
};

/// One concrete simulated scene.
struct Scene {
    ArrayGeometry tx_geometry;
    std::vector<ArrayGeometry> rx_geometries;
    Vec3 tx_center;
    std::vector<Vec3> rx_centers;
    std::vector<Vec3> targets;
    int pulses = 0;
    int samples = 0;

    int num_targets() const { return static_cast<int>(targets.size()); }
    int num_arrays() const { return static_cast<int>(rx_geometries.size()); }

    /// Far-field arrival direction of target r at receive array m.
    Direction doa(int m, int r) const { return Direction(targets[r] - rx_centers[m]); }
    /// Far-field departure direction toward target r.
    Direction dod(int r) const { return Direction(targets[r] - tx_center); }
};

/// Signal/noise levels; SNR = 20 lg(sigma_s / sigma_n) with sigma_s fixed to 1.
struct NoiseSpec {
    double snr_db = 0.0;

    double sigma_s() const { return 1.0; }
    double sigma_n() const { return std::pow(10.0, -snr_db / 20.0); }
};

/// Everything the simulator knows that an estimator must recover.
struct GroundTruth {
    Matrix probing;                   // S: samples x tx elements
    Matrix transmit_steering;         // tx elements x targets
    Matrix b;                         // probing * transmit_steering
    std::vector<Matrix> rx_steering;  // per array: rx elements x targets
    std::vector<Matrix> rcs;          // per array: pulses x targets
    std::vector<Tensor3> clean;       // per array: elements x samples x pulses

    FactorSet factors() const;
};

/// Draws target positions uniformly in the configured box, resampling any
/// draw that puts two targets closer than the separation margin at any
/// array. Deterministic per seed.
Scene random_scene(const SceneConfig& cfg, std::uint64_t seed);

/// Probing matrix with i.i.d. entries whose real and imaginary parts are
/// independent N(0,1).
Matrix gen_probing(int samples, int tx_elements, Rng& rng);

/// Per-array reflection coefficient matrices, i.i.d. complex Gaussian across
/// pulses, targets, and arrays (coefficients redraw every pulse).
std::vector<Matrix> gen_rcs(int pulses, int targets, int arrays, Rng& rng);

/// Assembles noise-free observation tensors from a scene and the given
/// probing/reflection draws; also returns the generating factors.
GroundTruth gen_observation(const Scene& scene, const Matrix& probing,
                            const std::vector<Matrix>& rcs);

/// Convenience: probing + reflections + observations in one call.
GroundTruth simulate(const Scene& scene, Rng& rng);

/// out = sigma_s * x/||x||_F + sigma_n * n/||n||_F with n i.i.d. standard
/// complex Gaussian. Throws on a zero input tensor.
Tensor3 add_noise(const Tensor3& x, const NoiseSpec& spec, Rng& rng);

} // namespace cmr

#endif
