#include "cmr/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cmr {

namespace {

Vec3 sample_box(const Vec3& lo, const Vec3& hi, Rng& rng) {
    return {rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()),
            rng.uniform(lo.z(), hi.z())};
}

double angle_between(const Vec3& a, const Vec3& b) {
    const double c = a.normalized().dot(b.normalized());
    return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Angular separation of two candidate targets as seen from every array
/// center (receive arrays and the transmitter alike).
bool separated(const Vec3& p, const Vec3& q, const SceneConfig& cfg, double min_rad) {
    if (angle_between(p - cfg.tx_center, q - cfg.tx_center) < min_rad) return false;
    for (const Vec3& c : cfg.rx_centers)
        if (angle_between(p - c, q - c) < min_rad) return false;
    return true;
}

} // namespace

FactorSet GroundTruth::factors() const {
    FactorSet f;
    f.A = rx_steering;
    f.B = b;
    f.C = rcs;
    return f;
}

Scene random_scene(const SceneConfig& cfg, std::uint64_t seed) {
    if (cfg.targets < 1) throw std::invalid_argument("random_scene: targets must be >= 1");
    if ((cfg.region_max - cfg.region_min).minCoeff() < 0.0)
        throw std::invalid_argument("random_scene: empty region");
    if (cfg.rx_geometries.size() != cfg.rx_centers.size())
        throw std::invalid_argument("random_scene: geometry/center count mismatch");

    Rng rng = Rng::derive(seed, {0x5c31u});
    const double min_rad = cfg.min_separation_deg * std::numbers::pi / 180.0;

    Scene s;
    s.tx_geometry = cfg.tx_geometry;
    s.rx_geometries = cfg.rx_geometries;
    s.tx_center = cfg.tx_center;
    s.rx_centers = cfg.rx_centers;
    s.pulses = cfg.pulses;
    s.samples = cfg.samples;

    constexpr int kMaxAttempts = 10000;
    while (static_cast<int>(s.targets.size()) < cfg.targets) {
        int attempts = 0;
        for (;;) {
            const Vec3 cand = sample_box(cfg.region_min, cfg.region_max, rng);
            const bool ok = std::all_of(s.targets.begin(), s.targets.end(), [&](const Vec3& t) {
                return separated(cand, t, cfg, min_rad);
            });
            if (ok) {
                s.targets.push_back(cand);
                break;
            }
            if (++attempts >= kMaxAttempts)
                throw std::runtime_error("random_scene: cannot satisfy target separation");
        }
    }
    return s;
}

Matrix gen_probing(int samples, int tx_elements, Rng& rng) {
    Matrix s(samples, tx_elements);
    for (int t = 0; t < samples; ++t)
        for (int j = 0; j < tx_elements; ++j) s(t, j) = rng.complex_normal();
    return s;
}

std::vector<Matrix> gen_rcs(int pulses, int targets, int arrays, Rng& rng) {
    std::vector<Matrix> out;
    out.reserve(arrays);
    for (int m = 0; m < arrays; ++m) {
        Matrix c(pulses, targets);
        for (int k = 0; k < pulses; ++k)
            for (int r = 0; r < targets; ++r) c(k, r) = rng.complex_normal();
        out.push_back(std::move(c));
    }
    return out;
}

GroundTruth gen_observation(const Scene& scene, const Matrix& probing,
                            const std::vector<Matrix>& rcs) {
    const int R = scene.num_targets();
    const int M = scene.num_arrays();
    if (probing.cols() != scene.tx_geometry.size())
        throw std::invalid_argument("gen_observation: probing width != transmit elements");
    if (static_cast<int>(rcs.size()) != M)
        throw std::invalid_argument("gen_observation: reflection matrices != receive arrays");
    for (const Matrix& c : rcs)
        if (c.rows() != scene.pulses || c.cols() != R)
            throw std::invalid_argument("gen_observation: reflection matrix shape mismatch");

    GroundTruth gt;
    gt.probing = probing;
    gt.rcs = rcs;

    std::vector<Direction> dods;
    dods.reserve(R);
    for (int r = 0; r < R; ++r) dods.push_back(scene.dod(r));
    gt.transmit_steering = steering_matrix(scene.tx_geometry, dods);
    gt.b = probing * gt.transmit_steering;

    gt.rx_steering.reserve(M);
    gt.clean.reserve(M);
    for (int m = 0; m < M; ++m) {
        std::vector<Direction> doas;
        doas.reserve(R);
        for (int r = 0; r < R; ++r) doas.push_back(scene.doa(m, r));
        gt.rx_steering.push_back(steering_matrix(scene.rx_geometries[m], doas));
        gt.clean.push_back(cpd_eval(gt.rx_steering[m], gt.b, gt.rcs[m]));
    }
    return gt;
}

GroundTruth simulate(const Scene& scene, Rng& rng) {
    const Matrix probing = gen_probing(scene.samples, scene.tx_geometry.size(), rng);
    const std::vector<Matrix> rcs =
        gen_rcs(scene.pulses, scene.num_targets(), scene.num_arrays(), rng);
    return gen_observation(scene, probing, rcs);
}

Tensor3 add_noise(const Tensor3& x, const NoiseSpec& spec, Rng& rng) {
    const double xn = x.frobenius_norm();
    if (xn == 0.0) throw std::invalid_argument("add_noise: zero input tensor");

    Tensor3 out(x.dim1(), x.dim2(), x.dim3());
    const double sig = spec.sigma_s() / xn;
    const auto xd = x.data();
    auto od = out.data();
    for (std::size_t n = 0; n < xd.size(); ++n) od[n] = sig * xd[n];

    const double sn = spec.sigma_n();
    if (sn > 0.0) {
        Tensor3 noise(x.dim1(), x.dim2(), x.dim3());
        auto nd = noise.data();
        for (auto& v : nd) v = rng.complex_normal();
        const double scale = sn / noise.frobenius_norm();
        for (std::size_t n = 0; n < nd.size(); ++n) od[n] += scale * nd[n];
    }
    return out;
}

} // namespace cmr
