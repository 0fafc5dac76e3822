// Microbenchmarks for the kernels that dominate a decomposition run.

#include <benchmark/benchmark.h>

#include "cmr/ccpd.hpp"
#include "cmr/experiment.hpp"
#include "cmr/linalg.hpp"
#include "cmr/localization.hpp"

using namespace cmr;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
    return m;
}

Tensor3 random_tensor(int d1, int d2, int d3, Rng& rng) {
    Tensor3 t(d1, d2, d3);
    for (auto& v : t.data()) v = rng.complex_normal();
    return t;
}

/// One preset's observation set at 10 dB, plus its scene.
struct Instance {
    Scene scene;
    std::vector<Tensor3> tensors;
    int targets = 0;
};

Instance make_instance(const char* preset) {
    const ExperimentConfig cfg = ExperimentConfig::from_preset(preset);
    Rng rng(1234);
    Instance inst;
    inst.scene = random_scene(cfg.scene_config(), 42);
    const GroundTruth gt = simulate(inst.scene, rng);
    for (const Tensor3& x : gt.clean) inst.tensors.push_back(add_noise(x, NoiseSpec{10.0}, rng));
    inst.targets = cfg.targets;
    return inst;
}

void bm_khatri_rao(benchmark::State& state) {
    Rng rng(7);
    const int rank = static_cast<int>(state.range(0));
    const Matrix a = random_matrix(64, rank, rng);
    const Matrix b = random_matrix(45, rank, rng);
    for (auto _ : state) benchmark::DoNotOptimize(khatri_rao(a, b));
}

void bm_unfold_mode2(benchmark::State& state) {
    Rng rng(8);
    const Tensor3 t = random_tensor(25, 64, 45, rng);
    for (auto _ : state) benchmark::DoNotOptimize(unfold_mode2(t));
}

void bm_truncated_svd(benchmark::State& state) {
    Rng rng(9);
    const Matrix m = random_matrix(static_cast<int>(state.range(0)), 64, rng);
    for (auto _ : state) benchmark::DoNotOptimize(truncated_svd(m, 10));
}

void bm_gevd_pair(benchmark::State& state) {
    Rng rng(10);
    const int n = static_cast<int>(state.range(0));
    const Matrix b = random_matrix(n, n, rng);
    Matrix z1 = Matrix::Zero(n, n), z2 = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        z1(i, i) = rng.complex_normal();
        z2(i, i) = rng.complex_normal();
    }
    const Matrix g1 = b * z1 * b.inverse();
    const Matrix g2 = b * z2 * b.inverse();
    for (auto _ : state) benchmark::DoNotOptimize(gevd_pair(g1, g2));
}

void bm_reduce_dimension(benchmark::State& state) {
    const Instance inst = make_instance(state.range(0) == 0 ? "A-1" : "B-1");
    for (auto _ : state) benchmark::DoNotOptimize(reduce_dimension(inst.tensors, inst.targets));
}

void bm_build_targets(benchmark::State& state) {
    const Instance inst = make_instance(state.range(0) == 0 ? "A-1" : "B-1");
    const ReducedData rd = reduce_dimension(inst.tensors, inst.targets);
    const bool planar = inst.scene.rx_geometries[0].kind == ArrayKind::Cppa;
    for (auto _ : state) {
        if (planar)
            benchmark::DoNotOptimize(build_targets_cppa(rd, inst.scene.rx_geometries));
        else
            benchmark::DoNotOptimize(build_targets_cplsa(rd, inst.scene.rx_geometries));
    }
}

void bm_full_decomposition(benchmark::State& state) {
    const Instance inst = make_instance(state.range(0) == 0 ? "A-1" : "B-1");
    for (auto _ : state) {
        Rng rng(99);
        benchmark::DoNotOptimize(
            run_pipeline(Method::CcpdJevd, inst.scene, inst.tensors, inst.targets, rng));
    }
}

void bm_estimate_doa(benchmark::State& state) {
    const ArrayGeometry g = build_cplsa({4, 7, 4, 4}, {4, 7, 4, 4});
    const std::vector<Direction> dirs{Direction(Vec3(0.3, -0.2, 0.93))};
    const Vector col = steering_matrix(g, dirs).col(0);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_doa(col, g));
}

} // namespace

BENCHMARK(bm_khatri_rao)->Arg(10)->Arg(45);
BENCHMARK(bm_unfold_mode2);
BENCHMARK(bm_truncated_svd)->Arg(312)->Arg(3375);
BENCHMARK(bm_gevd_pair)->Arg(10)->Arg(45);
BENCHMARK(bm_reduce_dimension)->Arg(0)->Arg(1);
BENCHMARK(bm_build_targets)->Arg(0)->Arg(1);
BENCHMARK(bm_full_decomposition)->Arg(0)->Arg(1);
BENCHMARK(bm_estimate_doa);

BENCHMARK_MAIN();
