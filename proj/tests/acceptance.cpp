// Acceptance suite: one self-contained check per release criterion, each
// printing a single PASS/FAIL line. Run with no arguments for all criteria,
// or pass criterion numbers to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cmr/evaluation.hpp"
#include "cmr/experiment.hpp"
#include "cmr/linalg.hpp"

using namespace cmr;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TrialData {
    Scene scene;
    GroundTruth truth;
    std::vector<Tensor3> observed;
};

/// Mirrors the harness data path: scene and noise derive from (seed, snr, trial).
TrialData make_trial(const ExperimentConfig& cfg, const SceneConfig& sc, std::size_t snr_index,
                     int trial, double snr_db) {
    Rng rng = Rng::derive(cfg.seed, {1ull, static_cast<std::uint64_t>(snr_index),
                                     static_cast<std::uint64_t>(trial)});
    TrialData d;
    d.scene = random_scene(sc, rng.next_u64());
    d.truth = simulate(d.scene, rng);
    for (const Tensor3& x : d.truth.clean)
        d.observed.push_back(add_noise(x, NoiseSpec{snr_db}, rng));
    return d;
}

double trial_mae(const TrialData& d, const PipelineResult& res) {
    std::vector<std::vector<Direction>> truth(d.scene.num_arrays());
    for (int m = 0; m < d.scene.num_arrays(); ++m)
        for (int r = 0; r < d.scene.num_targets(); ++r) truth[m].push_back(d.scene.doa(m, r));
    return mae(truth, apply_alignment(res.doas, align_directions(truth, res.doas)));
}

double mean_of(const std::vector<TrialRecord>& records, double snr, Method method,
               double TrialRecord::*field) {
    double sum = 0.0;
    int n = 0;
    for (const TrialRecord& r : records)
        if (r.method == method && (r.snr_db == snr || (std::isinf(snr) && std::isinf(r.snr_db)))) {
            sum += r.*field;
            ++n;
        }
    return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

// --- criteria -------------------------------------------------------------

bool geometry_counts(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const int rx_l = build_cplsa({4, 7, 4, 4}, {4, 7, 4, 4}).size();
    const int tx_l = build_cplsa({3, 5, 8, 8}, {3, 5, 8, 8}).size();
    const int rx_p = build_cppa({3, 5, 3, 3}, {3, 5, 3, 3}).size();
    const int tx_p = build_cppa({4, 7, 4, 4}, {4, 7, 4, 4}).size();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream os;
    os << "cplsa rx/tx = " << rx_l << "/" << tx_l << ", cppa rx/tx = " << rx_p << "/" << tx_p
       << ", " << secs << " s";
    detail = os.str();
    return rx_l == 13 && tx_l == 27 && rx_p == 25 && tx_p == 49 && secs < 1.0;
}

bool noiseless_exactness(const std::vector<std::string>& presets, std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_mae = 0.0, worst_factor = 0.0, worst_position = 0.0;
    for (const std::string& name : presets) {
        ExperimentConfig cfg = ExperimentConfig::from_preset(name);
        cfg.seed = 2026;
        const SceneConfig sc = cfg.scene_config();
        for (int trial = 0; trial < 10; ++trial) {
            const TrialData d = make_trial(cfg, sc, 0, trial, kInf);
            Rng method_rng =
                Rng::derive(cfg.seed, {2ull, 0ull, static_cast<std::uint64_t>(trial), 17ull});
            const PipelineResult res =
                run_pipeline(Method::CcpdJevd, d.scene, d.observed, cfg.targets, method_rng);
            worst_mae = std::max(worst_mae, trial_mae(d, res));
            worst_factor = std::max(worst_factor, factor_error(res.factors, d.truth.factors()));

            // fused positions, relative to the scene scale
            std::vector<std::vector<Direction>> truth(d.scene.num_arrays());
            for (int m = 0; m < d.scene.num_arrays(); ++m)
                for (int r = 0; r < cfg.targets; ++r) truth[m].push_back(d.scene.doa(m, r));
            const std::vector<int> perm = align_directions(truth, res.doas);
            for (int r = 0; r < cfg.targets; ++r) {
                const Vec3& est = res.positions[static_cast<std::size_t>(perm[r])];
                const Vec3& ref = d.scene.targets[static_cast<std::size_t>(r)];
                worst_position = std::max(worst_position, (est - ref).norm() / ref.norm());
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os << "worst mae = " << worst_mae << " rad, worst factor error = " << worst_factor
       << ", worst relative position error = " << worst_position << ", " << secs << " s";
    detail = os.str();
    return worst_mae < 1e-4 && worst_factor < 1e-6 && worst_position < 1e-3 && secs < 60.0;
}

bool condition_classification(std::string& detail) {
    struct Row {
        const char* preset;
        Scenario expected;
    };
    const Row rows[] = {{"A-1", Scenario::Overdetermined},
                        {"A-2", Scenario::SlightlyUnderdetermined},
                        {"A-3", Scenario::HighlyUnderdetermined},
                        {"B-1", Scenario::Overdetermined},
                        {"B-2", Scenario::SlightlyUnderdetermined},
                        {"B-3", Scenario::HighlyUnderdetermined}};
    bool ok = true;
    std::ostringstream os;
    for (const Row& row : rows) {
        const ExperimentConfig cfg = ExperimentConfig::from_preset(row.preset);
        const SceneConfig sc = cfg.scene_config();
        const WorkingConditionReport rep = check_conditions(
            sc.rx_geometries, cfg.targets, cfg.pulses, cfg.samples, cfg.tx_elements());
        const bool match = rep.satisfied && rep.scenario == row.expected;
        ok = ok && match;
        os << row.preset << "=" << to_string(rep.scenario) << (match ? " " : " (MISMATCH) ");
    }
    detail = os.str();
    return ok;
}

bool monotone_noise_response(std::string& detail) {
    ExperimentConfig cfg = ExperimentConfig::from_preset("A-1");
    cfg.seed = 777;
    cfg.trials = 20;
    cfg.snr_grid = {-5.0, 5.0, 15.0};
    cfg.methods = {Method::CcpdJevd};
    cfg.workers = 4;
    const auto records = run_experiment(cfg);

    std::vector<double> means;
    for (double snr : cfg.snr_grid)
        means.push_back(mean_of(records, snr, Method::CcpdJevd, &TrialRecord::mae_rad));
    std::ostringstream os;
    os << "mean mae = " << means[0] << " / " << means[1] << " / " << means[2];
    detail = os.str();
    return means[1] <= 0.9 * means[0] && means[2] <= 0.9 * means[1];
}

bool refinement_helps(std::string& detail) {
    ExperimentConfig cfg = ExperimentConfig::from_preset("A-1");
    cfg.seed = 4242;
    cfg.trials = 20;
    cfg.snr_grid = {0.0};
    cfg.methods = {Method::CcpdJevd, Method::CcpdAlsAlg};
    cfg.workers = 4;
    const auto records = run_experiment(cfg);
    const double mae_jevd = mean_of(records, 0.0, Method::CcpdJevd, &TrialRecord::mae_rad);
    const double mae_als = mean_of(records, 0.0, Method::CcpdAlsAlg, &TrialRecord::mae_rad);

    // per-sweep monotonicity of the refinement objective
    const SceneConfig sc = cfg.scene_config();
    bool monotone = true;
    double worst_rise = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const TrialData d = make_trial(cfg, sc, 0, trial, 0.0);
        Rng method_rng =
            Rng::derive(cfg.seed, {2ull, 0ull, static_cast<std::uint64_t>(trial), 17ull});
        const PipelineResult res =
            run_pipeline(Method::CcpdJevd, d.scene, d.observed, cfg.targets, method_rng);
        if (!res.jevd) {
            detail = "refinement diagnostics missing";
            return false;
        }
        const std::vector<double>& h = res.jevd->objective_history;
        const double slack = 1e-12 * std::max(1.0, h.front());
        for (std::size_t i = 1; i < h.size(); ++i) {
            worst_rise = std::max(worst_rise, h[i] - h[i - 1]);
            if (h[i] > h[i - 1] + slack) monotone = false;
        }
    }

    std::ostringstream os;
    os << "mean mae als-alg = " << mae_als << " vs jevd = " << mae_jevd
       << (monotone ? ", refinement monotone" : ", refinement NOT monotone") << " (worst rise "
       << worst_rise << ")";
    detail = os.str();
    return mae_als <= mae_jevd && monotone;
}

bool jevd_oracle_equivalence(std::string& detail) {
    Rng rng(808);
    double worst = 1.0;
    for (const int rank : {2, 3}) {
        for (int instance = 0; instance < 20; ++instance) {
            Matrix b;
            for (;;) {
                b = Matrix(rank, rank);
                for (int i = 0; i < rank; ++i)
                    for (int j = 0; j < rank; ++j) b(i, j) = rng.complex_normal();
                if (condition_number(b) < 20.0) break;
            }
            JevdProblem p;
            const Matrix b_inv = b.inverse();
            std::vector<Matrix> zs;
            for (int w = 0; w < 4; ++w) {
                Matrix z = Matrix::Zero(rank, rank);
                for (int r = 0; r < rank; ++r)
                    z(r, r) = std::polar(1.0, rng.uniform(-std::numbers::pi, std::numbers::pi));
                zs.push_back(z);
                p.slices.emplace_back(b * z * b_inv);
                p.provenance.push_back({0, Axis::X, 1});
            }
            // keep the oracle pencil well separated
            bool separated = true;
            for (int r = 0; r < rank && separated; ++r)
                for (int q = r + 1; q < rank; ++q)
                    if (std::abs(zs[0](r, r) / zs[1](r, r) - zs[0](q, q) / zs[1](q, q)) < 0.1)
                        separated = false;
            if (!separated) {
                --instance;
                continue;
            }

            Rng seed(instance + 1);
            const JevdResult est = jevd_refine(p, jevd_gevd_init(p, seed));

            // independent algebraic route: eigenvectors of G1 * G2^-1
            const Eigen::ComplexEigenSolver<Matrix> es(Matrix(p.slices[0] * p.slices[1].inverse()));
            const Matrix oracle = es.eigenvectors();

            const std::vector<int> perm = match_columns(est.diagonalizer, oracle);
            for (int r = 0; r < rank; ++r) {
                const double corr = std::abs(
                    est.diagonalizer.col(perm[r]).normalized().dot(oracle.col(r).normalized()));
                worst = std::min(worst, corr);
            }
        }
    }
    std::ostringstream os;
    os << "worst column correlation = " << worst;
    detail = os.str();
    return worst > 1.0 - 1e-6;
}

bool localization_closed_form(std::string& detail) {
    Rng rng(909);
    double worst_exact = 0.0;
    bool grid_ok = true;
    double worst_grid_gap = 0.0;

    for (int n = 0; n < 100; ++n) {
        const Vec3 target(rng.uniform(-7000, 7000), rng.uniform(-7000, 7000),
                          rng.uniform(4000, 8000));
        std::vector<Vec3> centers;
        std::vector<Direction> dirs;
        for (int m = 0; m < 3; ++m) {
            centers.emplace_back(rng.uniform(-9000, 9000), rng.uniform(-9000, 9000), 0.0);
            dirs.emplace_back(target - centers.back());
        }

        // concurrent lines: exact intersection
        const LocalizationResult exact = fuse_lines(centers, dirs);
        worst_exact = std::max(worst_exact, (exact.position - target).norm());

        // perturbed lines vs a dense lattice oracle
        std::vector<Direction> noisy;
        for (const Direction& d : dirs) {
            Vec3 v = d.u() + 1e-3 * Vec3(rng.normal(), rng.normal(), rng.normal());
            v.z() = std::abs(v.z());
            noisy.emplace_back(v);
        }
        const LocalizationResult fused = fuse_lines(centers, noisy);

        auto objective = [&](const Vec3& p) {
            double s = 0.0;
            for (std::size_t m = 0; m < centers.size(); ++m) {
                const Vec3 d = p - centers[m];
                const double along = d.dot(noisy[m].u());
                s += d.squaredNorm() - along * along;
            }
            return s;
        };

        // lattice around the true target, wide enough to contain the optimum
        const double extent = std::max(40.0, 1.5 * (fused.position - target).norm());
        const double step = extent / 10.0;
        Vec3 best = target;
        double best_obj = objective(target);
        for (double x = -extent; x <= extent; x += step)
            for (double y = -extent; y <= extent; y += step)
                for (double z = -extent; z <= extent; z += step) {
                    const Vec3 p = target + Vec3(x, y, z);
                    const double o = objective(p);
                    if (o < best_obj) {
                        best_obj = o;
                        best = p;
                    }
                }
        const double gap = (fused.position - best).norm();
        worst_grid_gap = std::max(worst_grid_gap, gap / step);
        if (objective(fused.position) > best_obj + 1e-9 * (1.0 + best_obj)) grid_ok = false;
        if (gap > step * std::sqrt(3.0)) grid_ok = false;
    }

    std::ostringstream os;
    os << "worst concurrent error = " << worst_exact
       << " lambda, worst grid gap = " << worst_grid_gap << " cells";
    detail = os.str();
    return worst_exact < 1e-9 && grid_ok;
}

bool timing_order(std::string& detail) {
    bool ok = true;
    std::ostringstream os;
    for (const char* preset : {"A-1", "B-1"}) {
        ExperimentConfig cfg = ExperimentConfig::from_preset(preset);
        cfg.seed = 555;
        cfg.trials = 5;
        cfg.snr_grid = {-10.0, 0.0, 10.0};
        cfg.methods = {Method::CcpdJevd, Method::CcpdAlsRand};
        cfg.workers = 1; // serial, so the wall-clock samples are undisturbed
        const auto records = run_experiment(cfg);
        for (double snr : cfg.snr_grid) {
            const double jevd = mean_of(records, snr, Method::CcpdJevd, &TrialRecord::cpu_seconds);
            const double rand =
                mean_of(records, snr, Method::CcpdAlsRand, &TrialRecord::cpu_seconds);
            ok = ok && jevd < rand;
            os << preset << "@" << snr << ": " << jevd << (jevd < rand ? " < " : " >= ") << rand
               << "  ";
        }
    }
    detail = os.str();
    return ok;
}

bool determinism(std::string& detail) {
    ExperimentConfig cfg = ExperimentConfig::from_preset("A-1");
    cfg.seed = 99;
    cfg.trials = 4;
    cfg.snr_grid = {kInf, -5.0};
    cfg.methods = {Method::CcpdJevd, Method::CcpdAlsRand};
    cfg.measure_time = false;

    std::vector<std::string> outputs;
    for (const int workers : {1, 8, 1, 8}) {
        cfg.workers = workers;
        std::ostringstream os;
        write_csv(run_experiment(cfg), os);
        outputs.push_back(os.str());
    }
    const bool ok =
        outputs[0] == outputs[1] && outputs[0] == outputs[2] && outputs[0] == outputs[3];
    std::ostringstream os;
    os << outputs[0].size() << "-byte emission identical across worker counts 1 and 8, twice";
    detail = os.str();
    return ok;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "geometry element counts", geometry_counts},
        {2, "noiseless exactness, overdetermined (A-1, B-1)",
         [](std::string& d) { return noiseless_exactness({"A-1", "B-1"}, d); }},
        {3, "noiseless exactness, underdetermined (A-2, B-3)",
         [](std::string& d) { return noiseless_exactness({"A-2", "B-3"}, d); }},
        {4, "working-condition classification", condition_classification},
        {5, "monotone noise response", monotone_noise_response},
        {6, "refinement helps and is monotone", refinement_helps},
        {7, "joint diagonalization matches the eigen oracle", jevd_oracle_equivalence},
        {8, "closed-form localization matches grid search", localization_closed_form},
        {9, "decomposition timing order", timing_order},
        {10, "bit-deterministic emission across workers", determinism},
    };
    return all;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const Criterion& c : criteria()) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%2d] %s  %-52s (%s) [%.1f s]\n", c.id, ok ? "PASS" : "FAIL", c.name,
                    detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
