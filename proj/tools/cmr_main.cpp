// Command-line front end: Monte-Carlo experiment runs and geometry tables.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cmr/experiment.hpp"

namespace {

using namespace cmr;

struct RunFlags {
    std::string preset;
    std::string kind;
    std::string snr;
    std::string methods;
    std::string config_path;
    std::string dump_config_path;
    int trials = -1;
    long long seed = -1;
    int targets = -1, pulses = -1, samples = -1;
    int workers = -1;
    bool no_timing = false;
    std::string out;
    std::string format;
};

void apply_flags(RunOptions& opts, const RunFlags& f) {
    ExperimentConfig& e = opts.experiment;
    if (!f.preset.empty()) {
        ExperimentConfig p = ExperimentConfig::from_preset(f.preset);
        p.rx_centers = e.rx_centers;
        e = std::move(p);
    }
    if (!f.kind.empty()) {
        if (f.kind == "cplsa") e.kind = ArrayKind::Cplsa;
        else if (f.kind == "cppa") e.kind = ArrayKind::Cppa;
        else throw std::invalid_argument("unknown array kind: " + f.kind);
    }
    if (!f.snr.empty()) e.snr_grid = parse_snr_grid(f.snr);
    if (!f.methods.empty()) {
        e.methods.clear();
        std::stringstream ss(f.methods);
        std::string name;
        while (std::getline(ss, name, ',')) {
            const auto m = parse_method(name);
            if (!m) throw std::invalid_argument("unknown method: " + name);
            e.methods.push_back(*m);
        }
    }
    if (f.trials >= 0) e.trials = f.trials;
    if (f.seed >= 0) e.seed = static_cast<std::uint64_t>(f.seed);
    if (f.targets >= 0) e.targets = f.targets;
    if (f.pulses >= 0) e.pulses = f.pulses;
    if (f.samples >= 0) e.samples = f.samples;
    if (f.workers >= 0) e.workers = f.workers;
    if (f.no_timing) e.measure_time = false;
    if (!f.out.empty()) opts.out = f.out;
    if (!f.format.empty()) {
        if (f.format == "csv") opts.format = OutputFormat::Csv;
        else if (f.format == "json") opts.format = OutputFormat::Json;
        else throw std::invalid_argument("unknown format: " + f.format);
    }
}

int do_run(const RunFlags& flags) {
    RunOptions opts;
    apply_flags(opts, flags);

    // The config file wins over every flag.
    if (!flags.config_path.empty()) {
        std::ifstream is(flags.config_path);
        if (!is) {
            std::cerr << "error: cannot read config file " << flags.config_path << "\n";
            return 2;
        }
        apply_config(opts, is);
    }
    if (!flags.dump_config_path.empty()) {
        std::ofstream os(flags.dump_config_path, std::ios::binary);
        if (!os) {
            std::cerr << "error: cannot write config file " << flags.dump_config_path << "\n";
            return 2;
        }
        write_config(opts, os);
    }

    const std::vector<TrialRecord> records = run_experiment(opts.experiment);
    emit(records, opts.out, opts.format);

    std::cout << "wrote " << records.size() << " trial records to " << opts.out << "\n\n";
    std::cout << std::left << std::setw(12) << "experiment" << std::setw(10) << "snr_db"
              << std::setw(16) << "method" << std::setw(8) << "trials" << std::setw(14)
              << "mean_mae_rad" << std::setw(14) << "mean_cpu_s" << "converged\n";
    for (const AggregateRow& row : aggregate(records)) {
        std::ostringstream snr;
        if (std::isinf(row.snr_db)) snr << "inf";
        else snr << row.snr_db;
        std::cout << std::left << std::setw(12) << row.experiment << std::setw(10) << snr.str()
                  << std::setw(16) << to_string(row.method) << std::setw(8) << row.trials
                  << std::setw(14) << std::scientific << std::setprecision(3) << row.mean_mae
                  << std::setw(14) << row.mean_cpu << std::defaultfloat
                  << row.converged_fraction << "\n";
    }
    return 0;
}

void print_axis_table(const std::string& label, const ArrayGeometry& g) {
    std::cout << label << ": " << g.size() << " elements ("
              << (g.kind == ArrayKind::Cplsa ? "cplsa" : "cppa") << ")\n";
    std::cout << "  x axis (steps " << g.x_spec.m_step << "," << g.x_spec.n_step << "): ";
    for (int c : g.axis_x) std::cout << c << " ";
    std::cout << "\n  y axis (steps " << g.y_spec.m_step << "," << g.y_spec.n_step << "): ";
    for (int c : g.axis_y) std::cout << c << " ";
    std::cout << "\n  positions (units of half wavelength):\n";
    for (int i = 0; i < g.size(); ++i) {
        const Vec3& p = g.positions[i];
        std::cout << "    [" << i << "] (" << p.x() << ", " << p.y() << ", " << p.z() << ")\n";
    }
}

int do_geometry(const RunFlags& flags) {
    RunOptions opts;
    apply_flags(opts, flags);
    if (!flags.config_path.empty()) {
        std::ifstream is(flags.config_path);
        if (!is) {
            std::cerr << "error: cannot read config file " << flags.config_path << "\n";
            return 2;
        }
        apply_config(opts, is);
    }
    const ExperimentConfig& e = opts.experiment;
    const SceneConfig sc = e.scene_config();
    print_axis_table("transmit array", sc.tx_geometry);
    std::cout << "\n";
    print_axis_table("receive array (x" + std::to_string(sc.rx_geometries.size()) + ")",
                     sc.rx_geometries[0]);
    return 0;
}

void add_common_flags(CLI::App* cmd, RunFlags& flags) {
    cmd->add_option("--preset", flags.preset, "Experiment preset (A-1..A-3, B-1..B-3)");
    cmd->add_option("--kind", flags.kind, "Array kind for custom runs (cplsa|cppa)");
    cmd->add_option("--targets,-R", flags.targets, "Number of targets");
    cmd->add_option("--pulses,-K", flags.pulses, "Pulses per coherent interval");
    cmd->add_option("--samples,-T", flags.samples, "Samples per pulse");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coprime multistatic MIMO-radar localization benchmarks"};
    app.require_subcommand(1);

    RunFlags flags;
    CLI::App* run = app.add_subcommand("run", "Run a Monte-Carlo experiment");
    add_common_flags(run, flags);
    run->add_option("--snr", flags.snr, "SNR grid in dB: lo:step:hi or comma list; inf = noiseless");
    run->add_option("--trials", flags.trials, "Monte-Carlo trials per grid point");
    run->add_option("--seed", flags.seed, "Root seed for all random streams");
    run->add_option("--methods", flags.methods,
                    "Comma list of ccpd-jevd,ccpd-als-alg,ccpd-als-rand");
    run->add_option("--workers", flags.workers, "Concurrent trial workers");
    run->add_flag("--no-timing", flags.no_timing, "Record cpu_seconds as 0 (reproducible output)");
    run->add_option("--out", flags.out, "Output path");
    run->add_option("--format", flags.format, "Output format (csv|json)");
    run->add_option("--config", flags.config_path, "Config file; overrides all flags");
    run->add_option("--dump-config", flags.dump_config_path, "Write the effective config and run");

    CLI::App* geometry = app.add_subcommand("geometry", "Print sensor tables for a configuration");
    add_common_flags(geometry, flags);
    geometry->add_option("--config", flags.config_path, "Config file; overrides all flags");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return do_run(flags);
        return do_geometry(flags);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
