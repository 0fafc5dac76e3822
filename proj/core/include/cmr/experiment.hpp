#ifndef CMR_EXPERIMENT_HPP
#define CMR_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cmr/pipeline.hpp"

namespace cmr {

/// Everything one Monte-Carlo experiment needs: array construction, scene
/// region, signal sizes, SNR grid, trial count, and methods under test.
/// The named presets pin the six standard configurations.
struct ExperimentConfig {
    std::string preset = "custom";

    ArrayKind kind = ArrayKind::Cplsa;
    CoprimeAxisSpec rx_x{4, 7, 4, 4}, rx_y{4, 7, 4, 4};
    CoprimeAxisSpec tx_x{3, 5, 8, 8}, tx_y{3, 5, 8, 8};

    int targets = 10;
    int pulses = 8;
    int samples = 64;

    Vec3 tx_center{0.0, -8000.0, 0.0};
    std::vector<Vec3> rx_centers{{-8000.0, 8000.0, 0.0}, {0.0, 8000.0, 0.0}, {8000.0, 8000.0, 0.0}};
    Vec3 region_min{-7000.0, -7000.0, 4000.0};
    Vec3 region_max{7000.0, 7000.0, 8000.0};
    double min_separation_deg = 0.5;

    std::vector<double> snr_grid{-25.0, -20.0, -15.0, -10.0, -5.0, 0.0, 5.0};
    int trials = 200;
    std::uint64_t seed = 1;
    std::vector<Method> methods{Method::CcpdJevd};

    int workers = 1;
    bool measure_time = true;

    /// One of A-1, A-2, A-3, B-1, B-2, B-3. Throws on unknown names.
    static ExperimentConfig from_preset(const std::string& name);

    /// Receive/transmit geometries and scene template implied by the axis specs.
    SceneConfig scene_config() const;

    int rx_elements() const;
    int tx_elements() const;

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
};

struct TrialRecord {
    std::string experiment;
    double snr_db = 0.0;
    Method method = Method::CcpdJevd;
    int trial = 0;
    double mae_rad = 0.0;
    double cpu_seconds = 0.0;
    bool converged = false;
    bool conditions_satisfied = false;
    std::string scenario;
};

/// Runs the full grid: for every (snr, method, trial) a seeded scene and noise
/// draw, the chosen decomposition, localization, and angular-error scoring
/// against the generating directions. The record set is bit-deterministic in
/// (config, seed) regardless of the worker count; only cpu_seconds varies,
/// and it is pinned to zero when measure_time is off.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

struct AggregateRow {
    std::string experiment;
    double snr_db = 0.0;
    Method method = Method::CcpdJevd;
    int trials = 0;
    double mean_mae = 0.0;
    double mean_cpu = 0.0;
    double converged_fraction = 0.0;
};

/// Per-(experiment, snr, method) arithmetic means; order-independent.
std::vector<AggregateRow> aggregate(std::span<const TrialRecord> records);

enum class OutputFormat { Csv, Json };

/// CSV columns: experiment,snr_db,method,trial,mae_rad,cpu_seconds,converged.
/// Noiseless trials carry the literal token `inf` in the snr_db column.
void write_csv(std::span<const TrialRecord> records, std::ostream& os);
std::vector<TrialRecord> parse_csv(std::istream& is);

/// JSON: an array of objects mirroring every TrialRecord field.
void write_json(std::span<const TrialRecord> records, std::ostream& os);

void emit(std::span<const TrialRecord> records, const std::filesystem::path& path,
          OutputFormat format);

/// Options of the `run` command that live outside the experiment itself.
struct RunOptions {
    ExperimentConfig experiment;
    std::string out = "results.csv";
    OutputFormat format = OutputFormat::Csv;
};

/// Key = value overrides, applied in file order; a `preset` line resets the
/// experiment before later keys refine it. Unknown keys or malformed values
/// throw std::invalid_argument. Settings from the file take precedence over
/// anything already in `opts`.
void apply_config(RunOptions& opts, std::istream& is);

/// Writes a config that apply_config reads back to the same options.
void write_config(const RunOptions& opts, std::ostream& os);

/// Grid parser for SNR values: "lo:step:hi", a comma list, or `inf` entries.
std::vector<double> parse_snr_grid(const std::string& text);

} // namespace cmr

#endif
