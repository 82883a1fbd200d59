#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boostreg/core.hpp"
#include "boostreg/data.hpp"
#include "boostreg/metrics.hpp"

namespace boostreg {

/// Raw experiment request as parsed from flags and config file; unset
/// optionals are filled by resolve_experiment from the per-family and
/// per-stream defaults.
struct ExperimentInput {
    std::string algorithm = "bsgd-wu";
    StreamSpec stream;
    bool stream_seed_set = false;

    std::optional<int> m;
    std::optional<double> sigma_m2;
    std::optional<double> c;
    std::optional<int> K;
    std::optional<double> mu;
    std::optional<double> mu_z;
    std::optional<double> beta;
    std::optional<double> v;
    std::optional<double> delta_floor;
    std::optional<std::string> weighting;  // "adaptive" | "known-sigma"
    std::optional<double> sigma2;
    std::optional<int> trials;
    std::optional<int> workers;

    std::uint64_t seed = 1;
    std::string out_dir = "out";
    bool lambda_trace = false;
    bool per_trial_curves = false;
    bool timing = false;
};

/// Fully resolved experiment: every tunable has its final value and the
/// two RNG roots (data, scheduling) are fixed.
struct ExperimentConfig {
    std::string algorithm;
    BoostConfig boost;  // boost.seed is the scheduling-RNG root
    StreamSpec stream;  // stream.seed is the data-RNG root
    int trials = 1;
    int workers = 1;
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";
    bool lambda_trace = false;
    bool per_trial_curves = false;
    bool timing = false;
};

/// Valid algorithm labels, for messages and validation.
const std::vector<std::string>& algorithm_labels();

/// Apply the algorithm label, fill family/stream defaults, derive RNG
/// roots, and validate. Throws ConfigError on unknown labels or
/// inconsistent requests (e.g. a single-learner label with m != 1).
ExperimentConfig resolve_experiment(const ExperimentInput& input);

/// Aggregate of one multi-trial run.
struct RunSummary {
    int trials = 0;
    double mse_mean = 0.0;
    double mse_std = 0.0;             // sample standard deviation (0 for one trial)
    std::vector<double> mean_ase;     // pointwise mean accumulated squared error
    std::vector<RunReport> reports;   // one per trial, in trial order
    double wall_time_s = 0.0;
};

/// Run the configured trials (concurrently up to the worker count, with
/// deterministic trial-order aggregation) without touching the filesystem.
RunSummary run_trials(const ExperimentConfig& config);

/// run_trials plus artifacts: <out_dir>/ase.csv, report.csv, config.txt,
/// and optionally lambda_trace.csv / per-trial curves.
RunSummary cmd_run(const ExperimentConfig& config);

struct SweepPoint {
    double value;
    double mse_mean;  // NaN when the point failed
    double mse_std;   // NaN when the point failed
    std::string error;  // empty when the point succeeded
};

/// One cmd_run per grid value of parameter ("sigma_m2", "c" or "m") into
/// <out_dir>/point_<value>/, recording failures and continuing; writes
/// <out_dir>/sweep.csv and config.txt.
std::vector<SweepPoint> cmd_sweep(const ExperimentConfig& config, const std::string& parameter,
                                  const std::vector<double>& grid);

struct RegretRow {
    std::int64_t T;
    double regret;           // online accumulated squared error minus best batch fit
    double regret_over_lnT;  // NaN at T == 1
};

/// Single recursive learner with beta = 1 and unit weights over one
/// stream, compared at each grid length against the exact batch fit;
/// writes <out_dir>/regret.csv and config.txt. The grid must be strictly
/// increasing.
std::vector<RegretRow> cmd_regret(const ExperimentConfig& config,
                                  const std::vector<std::int64_t>& grid);

/// Generate the described stream and write it as a raw CSV dataset.
void cmd_gen(const StreamSpec& spec, const std::string& out_path);

/// Resolved key=value echo, loadable back through the CLI config option.
std::string echo_config(const ExperimentConfig& config);

}  // namespace boostreg
