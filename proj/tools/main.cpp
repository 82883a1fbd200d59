#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "boostreg/core.hpp"
#include "boostreg/data.hpp"
#include "boostreg/experiment.hpp"

namespace {

using boostreg::ConfigError;
using boostreg::ExperimentInput;
using boostreg::StreamKind;

StreamKind parse_stream_kind(const std::string& name) {
    if (name == "stationary") return StreamKind::stationary;
    if (name == "duffing") return StreamKind::duffing;
    if (name == "csv") return StreamKind::csv;
    throw ConfigError("unknown stream kind '" + name + "' (stationary, duffing, csv)");
}

struct Bound {
    ExperimentInput in;
    std::string stream_name = "stationary";
    CLI::Option* stream_seed_opt = nullptr;
    std::string config_path;
    // config key -> the option that covers the same field, so explicit
    // command-line flags can take precedence over config-file values
    std::map<std::string, CLI::Option*> key_opts;
};

CLI::Option* track(Bound& b, const std::string& key, CLI::Option* opt) {
    b.key_opts[key] = opt;
    return opt;
}

std::string trim(const std::string& s) {
    std::size_t lo = s.find_first_not_of(" \t");
    if (lo == std::string::npos) return "";
    std::size_t hi = s.find_last_not_of(" \t");
    return s.substr(lo, hi - lo + 1);
}

double num_value(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != v.size())
        throw ConfigError("config file: bad number '" + v + "' for key '" + key + "'");
    return x;
}

std::int64_t int_value(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    std::int64_t x = 0;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != v.size())
        throw ConfigError("config file: bad integer '" + v + "' for key '" + key + "'");
    return x;
}

std::uint64_t u64_value(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    std::uint64_t x = 0;
    try {
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != v.size() || (!v.empty() && v[0] == '-'))
        throw ConfigError("config file: bad seed '" + v + "' for key '" + key + "'");
    return x;
}

bool bool_value(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config file: bad flag value '" + v + "' for key '" + key +
                      "' (expected true or false)");
}

void apply_config_value(Bound& b, const std::string& key, const std::string& value) {
    if (key == "algorithm") {
        b.in.algorithm = value;
    } else if (key == "stream") {
        b.stream_name = value;
    } else if (key == "length") {
        b.in.stream.length = int_value(key, value);
    } else if (key == "noise-var") {
        b.in.stream.noise_var = num_value(key, value);
    } else if (key == "rho") {
        b.in.stream.rho = num_value(key, value);
    } else if (key == "stream-seed") {
        b.in.stream.seed = u64_value(key, value);
        b.in.stream_seed_set = true;
    } else if (key == "csv-path") {
        b.in.stream.path = value;
    } else if (key == "csv-header") {
        b.in.stream.has_header = bool_value(key, value);
    } else if (key == "target-col") {
        b.in.stream.target_column = static_cast<int>(int_value(key, value));
    } else if (key == "m") {
        b.in.m = static_cast<int>(int_value(key, value));
    } else if (key == "sigma-m2") {
        b.in.sigma_m2 = num_value(key, value);
    } else if (key == "c") {
        b.in.c = num_value(key, value);
    } else if (key == "K") {
        b.in.K = static_cast<int>(int_value(key, value));
    } else if (key == "mu") {
        b.in.mu = num_value(key, value);
    } else if (key == "mu-z") {
        b.in.mu_z = num_value(key, value);
    } else if (key == "beta") {
        b.in.beta = num_value(key, value);
    } else if (key == "v") {
        b.in.v = num_value(key, value);
    } else if (key == "delta-floor") {
        b.in.delta_floor = num_value(key, value);
    } else if (key == "weighting") {
        b.in.weighting = value;
    } else if (key == "sigma2") {
        b.in.sigma2 = num_value(key, value);
    } else if (key == "seed") {
        b.in.seed = u64_value(key, value);
    } else if (key == "trials") {
        b.in.trials = static_cast<int>(int_value(key, value));
    } else if (key == "workers") {
        b.in.workers = static_cast<int>(int_value(key, value));
    } else if (key == "out-dir") {
        b.in.out_dir = value;
    } else if (key == "lambda-trace") {
        b.in.lambda_trace = bool_value(key, value);
    } else if (key == "per-trial-curves") {
        b.in.per_trial_curves = bool_value(key, value);
    } else if (key == "timing") {
        b.in.timing = bool_value(key, value);
    } else {
        throw ConfigError("config file: unknown key '" + key + "'");
    }
}

// Loads a saved config.txt (flat key=value lines, # comments, optional
// double quotes around values). Keys given explicitly on the command line
// keep their command-line values.
void apply_config_file(Bound& b) {
    if (b.config_path.empty()) return;
    std::ifstream in(b.config_path);
    if (!in) throw boostreg::IoError("cannot open config file '" + b.config_path + "'");
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string entry = trim(line);
        if (entry.empty() || entry[0] == '#') continue;
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file: line is not key=value: '" + entry + "'");
        const std::string key = trim(entry.substr(0, eq));
        std::string value = trim(entry.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        auto it = b.key_opts.find(key);
        if (it == b.key_opts.end())
            throw ConfigError("config file: unknown key '" + key + "'");
        if (it->second->count() > 0) continue;
        apply_config_value(b, key, value);
    }
}

void add_stream_options(CLI::App* sub, Bound& b) {
    track(b, "stream",
          sub->add_option("--stream", b.stream_name, "input stream: stationary, duffing, csv")
              ->capture_default_str());
    track(b, "length",
          sub->add_option("--length", b.in.stream.length, "stream length for generated streams")
              ->capture_default_str());
    track(b, "noise-var",
          sub->add_option("--noise-var", b.in.stream.noise_var,
                          "observation noise variance (stationary stream)")
              ->capture_default_str());
    track(b, "rho",
          sub->add_option("--rho", b.in.stream.rho, "input correlation (stationary stream)")
              ->capture_default_str());
    b.stream_seed_opt =
        track(b, "stream-seed",
              sub->add_option("--stream-seed", b.in.stream.seed,
                              "pin the data RNG root (default: derived from --seed)"));
    track(b, "csv-path", sub->add_option("--csv-path", b.in.stream.path, "csv file to stream"));
    track(b, "csv-header",
          sub->add_flag("--csv-header", b.in.stream.has_header, "skip the first csv row"));
    track(b, "target-col",
          sub->add_option("--target-col", b.in.stream.target_column,
                          "0-based target column; -1 means last")
              ->capture_default_str());
}

void add_experiment_options(CLI::App* sub, Bound& b) {
    sub->add_option("--config", b.config_path, "load options from a saved config.txt");
    track(b, "algorithm",
          sub->add_option("--algorithm", b.in.algorithm,
                          "sgd, nm, or boosted variants bsgd-/bnm- with -wu, -dr, -ru, -oza")
              ->capture_default_str());
    add_stream_options(sub, b);
    track(b, "m", sub->add_option("--m", b.in.m, "ensemble size"));
    track(b, "sigma-m2", sub->add_option("--sigma-m2", b.in.sigma_m2, "target residual variance"));
    track(b, "c", sub->add_option("--c", b.in.c, "weight decay exponent scale"));
    track(b, "K", sub->add_option("--K", b.in.K, "data-reuse repetition cap"));
    track(b, "mu", sub->add_option("--mu", b.in.mu, "learner step size"));
    track(b, "mu-z", sub->add_option("--mu-z", b.in.mu_z, "combiner step size"));
    track(b, "beta", sub->add_option("--beta", b.in.beta, "forgetting factor"));
    track(b, "v", sub->add_option("--v", b.in.v, "inverse covariance init scale"));
    track(b, "delta-floor",
          sub->add_option("--delta-floor", b.in.delta_floor, "lower clamp for the weight base"));
    track(b, "weighting",
          sub->add_option("--weighting", b.in.weighting, "adaptive or known-sigma"));
    track(b, "sigma2",
          sub->add_option("--sigma2", b.in.sigma2, "noise variance for known-sigma weighting"));
    track(b, "seed", sub->add_option("--seed", b.in.seed, "master seed")->capture_default_str());
    track(b, "trials", sub->add_option("--trials", b.in.trials, "independent repetitions"));
    track(b, "workers", sub->add_option("--workers", b.in.workers, "worker threads for trials"));
    track(b, "out-dir",
          sub->add_option("--out-dir", b.in.out_dir, "artifact directory")->capture_default_str());
    track(b, "lambda-trace",
          sub->add_flag("--lambda-trace", b.in.lambda_trace, "write lambda_trace.csv (first trial)"));
    track(b, "per-trial-curves", sub->add_flag("--per-trial-curves", b.in.per_trial_curves,
                                               "write one ase curve file per trial"));
    track(b, "timing",
          sub->add_flag("--timing", b.in.timing, "record measured wall time in report.csv"));
}

int dispatch(int argc, char** argv) {
    CLI::App app{"online boosted regression benchmark"};
    app.require_subcommand(1);

    Bound run_b, sweep_b, regret_b;
    std::string sweep_param;
    std::vector<double> sweep_grid;
    std::vector<std::int64_t> regret_grid;

    boostreg::StreamSpec gen_spec;
    std::string gen_stream_name = "stationary";
    std::string gen_out;

    CLI::App* run = app.add_subcommand("run", "run one algorithm and write its artifacts");
    add_experiment_options(run, run_b);
    run->callback([&] {
        run_b.in.stream_seed_set = run_b.stream_seed_opt->count() > 0;
        apply_config_file(run_b);
        run_b.in.stream.kind = parse_stream_kind(run_b.stream_name);
        boostreg::cmd_run(boostreg::resolve_experiment(run_b.in));
    });

    CLI::App* sweep = app.add_subcommand("sweep", "rerun one configuration over a parameter grid");
    add_experiment_options(sweep, sweep_b);
    sweep->add_option("--param", sweep_param, "parameter to sweep: sigma_m2, c, m")->required();
    sweep->add_option("--grid", sweep_grid, "comma-separated grid values")
        ->required()
        ->delimiter(',');
    sweep->callback([&] {
        sweep_b.in.stream_seed_set = sweep_b.stream_seed_opt->count() > 0;
        apply_config_file(sweep_b);
        sweep_b.in.stream.kind = parse_stream_kind(sweep_b.stream_name);
        boostreg::cmd_sweep(boostreg::resolve_experiment(sweep_b.in), sweep_param, sweep_grid);
    });

    CLI::App* regret = app.add_subcommand(
        "regret", "compare a single recursive learner against growing-prefix batch fits");
    add_experiment_options(regret, regret_b);
    regret->add_option("--t-grid", regret_grid, "comma-separated prefix lengths")
        ->required()
        ->delimiter(',');
    regret->callback([&] {
        regret_b.in.stream_seed_set = regret_b.stream_seed_opt->count() > 0;
        apply_config_file(regret_b);
        regret_b.in.stream.kind = parse_stream_kind(regret_b.stream_name);
        boostreg::cmd_regret(boostreg::resolve_experiment(regret_b.in), regret_grid);
    });

    CLI::App* gen = app.add_subcommand("gen", "generate a stream and write it as csv");
    gen->add_option("--stream", gen_stream_name, "stationary, duffing, csv")
        ->capture_default_str();
    gen->add_option("--length", gen_spec.length, "rows to generate")->capture_default_str();
    gen->add_option("--noise-var", gen_spec.noise_var, "observation noise variance")
        ->capture_default_str();
    gen->add_option("--rho", gen_spec.rho, "input correlation")->capture_default_str();
    gen->add_option("--seed", gen_spec.seed, "data RNG seed")->capture_default_str();
    gen->add_option("--csv-path", gen_spec.path, "source csv when --stream csv");
    gen->add_flag("--csv-header", gen_spec.has_header, "skip the first csv row");
    gen->add_option("--target-col", gen_spec.target_column, "0-based target column; -1 = last")
        ->capture_default_str();
    gen->add_option("--out", gen_out, "output csv path")->required();
    gen->callback([&] {
        gen_spec.kind = parse_stream_kind(gen_stream_name);
        boostreg::cmd_gen(gen_spec, gen_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const boostreg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const boostreg::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const boostreg::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
