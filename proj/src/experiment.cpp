#include "boostreg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <thread>

#include "boostreg/boosting.hpp"
#include "boostreg/learners.hpp"

namespace boostreg {

namespace {

namespace fs = std::filesystem;

struct LabelInfo {
    LearnerKind learner;
    UpdateMode mode;
    bool boosted;
};

const std::map<std::string, LabelInfo>& label_table() {
    static const std::map<std::string, LabelInfo> table = {
        {"sgd", {LearnerKind::sgd, UpdateMode::weighted, false}},
        {"nm", {LearnerKind::nm, UpdateMode::weighted, false}},
        {"bsgd-wu", {LearnerKind::sgd, UpdateMode::weighted, true}},
        {"bsgd-dr", {LearnerKind::sgd, UpdateMode::data_reuse, true}},
        {"bsgd-ru", {LearnerKind::sgd, UpdateMode::random, true}},
        {"bsgd-oza", {LearnerKind::sgd, UpdateMode::oza_poisson, true}},
        {"bnm-wu", {LearnerKind::nm, UpdateMode::weighted, true}},
        {"bnm-dr", {LearnerKind::nm, UpdateMode::data_reuse, true}},
        {"bnm-ru", {LearnerKind::nm, UpdateMode::random, true}},
        {"bnm-oza", {LearnerKind::nm, UpdateMode::oza_poisson, true}},
    };
    return table;
}

/// Exact decimal round-trip formatting for the config echo.
std::string fmt_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::string stream_kind_name(StreamKind k) {
    switch (k) {
        case StreamKind::stationary: return "stationary";
        case StreamKind::duffing: return "duffing";
        case StreamKind::csv: return "csv";
    }
    return "?";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

bool is_stochastic(UpdateMode mode) {
    return mode == UpdateMode::random || mode == UpdateMode::oza_poisson;
}

}  // namespace

const std::vector<std::string>& algorithm_labels() {
    static const std::vector<std::string> labels = [] {
        std::vector<std::string> out;
        for (const auto& [name, info] : label_table()) out.push_back(name);
        return out;
    }();
    return labels;
}

ExperimentConfig resolve_experiment(const ExperimentInput& input) {
    const auto it = label_table().find(input.algorithm);
    if (it == label_table().end()) {
        std::string msg = "unknown algorithm '" + input.algorithm + "'; valid labels:";
        for (const auto& name : algorithm_labels()) msg += " " + name;
        throw ConfigError(msg);
    }
    const LabelInfo& info = it->second;

    ExperimentConfig cfg;
    cfg.algorithm = input.algorithm;
    cfg.stream = input.stream;
    cfg.master_seed = input.seed;
    cfg.out_dir = input.out_dir;
    cfg.lambda_trace = input.lambda_trace;
    cfg.per_trial_curves = input.per_trial_curves;
    cfg.timing = input.timing;

    BoostConfig& b = cfg.boost;
    b.learner = info.learner;
    b.mode = info.mode;

    if (info.boosted) {
        b.m = input.m.value_or(20);
    } else {
        if (input.m && *input.m != 1)
            throw ConfigError("algorithm '" + input.algorithm +
                              "' runs a single learner; m must be 1");
        b.m = 1;
    }

    // Family and stream defaults; explicit values always win.
    const bool nm_family = info.learner == LearnerKind::nm;
    double sigma_m2_default = 0.0, beta_default = 0.0;
    switch (input.stream.kind) {
        case StreamKind::stationary:
            sigma_m2_default = nm_family ? 0.004 : 0.02;
            beta_default = 0.9999;
            break;
        case StreamKind::duffing:
            sigma_m2_default = nm_family ? 0.17 : 0.25;
            beta_default = 0.999;
            break;
        case StreamKind::csv:
            sigma_m2_default = nm_family ? 0.004 : 0.02;
            beta_default = 0.999;
            break;
    }
    b.sigma_m2 = input.sigma_m2.value_or(sigma_m2_default);
    b.beta = input.beta.value_or(beta_default);
    b.c = input.c.value_or(1.0);
    b.K = input.K.value_or(5);
    b.mu = input.mu.value_or(0.1);
    b.mu_z = input.mu_z.value_or(0.01);
    b.v = input.v.value_or(1e-4);
    b.delta_floor = input.delta_floor.value_or(1e-6);
    b.sigma2 = input.sigma2.value_or(0.25);
    if (input.weighting) {
        if (*input.weighting == "adaptive")
            b.weighting = WeightScheme::adaptive;
        else if (*input.weighting == "known-sigma")
            b.weighting = WeightScheme::known_sigma;
        else
            throw ConfigError("weighting must be 'adaptive' or 'known-sigma', got '" +
                              *input.weighting + "'");
    }

    if (input.trials) {
        cfg.trials = *input.trials;
    } else if (input.stream.kind == StreamKind::stationary) {
        cfg.trials = 100;
    } else {
        cfg.trials = is_stochastic(info.mode) ? 20 : 1;
    }
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    cfg.workers = input.workers.value_or(static_cast<int>(hw));
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");

    // Independent RNG roots for data and update scheduling, both derived
    // from the master seed unless the data seed was pinned explicitly.
    cfg.stream.seed =
        input.stream_seed_set ? input.stream.seed : derive_trial_seed(input.seed, 0);
    b.seed = derive_trial_seed(input.seed, 1);

    if (cfg.stream.kind == StreamKind::csv && cfg.stream.path.empty())
        throw ConfigError("csv stream needs a path");
    if (cfg.stream.kind == StreamKind::stationary && cfg.stream.length < 2)
        throw ConfigError("stationary stream needs length >= 2");
    if (cfg.stream.length < 1) throw ConfigError("stream length must be >= 1");
    b.validate();
    return cfg;
}

RunSummary run_trials(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const int n = cfg.trials;

    // Deterministic stream kinds are materialized once and shared.
    std::shared_ptr<const std::vector<Sample>> shared;
    if (cfg.stream.kind != StreamKind::stationary)
        shared = std::make_shared<const std::vector<Sample>>(make_stream(cfg.stream));

    std::vector<RunReport> reports(n);
    std::vector<std::exception_ptr> failures(n);
    std::atomic<int> next{0};

    const auto worker = [&]() {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                BoostConfig bc = cfg.boost;
                bc.seed = derive_trial_seed(cfg.boost.seed, static_cast<std::uint64_t>(i));
                RunOptions opt;
                opt.keep_lambda_trace = cfg.lambda_trace && i == 0;
                if (shared) {
                    reports[i] = run_stream(bc, *shared, opt);
                } else {
                    StreamSpec ss = cfg.stream;
                    ss.seed = derive_trial_seed(cfg.stream.seed, static_cast<std::uint64_t>(i));
                    reports[i] = run_stream(bc, gen_stationary(ss), opt);
                }
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    const int threads = std::min(cfg.workers, n);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (int i = 0; i < n; ++i)
        if (failures[i]) std::rethrow_exception(failures[i]);

    RunSummary summary;
    summary.trials = n;
    const std::size_t T = reports.front().ase.size();
    summary.mean_ase.assign(T, 0.0);
    for (const RunReport& rep : reports)
        for (std::size_t t = 0; t < T; ++t) summary.mean_ase[t] += rep.ase[t];
    for (double& v : summary.mean_ase) v /= n;

    double mean = 0.0;
    for (const RunReport& rep : reports) mean += rep.final_mse;
    mean /= n;
    double var = 0.0;
    for (const RunReport& rep : reports) {
        const double d = rep.final_mse - mean;
        var += d * d;
    }
    summary.mse_mean = mean;
    summary.mse_std = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    summary.reports = std::move(reports);
    summary.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

std::string echo_config(const ExperimentConfig& cfg) {
    std::string s;
    s += "# resolved configuration; reload with --config\n";
    s += "algorithm=" + cfg.algorithm + "\n";
    s += "stream=" + stream_kind_name(cfg.stream.kind) + "\n";
    s += "length=" + std::to_string(cfg.stream.length) + "\n";
    s += "noise-var=" + fmt_exact(cfg.stream.noise_var) + "\n";
    s += "rho=" + fmt_exact(cfg.stream.rho) + "\n";
    s += "stream-seed=" + std::to_string(cfg.stream.seed) + "\n";
    if (!cfg.stream.path.empty()) s += "csv-path=\"" + cfg.stream.path + "\"\n";
    s += "csv-header=" + fmt_bool(cfg.stream.has_header) + "\n";
    s += "target-col=" + std::to_string(cfg.stream.target_column) + "\n";
    s += "m=" + std::to_string(cfg.boost.m) + "\n";
    s += "sigma-m2=" + fmt_exact(cfg.boost.sigma_m2) + "\n";
    s += "c=" + fmt_exact(cfg.boost.c) + "\n";
    s += "K=" + std::to_string(cfg.boost.K) + "\n";
    s += "mu=" + fmt_exact(cfg.boost.mu) + "\n";
    s += "mu-z=" + fmt_exact(cfg.boost.mu_z) + "\n";
    s += "beta=" + fmt_exact(cfg.boost.beta) + "\n";
    s += "v=" + fmt_exact(cfg.boost.v) + "\n";
    s += "delta-floor=" + fmt_exact(cfg.boost.delta_floor) + "\n";
    s += std::string("weighting=") +
         (cfg.boost.weighting == WeightScheme::known_sigma ? "known-sigma" : "adaptive") + "\n";
    s += "sigma2=" + fmt_exact(cfg.boost.sigma2) + "\n";
    s += "seed=" + std::to_string(cfg.master_seed) + "\n";
    s += "trials=" + std::to_string(cfg.trials) + "\n";
    s += "workers=" + std::to_string(cfg.workers) + "\n";
    s += "out-dir=\"" + cfg.out_dir + "\"\n";
    s += "lambda-trace=" + fmt_bool(cfg.lambda_trace) + "\n";
    s += "per-trial-curves=" + fmt_bool(cfg.per_trial_curves) + "\n";
    s += "timing=" + fmt_bool(cfg.timing) + "\n";
    return s;
}

RunSummary cmd_run(const ExperimentConfig& cfg) {
    ensure_dir(cfg.out_dir);
    RunSummary summary = run_trials(cfg);

    std::string ase = "t,ase,mse_running\n";
    for (std::size_t t = 1; t <= summary.mean_ase.size(); ++t) {
        const double a = summary.mean_ase[t - 1];
        ase += std::to_string(t) + ',' + format_value(a) + ',' +
               format_value(a / static_cast<double>(t)) + '\n';
    }
    write_file(cfg.out_dir + "/ase.csv", ase);

    std::string rep = "trial,final_mse,updates_total,wall_time_s\n";
    for (int i = 0; i < summary.trials; ++i) {
        const RunReport& r = summary.reports[i];
        std::int64_t updates = 0;
        for (auto u : r.update_counts) updates += u;
        // Wall time stays 0 unless timing was requested, so that repeated
        // runs of one configuration produce byte-identical artifacts.
        const double wall = cfg.timing ? r.wall_time_s : 0.0;
        rep += std::to_string(i) + ',' + format_value(r.final_mse) + ',' +
               std::to_string(updates) + ',' + format_value(wall) + '\n';
    }
    write_file(cfg.out_dir + "/report.csv", rep);

    if (cfg.lambda_trace) {
        std::string tr = "t,k,lambda\n";
        for (const LambdaTracePoint& p : summary.reports.front().lambda_trace)
            tr += std::to_string(p.t) + ',' + std::to_string(p.k) + ',' +
                  format_value(p.lambda) + '\n';
        write_file(cfg.out_dir + "/lambda_trace.csv", tr);
    }

    if (cfg.per_trial_curves) {
        for (int i = 0; i < summary.trials; ++i) {
            std::string curve = "t,ase\n";
            const auto& c = summary.reports[i].ase;
            for (std::size_t t = 1; t <= c.size(); ++t)
                curve += std::to_string(t) + ',' + format_value(c[t - 1]) + '\n';
            write_file(cfg.out_dir + "/trial_" + std::to_string(i) + "_ase.csv", curve);
        }
    }

    write_file(cfg.out_dir + "/config.txt", echo_config(cfg));

    std::cout << "run " << cfg.algorithm << " on " << stream_kind_name(cfg.stream.kind)
              << ": T=" << summary.mean_ase.size() << ", trials=" << summary.trials
              << ", final MSE " << format_value(summary.mse_mean) << " +/- "
              << format_value(summary.mse_std) << " (wall " << format_value(summary.wall_time_s)
              << " s)\n"
              << "wrote " << cfg.out_dir << "/ase.csv, report.csv, config.txt\n";
    return summary;
}

std::vector<SweepPoint> cmd_sweep(const ExperimentConfig& cfg, const std::string& parameter,
                                  const std::vector<double>& grid) {
    if (parameter != "sigma_m2" && parameter != "c" && parameter != "m")
        throw ConfigError("sweep parameter must be one of: sigma_m2, c, m (got '" + parameter +
                          "')");
    if (grid.empty()) throw ConfigError("sweep grid must not be empty");
    if (parameter == "m") {
        if (cfg.boost.m == 1 && (cfg.algorithm == "sgd" || cfg.algorithm == "nm"))
            throw ConfigError("cannot sweep m for single-learner algorithm '" + cfg.algorithm +
                              "'");
        for (double v : grid)
            if (!(v >= 1.0) || v != std::floor(v))
                throw ConfigError("m grid values must be integers >= 1");
    }

    ensure_dir(cfg.out_dir);
    std::string echo = echo_config(cfg);
    echo += "param=" + parameter + "\n";
    echo += "grid=";
    for (std::size_t i = 0; i < grid.size(); ++i)
        echo += (i ? "," : "") + format_value(grid[i]);
    echo += "\n";
    write_file(cfg.out_dir + "/config.txt", echo);

    std::vector<SweepPoint> points;
    points.reserve(grid.size());
    for (double value : grid) {
        ExperimentConfig pc = cfg;
        pc.out_dir = cfg.out_dir + "/point_" + format_value(value);
        if (parameter == "sigma_m2")
            pc.boost.sigma_m2 = value;
        else if (parameter == "c")
            pc.boost.c = value;
        else
            pc.boost.m = static_cast<int>(value);
        try {
            const RunSummary s = cmd_run(pc);
            points.push_back(SweepPoint{value, s.mse_mean, s.mse_std, ""});
        } catch (const std::exception& ex) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            points.push_back(SweepPoint{value, nan, nan, ex.what()});
            std::cerr << "sweep point " << parameter << "=" << format_value(value)
                      << " failed: " << ex.what() << "\n";
        }
    }

    std::string csv = "value,mse_mean,mse_std\n";
    for (const SweepPoint& p : points)
        csv += format_value(p.value) + ',' + format_value(p.mse_mean) + ',' +
               format_value(p.mse_std) + '\n';
    write_file(cfg.out_dir + "/sweep.csv", csv);
    return points;
}

std::vector<RegretRow> cmd_regret(const ExperimentConfig& cfg,
                                  const std::vector<std::int64_t>& grid) {
    if (grid.empty()) throw ConfigError("regret T grid must not be empty");
    if (grid.front() < 1) throw ConfigError("regret T grid values must be >= 1");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw ConfigError("regret T grid must be strictly increasing");

    StreamSpec ss = cfg.stream;
    ss.length = grid.back();
    ss.seed = derive_trial_seed(cfg.stream.seed, 0);
    const std::vector<Sample> stream = make_stream(ss);
    const auto dim = static_cast<int>(stream.front().x.size());

    NmState nm = make_nm(dim, 1.0, cfg.boost.v);
    std::vector<RegretRow> rows;
    rows.reserve(grid.size());
    double ase = 0.0;
    std::size_t gi = 0;
    for (std::size_t t = 1; t <= stream.size(); ++t) {
        const double e = nm_weighted_step(nm, stream[t - 1], 1.0);
        ase += e * e;
        if (gi < grid.size() && static_cast<std::int64_t>(t) == grid[gi]) {
            Vec w;
            try {
                const std::vector<Sample> prefix(stream.begin(),
                                                 stream.begin() + static_cast<std::ptrdiff_t>(t));
                w = batch_ls_oracle(prefix, 0.0);
            } catch (const NumericError& ex) {
                throw NumericError("regret at T=" + std::to_string(t) + ": " + ex.what());
            }
            double batch_ase = 0.0;
            for (std::size_t i = 0; i < t; ++i) {
                const double r = stream[i].d - w.dot(stream[i].x);
                batch_ase += r * r;
            }
            const double regret = ase - batch_ase;
            rows.push_back(RegretRow{static_cast<std::int64_t>(t), regret,
                                     t > 1 ? regret / std::log(static_cast<double>(t))
                                           : std::numeric_limits<double>::quiet_NaN()});
            ++gi;
        }
    }

    ensure_dir(cfg.out_dir);
    std::string csv = "T,regret,regret_over_lnT\n";
    for (const RegretRow& r : rows)
        csv += std::to_string(r.T) + ',' + format_value(r.regret) + ',' +
               format_value(r.regret_over_lnT) + '\n';
    write_file(cfg.out_dir + "/regret.csv", csv);

    std::string echo = echo_config(cfg);
    echo += "t-grid=";
    for (std::size_t i = 0; i < grid.size(); ++i)
        echo += (i ? "," : "") + std::to_string(grid[i]);
    echo += "\n";
    write_file(cfg.out_dir + "/config.txt", echo);

    std::cout << "regret over " << stream_kind_name(ss.kind) << " stream, grid of "
              << grid.size() << " lengths; wrote " << cfg.out_dir << "/regret.csv\n";
    return rows;
}

void cmd_gen(const StreamSpec& spec, const std::string& out_path) {
    const std::vector<Sample> stream = make_stream(spec);
    write_stream_csv(stream, out_path);
    std::cout << "wrote " << stream.size() << " rows to " << out_path << "\n";
}

}  // namespace boostreg
