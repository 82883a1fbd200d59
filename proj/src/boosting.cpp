#include "boostreg/boosting.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "boostreg/metrics.hpp"

namespace boostreg {

namespace {

double floored_weight(double log_weight) {
    // Saturate at 1 from above, floor the underflow from below; the result
    // stays strictly inside (0, 1].
    if (log_weight >= 0.0) return 1.0;
    const double w = std::exp(log_weight);
    return w < kLambdaFloor ? kLambdaFloor : w;
}

/// One weak-learner update with the given weight; returns the pre-update error.
double apply_one(LearnerState& state, const Sample& sample, double lambda) {
    if (auto* sgd = std::get_if<SgdState>(&state)) return sgd_step(*sgd, sample, lambda);
    return nm_weighted_step(std::get<NmState>(state), sample, lambda);
}

[[noreturn]] void rethrow_with_context(const std::exception& err, int k, std::int64_t t) {
    throw NumericError(std::string(err.what()) + " (learner k=" + std::to_string(k) +
                       ", round t=" + std::to_string(t) + ")");
}

}  // namespace

EnsembleState make_ensemble(const BoostConfig& config, int dim) {
    config.validate();
    if (dim < 1) throw std::invalid_argument("make_ensemble: dim must be >= 1");
    EnsembleState st{config, {}, Vec::Constant(config.m, 1.0 / config.m),
                     RngStream(config.seed), 0};
    st.slots.reserve(config.m);
    // Data reuse replaces one weighted step by up to K unit steps, so the
    // SGD inner step is shortened to mu / K to keep the total comparable.
    const double mu_eff = (config.learner == LearnerKind::sgd &&
                           config.mode == UpdateMode::data_reuse)
                              ? config.mu / config.K
                              : config.mu;
    for (int k = 0; k < config.m; ++k) {
        LearnerSlot slot;
        if (config.learner == LearnerKind::sgd) {
            slot.state = make_sgd(dim, mu_eff);
        } else {
            slot.state = make_nm(dim, config.beta, config.v);
        }
        st.slots.push_back(std::move(slot));
    }
    return st;
}

double update_loss(double l, double sigma_m2, double e) { return l + (sigma_m2 - e * e); }

double compute_weight(double delta_prev, double c, double l, double floor) {
    if (!std::isfinite(delta_prev) || delta_prev < 0.0)
        throw std::invalid_argument("compute_weight: delta_prev must be finite and >= 0");
    if (!std::isfinite(c) || c < 0.0)
        throw std::invalid_argument("compute_weight: c must be finite and >= 0");
    if (!std::isfinite(l)) throw std::invalid_argument("compute_weight: l must be finite");
    if (!(floor > 0.0 && floor < 1.0))
        throw std::invalid_argument("compute_weight: floor must be in (0, 1)");
    const double base = std::min(1.0, std::max(floor, delta_prev));
    return floored_weight(c * l * std::log(base));
}

double compute_weight_known_sigma(double sigma2, double l) {
    if (!(sigma2 > 0.0 && sigma2 <= 1.0))
        throw std::invalid_argument("compute_weight_known_sigma: sigma2 must be in (0, 1]");
    if (!std::isfinite(l))
        throw std::invalid_argument("compute_weight_known_sigma: l must be finite");
    return floored_weight(0.5 * l * std::log(sigma2));
}

DeltaUpdate update_delta(double delta_prev, double capital_lambda_prev, double lambda,
                         double d, double f) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("update_delta: lambda must be finite and > 0");
    if (!(capital_lambda_prev >= 0.0) || !std::isfinite(capital_lambda_prev))
        throw std::invalid_argument("update_delta: capital_lambda_prev must be finite and >= 0");
    if (!std::isfinite(delta_prev) || delta_prev < 0.0)
        throw std::invalid_argument("update_delta: delta_prev must be finite and >= 0");
    if (!std::isfinite(d)) throw std::invalid_argument("update_delta: d must be finite");
    const double fc = clamp_unit(f);
    const double dev = d - fc;
    const double mass = capital_lambda_prev + lambda;
    const double delta =
        (capital_lambda_prev * delta_prev + (lambda / 4.0) * dev * dev) / mass;
    return DeltaUpdate{delta, mass};
}

int schedule_updates(UpdateMode mode, double lambda, int K, RngStream& rng) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("schedule_updates: lambda must be in (0, 1]");
    switch (mode) {
        case UpdateMode::weighted:
            return 1;
        case UpdateMode::data_reuse:
            if (K < 1) throw std::invalid_argument("schedule_updates: K must be >= 1");
            return static_cast<int>(std::ceil(K * lambda));
        case UpdateMode::oza_poisson:
            return rng.poisson(lambda);
        case UpdateMode::random:
            return rng.bernoulli(lambda) ? 1 : 0;
    }
    throw std::invalid_argument("schedule_updates: unknown mode");
}

double combiner_predict(const Vec& z, const Vec& y) {
    if (z.size() != y.size())
        throw std::invalid_argument("combiner_predict: dimension mismatch");
    return z.dot(y);
}

void combiner_update(Vec& z, const Vec& y, double e, double mu_z, double eps) {
    if (z.size() != y.size())
        throw std::invalid_argument("combiner_update: dimension mismatch");
    if (!(mu_z > 0.0) || !std::isfinite(mu_z))
        throw std::invalid_argument("combiner_update: mu_z must be finite and > 0");
    const double norm2 = y.squaredNorm();
    if (norm2 < eps) return;
    z += (mu_z * e / norm2) * y;
}

RoundLog run_round(EnsembleState& state, const Sample& sample) {
    const BoostConfig& cfg = state.config;
    const int m = cfg.m;
    const std::int64_t t = state.t + 1;
    if (!std::isfinite(sample.d))
        throw std::invalid_argument("run_round: non-finite target at round t=" +
                                    std::to_string(t));

    RoundLog log;
    log.t = t;
    log.lambdas.reserve(m);
    log.losses.reserve(m + 1);
    log.learner_errors.reserve(m);
    log.learner_outputs.reserve(m);
    log.updates_applied.reserve(m);

    // (a) every learner's output against its pre-update state
    Vec y(m);
    for (int k = 0; k < m; ++k) {
        const double yk = std::visit([&](const auto& s) { return predict(s, sample.x); },
                                     state.slots[k].state);
        if (!std::isfinite(yk))
            throw NumericError("run_round: non-finite learner output (learner k=" +
                               std::to_string(k + 1) + ", round t=" + std::to_string(t) + ")");
        y[k] = yk;
    }

    // (b) combined estimate, kept unclamped
    log.final_estimate = combiner_predict(state.z, y);
    log.final_error = sample.d - log.final_estimate;

    // (c) + (d) walk the ensemble top to bottom
    double l = 0.0;
    log.losses.push_back(l);
    for (int k = 0; k < m; ++k) {
        LearnerSlot& slot = state.slots[k];

        double lambda;
        if (k == 0) {
            lambda = 1.0;  // the first learner always updates at full weight
        } else if (cfg.weighting == WeightScheme::known_sigma) {
            lambda = compute_weight_known_sigma(cfg.sigma2, l);
        } else if (slot.capital_lambda == 0.0) {
            lambda = 1.0;  // no accumulated weight mass yet
        } else {
            lambda = compute_weight(slot.delta, cfg.c, l, cfg.delta_floor);
        }

        int applied = 0;
        try {
            applied = schedule_updates(cfg.mode, lambda, cfg.K, state.rng);
            if (cfg.mode == UpdateMode::weighted) {
                apply_one(slot.state, sample, lambda);
            } else {
                for (int i = 0; i < applied; ++i) apply_one(slot.state, sample, 1.0);
            }
        } catch (const NumericError& err) {
            rethrow_with_context(err, k + 1, t);
        }
        slot.update_count += applied;

        const double e = sample.d - y[k];
        const DeltaUpdate du = update_delta(slot.delta, slot.capital_lambda, lambda,
                                            sample.d, y[k]);
        slot.delta = du.delta;
        slot.capital_lambda = du.capital_lambda;

        l = update_loss(l, cfg.sigma_m2, e);
        if (!std::isfinite(l))
            throw NumericError("run_round: loss ladder overflow (learner k=" +
                               std::to_string(k + 1) + ", round t=" + std::to_string(t) + ")");

        log.lambdas.push_back(lambda);
        log.learner_errors.push_back(e);
        log.learner_outputs.push_back(y[k]);
        log.updates_applied.push_back(applied);
        log.losses.push_back(l);
    }

    // (e) combiner step against the pre-update outputs
    combiner_update(state.z, y, log.final_error, cfg.mu_z, kCombinerEps);

    state.t = t;
    return log;
}

RunReport run_stream(const BoostConfig& config, const std::vector<Sample>& stream,
                     const RunOptions& options) {
    config.validate();
    if (stream.empty()) throw std::invalid_argument("run_stream: empty stream");
    if (options.lambda_trace_stride < 1)
        throw std::invalid_argument("run_stream: lambda_trace_stride must be >= 1");
    const auto dim = stream.front().x.size();
    const int m = config.m;
    const auto T = static_cast<std::int64_t>(stream.size());

    const auto start = std::chrono::steady_clock::now();
    EnsembleState st = make_ensemble(config, static_cast<int>(dim));

    RunReport rep;
    rep.config = config;
    rep.T = T;
    rep.ase.reserve(stream.size());
    std::vector<double> sum_lambda(m, 0.0), sum_lambda_e2(m, 0.0), sum_e2(m, 0.0),
        sum_delta_pre(m, 0.0);
    std::vector<std::int64_t> reuse_equiv(m, 0);

    double ase_acc = 0.0;
    for (const Sample& s : stream) {
        if (s.x.size() != dim)
            throw std::invalid_argument("run_stream: inconsistent input dimension at round t=" +
                                        std::to_string(st.t + 1));
        for (int k = 0; k < m; ++k) sum_delta_pre[k] += st.slots[k].delta;

        RoundLog log = run_round(st, s);

        ase_acc += log.final_error * log.final_error;
        rep.ase.push_back(ase_acc);
        for (int k = 0; k < m; ++k) {
            const double lam = log.lambdas[k];
            const double e = log.learner_errors[k];
            sum_lambda[k] += lam;
            sum_lambda_e2[k] += lam * e * e;
            sum_e2[k] += e * e;
            reuse_equiv[k] += static_cast<std::int64_t>(std::ceil(config.K * lam));
        }
        if (options.keep_lambda_trace && (log.t - 1) % options.lambda_trace_stride == 0) {
            for (int k = 0; k < m; ++k)
                rep.lambda_trace.push_back(LambdaTracePoint{log.t, k + 1, log.lambdas[k]});
        }
        if (options.keep_round_logs) rep.round_logs.push_back(std::move(log));
    }

    rep.final_mse = ase_acc / static_cast<double>(T);
    rep.mean_lambda.resize(m);
    rep.sum_lambda = sum_lambda;
    rep.wmse.resize(m);
    rep.mean_delta.resize(m);
    rep.learner_mse.resize(m);
    rep.update_counts.resize(m);
    rep.data_reuse_equiv = reuse_equiv;
    rep.final_w.reserve(m);
    for (int k = 0; k < m; ++k) {
        rep.mean_lambda[k] = sum_lambda[k] / static_cast<double>(T);
        rep.wmse[k] = sum_lambda_e2[k] / (4.0 * sum_lambda[k]);
        rep.mean_delta[k] = sum_delta_pre[k] / static_cast<double>(T);
        rep.learner_mse[k] = sum_e2[k] / static_cast<double>(T);
        rep.update_counts[k] = st.slots[k].update_count;
        rep.final_w.push_back(std::visit([](const auto& s) { return s.w; }, st.slots[k].state));
    }
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace boostreg
