#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "boostreg/core.hpp"
#include "boostreg/learners.hpp"

namespace boostreg {

/// Computed weights never reach zero: results of the weight rules are
/// floored here so accumulated weight mass stays strictly increasing.
inline constexpr double kLambdaFloor = 1e-300;

/// Combiner updates are skipped when the squared norm of the learner
/// output vector falls below this guard.
inline constexpr double kCombinerEps = 1e-12;

using LearnerState = std::variant<SgdState, NmState>;

/// One weak learner plus its boosting bookkeeping.
struct LearnerSlot {
    LearnerState state;
    double delta = 0.0;           // running weighted thresholded MSE estimate
    double capital_lambda = 0.0;  // accumulated weight mass
    std::int64_t update_count = 0;
};

/// Full mutable state of a boosted ensemble between rounds.
struct EnsembleState {
    BoostConfig config;
    std::vector<LearnerSlot> slots;
    Vec z;  // combiner coefficients, initialized to 1/m
    RngStream rng;
    std::int64_t t = 0;  // rounds processed so far
};

/// Everything one round produced, in learner order (index 0 is k = 1).
struct RoundLog {
    std::int64_t t = 0;
    std::vector<double> lambdas;          // per-learner weights; lambdas[0] == 1
    std::vector<double> losses;           // loss ladder, m + 1 entries, losses[0] == 0
    std::vector<double> learner_errors;   // d - y_k against pre-update outputs
    std::vector<double> learner_outputs;  // y_k, pre-update predictions
    std::vector<int> updates_applied;     // scheduled update count per learner
    double final_estimate = 0.0;          // z'y, unclamped
    double final_error = 0.0;             // d - z'y
};

/// What run_stream retains beyond the aggregate accumulators.
struct RunOptions {
    bool keep_round_logs = false;
    bool keep_lambda_trace = false;
    int lambda_trace_stride = 10;  // record every stride-th round
};

/// Fresh ensemble for inputs of the given dimension: zeroed learners,
/// uniform combiner z = 1/m, delta = capital_lambda = 0 for every slot.
EnsembleState make_ensemble(const BoostConfig& config, int dim);

/// Loss ladder step: l + (sigma_m2 - e^2).
double update_loss(double l, double sigma_m2, double e);

/// Adaptive weight min{1, b^(c*l)} with base b = delta_prev clamped into
/// [floor, 1], computed in log space and floored at kLambdaFloor.
double compute_weight(double delta_prev, double c, double l, double floor);

/// Known-variance weight min{1, sigma2^(l/2)} for 0 < sigma2 <= 1,
/// computed in log space and floored at kLambdaFloor.
double compute_weight_known_sigma(double sigma2, double l);

struct DeltaUpdate {
    double delta;
    double capital_lambda;
};

/// Weighted thresholded-MSE recursion; f is clamped into [-1, 1] before
/// the squared deviation enters:
///   delta' = (L * delta + (lambda / 4) (d - [f])^2) / (L + lambda)
///   L'     = L + lambda
/// Requires lambda > 0 and L >= 0.
DeltaUpdate update_delta(double delta_prev, double capital_lambda_prev, double lambda,
                         double d, double f);

/// Number of unit-weight updates a mode schedules for weight lambda:
/// weighted -> 1 (the single weighted update), data_reuse -> ceil(K *
/// lambda), oza_poisson -> Poisson(lambda) draw, random -> Bernoulli(lambda).
int schedule_updates(UpdateMode mode, double lambda, int K, RngStream& rng);

/// Combiner output z'y.
double combiner_predict(const Vec& z, const Vec& y);

/// Normalized combiner step z += mu_z * e * y / ||y||^2, skipped entirely
/// when ||y||^2 < eps.
void combiner_update(Vec& z, const Vec& y, double e, double mu_z, double eps);

/// One full boosting round on one sample:
///   (a) all m learner outputs y_k from pre-update states
///   (b) final estimate z'y
///   (c) lambda^(1) = 1, l^(1) = 0
///   (d) for k = 1..m: weight, scheduled updates, pre-update error,
///       (delta, L) recursion, loss ladder step
///   (e) combiner update with e = d - z'y
/// Learner numerical failures are rethrown with the offending k and t.
RoundLog run_round(EnsembleState& state, const Sample& sample);

struct RunReport;  // defined in boostreg/metrics.hpp

/// Drive a fresh ensemble over a whole stream and aggregate the metrics
/// report. The stream must be nonempty and of consistent dimension.
RunReport run_stream(const BoostConfig& config, const std::vector<Sample>& stream,
                     const RunOptions& options = {});

}  // namespace boostreg
