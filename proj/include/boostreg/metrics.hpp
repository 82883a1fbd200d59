#pragma once

#include <cstdint>
#include <vector>

#include "boostreg/boosting.hpp"
#include "boostreg/core.hpp"

namespace boostreg {

struct LambdaTracePoint {
    std::int64_t t;
    int k;  // learner index, 1-based
    double lambda;
};

/// Aggregated outcome of one run over a stream.
struct RunReport {
    BoostConfig config;
    std::int64_t T = 0;

    std::vector<double> ase;  // ase[t-1] = sum of squared final errors up to t
    double final_mse = 0.0;   // ase.back() / T

    // Per-learner accumulators, index k-1.
    std::vector<double> mean_lambda;
    std::vector<double> sum_lambda;
    std::vector<double> wmse;         // sum(lambda e^2) / (4 sum(lambda))
    std::vector<double> mean_delta;   // time average of the pre-round delta
    std::vector<double> learner_mse;  // plain mean of e_k^2
    std::vector<std::int64_t> update_counts;
    std::vector<std::int64_t> data_reuse_equiv;  // sum of ceil(K * lambda)
    std::vector<Vec> final_w;                    // coefficients after the last round

    std::vector<LambdaTracePoint> lambda_trace;  // only if requested
    std::vector<RoundLog> round_logs;            // only if requested
    double wall_time_s = 0.0;
};

/// Accumulated squared error curve: out[t-1] = sum_{tau <= t} errors[tau-1]^2.
std::vector<double> ase_curve(const std::vector<double>& errors);

/// Weighted thresholded mean squared error sum(lambda e^2) / (4 sum(lambda)).
/// Lengths must match and the weight mass must be positive.
double weighted_mse(const std::vector<double>& lambdas, const std::vector<double>& errors);

/// Checks, on recorded round logs, that whenever the uniform average e_t
/// of the first M learner errors satisfies e_t^2 > sigma_m2, the logged
/// weight of learner M + 1 equals 1 exactly, and reports the premises of
/// the surrounding emphasis argument rather than assuming them.
struct Lemma1Certificate {
    bool implication_holds = true;
    std::int64_t first_violation_t = -1;  // -1 when implication_holds
    double fraction_exceeding = 0.0;      // |{t : e_t^2 > sigma_m2}| / T
    double mean_lambda_next = 0.0;        // time average of lambda^(M+1)
    double implied_mse_bound = 0.0;       // (1 - kappa) sigma_m2 + kappa
    bool premises_held = false;           // sum_t lambda^(k) >= kappa T for all k <= M
    bool emphasis_stopped = false;        // sum_t lambda^(M+1) < kappa T
};

Lemma1Certificate lemma1_certificate(const std::vector<RoundLog>& round_logs, int M,
                                     double kappa, double sigma_m2);

/// Number of learners sufficient for the guaranteed-MSE argument:
///   1 / [ (kappa sigma ln(1/sigma)) (1 - 4 sigma^2 + sigma^4 sigma_m2) ]
/// with sigma = sqrt(sigma2). The denominator must be positive.
double lemma2_learner_bound(double kappa, double sigma2, double sigma_m2);

/// Expected-weight upper bound for learner k:
///   ( gamma^(-2 sigma_m2) (1 + 2 zeta2 ln gamma) )^((1 - k) / 2)
/// Requires gamma in (0, 1), k >= 1 and a positive inner factor.
double theorem2_lambda_bound(double gamma, double zeta2, double sigma_m2, int k);

/// Predicted update counts per mode for the weight trajectory of a run,
/// next to the observed counts, plus the expected-weight-based prediction
/// when its inputs are valid.
struct ComplexityReport {
    std::int64_t rounds = 0;
    double unit_cost = 0.0;                    // per-update flop scale: dim (sgd) or dim^2 (nm)
    std::int64_t weighted_predicted = 0;       // m * T
    std::int64_t data_reuse_predicted = 0;     // sum of ceil(K lambda)
    double random_predicted = 0.0;             // sum of lambda
    std::vector<std::int64_t> observed;        // per learner
    std::int64_t observed_total = 0;
    bool bounds_valid = false;                 // all per-learner bound inputs valid
    std::vector<double> lambda_bounds;         // per-learner expected-weight bound (NaN if invalid)
    double bounded_random_predicted = 0.0;     // T * sum of valid bounds
};

ComplexityReport complexity_report(const RunReport& report, int dim);

}  // namespace boostreg
