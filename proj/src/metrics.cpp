#include "boostreg/metrics.hpp"

#include <cmath>
#include <limits>

namespace boostreg {

std::vector<double> ase_curve(const std::vector<double>& errors) {
    std::vector<double> out;
    out.reserve(errors.size());
    double acc = 0.0;
    for (double e : errors) {
        acc += e * e;
        out.push_back(acc);
    }
    return out;
}

double weighted_mse(const std::vector<double>& lambdas, const std::vector<double>& errors) {
    if (lambdas.size() != errors.size())
        throw std::invalid_argument("weighted_mse: length mismatch");
    double mass = 0.0, num = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double lam = lambdas[i];
        if (!(lam >= 0.0) || !std::isfinite(lam))
            throw std::invalid_argument("weighted_mse: weights must be finite and >= 0");
        mass += lam;
        num += lam * errors[i] * errors[i];
    }
    if (!(mass > 0.0)) throw std::invalid_argument("weighted_mse: total weight must be positive");
    return num / (4.0 * mass);
}

Lemma1Certificate lemma1_certificate(const std::vector<RoundLog>& round_logs, int M,
                                     double kappa, double sigma_m2) {
    if (round_logs.empty()) throw std::invalid_argument("lemma1_certificate: no round logs");
    if (M < 1) throw std::invalid_argument("lemma1_certificate: M must be >= 1");
    const int m = static_cast<int>(round_logs.front().lambdas.size());
    if (M >= m)
        throw std::invalid_argument(
            "lemma1_certificate: M must be < the ensemble size (the weight of learner M+1 "
            "is not logged otherwise)");
    if (!(kappa >= 0.0 && kappa < 1.0))
        throw std::invalid_argument("lemma1_certificate: kappa must be in [0, 1)");
    if (!(sigma_m2 >= 0.0)) throw std::invalid_argument("lemma1_certificate: sigma_m2 < 0");

    const auto T = static_cast<double>(round_logs.size());
    Lemma1Certificate cert;
    cert.implied_mse_bound = (1.0 - kappa) * sigma_m2 + kappa;

    std::vector<double> lambda_mass(M + 1, 0.0);  // entry k-1 for learners 1..M+1
    std::int64_t exceed = 0;
    for (const RoundLog& log : round_logs) {
        if (static_cast<int>(log.lambdas.size()) != m ||
            static_cast<int>(log.learner_errors.size()) != m)
            throw std::invalid_argument("lemma1_certificate: inconsistent round log shape");
        double e_sum = 0.0;
        for (int k = 0; k < M; ++k) {
            e_sum += log.learner_errors[k];
            lambda_mass[k] += log.lambdas[k];
        }
        lambda_mass[M] += log.lambdas[M];
        const double e_mean = e_sum / M;
        if (e_mean * e_mean > sigma_m2) {
            ++exceed;
            if (cert.implication_holds && log.lambdas[M] != 1.0) {
                cert.implication_holds = false;
                cert.first_violation_t = log.t;
            }
        }
    }
    cert.fraction_exceeding = static_cast<double>(exceed) / T;
    cert.mean_lambda_next = lambda_mass[M] / T;
    cert.premises_held = true;
    for (int k = 0; k < M; ++k)
        if (lambda_mass[k] < kappa * T) cert.premises_held = false;
    cert.emphasis_stopped = lambda_mass[M] < kappa * T;
    return cert;
}

double lemma2_learner_bound(double kappa, double sigma2, double sigma_m2) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw std::invalid_argument("lemma2_learner_bound: kappa must be finite and > 0");
    if (!(sigma2 > 0.0 && sigma2 < 1.0))
        throw std::invalid_argument("lemma2_learner_bound: sigma2 must be in (0, 1)");
    if (!(sigma_m2 >= 0.0) || !std::isfinite(sigma_m2))
        throw std::invalid_argument("lemma2_learner_bound: sigma_m2 must be finite and >= 0");
    const double sigma = std::sqrt(sigma2);
    const double denom = (kappa * sigma * std::log(1.0 / sigma)) *
                         (1.0 - 4.0 * sigma2 + sigma2 * sigma2 * sigma_m2);
    if (!(denom > 0.0))
        throw std::invalid_argument("lemma2_learner_bound: nonpositive denominator");
    return 1.0 / denom;
}

double theorem2_lambda_bound(double gamma, double zeta2, double sigma_m2, int k) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("theorem2_lambda_bound: gamma must be in (0, 1)");
    if (!(zeta2 >= 0.0) || !std::isfinite(zeta2))
        throw std::invalid_argument("theorem2_lambda_bound: zeta2 must be finite and >= 0");
    if (!(sigma_m2 >= 0.0) || !std::isfinite(sigma_m2))
        throw std::invalid_argument("theorem2_lambda_bound: sigma_m2 must be finite and >= 0");
    if (k < 1) throw std::invalid_argument("theorem2_lambda_bound: k must be >= 1");
    const double inner = 1.0 + 2.0 * zeta2 * std::log(gamma);
    if (!(inner > 0.0))
        throw std::invalid_argument("theorem2_lambda_bound: nonpositive inner factor");
    const double base = std::pow(gamma, -2.0 * sigma_m2) * inner;
    return std::pow(base, (1.0 - k) / 2.0);
}

ComplexityReport complexity_report(const RunReport& report, int dim) {
    if (dim < 1) throw std::invalid_argument("complexity_report: dim must be >= 1");
    const int m = report.config.m;
    const auto T = report.T;
    ComplexityReport out;
    out.rounds = T;
    out.unit_cost = report.config.learner == LearnerKind::nm
                        ? static_cast<double>(dim) * dim
                        : static_cast<double>(dim);
    out.weighted_predicted = static_cast<std::int64_t>(m) * T;
    out.data_reuse_predicted = 0;
    for (auto n : report.data_reuse_equiv) out.data_reuse_predicted += n;
    out.random_predicted = 0.0;
    for (double s : report.sum_lambda) out.random_predicted += s;
    out.observed = report.update_counts;
    out.observed_total = 0;
    for (auto n : report.update_counts) out.observed_total += n;

    // Expected-weight bound per learner from that learner's own estimated
    // inputs: gamma as the time-averaged delta, zeta2 as the empirical MSE.
    out.lambda_bounds.assign(m, std::numeric_limits<double>::quiet_NaN());
    out.bounds_valid = true;
    double bounded_sum = 0.0;
    for (int k = 0; k < m; ++k) {
        const double gamma = report.mean_delta[k];
        const double zeta2 = report.learner_mse[k];
        const bool valid = gamma > 0.0 && gamma < 1.0 && std::isfinite(zeta2) &&
                           1.0 + 2.0 * zeta2 * std::log(gamma) > 0.0;
        if (!valid) {
            out.bounds_valid = false;
            continue;
        }
        const double bound = theorem2_lambda_bound(gamma, zeta2, report.config.sigma_m2, k + 1);
        out.lambda_bounds[k] = bound;
        bounded_sum += std::min(1.0, bound);  // a weight never exceeds 1 anyway
    }
    out.bounded_random_predicted = out.bounds_valid ? bounded_sum * static_cast<double>(T) : 0.0;
    return out;
}

}  // namespace boostreg
