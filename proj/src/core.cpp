#include "boostreg/core.hpp"

#include <cmath>
#include <limits>

namespace boostreg {

namespace {

constexpr double kTwoPow53Inv = 0x1.0p-53;
constexpr double kPi = 3.14159265358979323846;

std::string bad(const std::string& what) { return "BoostConfig: " + what; }

}  // namespace

void BoostConfig::validate() const {
    if (m < 1) throw ConfigError(bad("m must be >= 1"));
    if (!(sigma_m2 >= 0.0) || !std::isfinite(sigma_m2))
        throw ConfigError(bad("sigma_m2 must be finite and >= 0"));
    if (!(c >= 0.0) || !std::isfinite(c)) throw ConfigError(bad("c must be finite and >= 0"));
    if (K < 1) throw ConfigError(bad("K must be >= 1"));
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError(bad("mu must be finite and > 0"));
    if (!(mu_z > 0.0) || !std::isfinite(mu_z))
        throw ConfigError(bad("mu_z must be finite and > 0"));
    if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError(bad("beta must be in (0, 1]"));
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(bad("v must be finite and > 0"));
    if (!(delta_floor > 0.0 && delta_floor < 1.0))
        throw ConfigError(bad("delta_floor must be in (0, 1)"));
    if (weighting == WeightScheme::known_sigma && !(sigma2 > 0.0 && sigma2 <= 1.0))
        throw ConfigError(bad("sigma2 must be in (0, 1] for known-sigma weighting"));
}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * kTwoPow53Inv;
}

double RngStream::normal() {
    // Box-Muller, cosine branch only: two engine words per draw. The first
    // uniform is shifted into (0, 1] so the logarithm is always finite.
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * kTwoPow53Inv;
    const double u2 = static_cast<double>(engine_() >> 11) * kTwoPow53Inv;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

bool RngStream::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("RngStream::bernoulli: p must be in [0, 1]");
    return uniform() < p;
}

int RngStream::poisson(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("RngStream::poisson: lambda must be finite and >= 0");
    // Inversion by sequential search; one uniform per draw. Fine for the
    // small means used here (lambda <= 1 in scheduling).
    const double u = uniform();
    double p = std::exp(-lambda);
    double cdf = p;
    int x = 0;
    while (u > cdf) {
        ++x;
        p *= lambda / x;
        cdf += p;
        if (x > 1000000) throw NumericError("RngStream::poisson: inversion did not terminate");
    }
    return x;
}

double clamp_unit(double y) {
    if (!std::isfinite(y)) throw std::invalid_argument("clamp_unit: non-finite input");
    if (y > 1.0) return 1.0;
    if (y < -1.0) return -1.0;
    return y;
}

double sigma_m_from_target(double sigma_d2, double kappa) {
    if (!std::isfinite(sigma_d2) || !std::isfinite(kappa))
        throw std::invalid_argument("sigma_m_from_target: non-finite input");
    if (!(kappa >= 0.0 && kappa < 1.0))
        throw std::invalid_argument("sigma_m_from_target: kappa must be in [0, 1)");
    if (!(kappa < sigma_d2 && sigma_d2 <= 1.0))
        throw std::invalid_argument("sigma_m_from_target: need kappa < sigma_d2 <= 1");
    return (sigma_d2 - kappa) / (1.0 - kappa);
}

std::uint64_t derive_trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
    // Equal to advancing a splitmix64 generator seeded with base_seed by
    // trial_index + 1 steps: the generator's state after n steps is
    // base_seed + n * gamma, finalized by the avalanche below.
    std::uint64_t z = base_seed + (trial_index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace boostreg
