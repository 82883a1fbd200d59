#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace boostreg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Configuration value out of range or inconsistent with another one.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An update or solve became numerically invalid (overflow, singular
/// system, non-positive update denominator, non-finite state).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File or stream problem (missing file, malformed row, write failure).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One regression observation. `x` is the input vector whose last entry
/// is the affine bias (fixed at 1 for generated streams; raw CSV rows
/// carry no bias until normalization appends one), `d` the target.
struct Sample {
    Vec x;
    double d = 0.0;
};

enum class LearnerKind { sgd, nm };
enum class UpdateMode { weighted, data_reuse, oza_poisson, random };
enum class WeightScheme { adaptive, known_sigma };

/// Tunables for one boosted ensemble run.
struct BoostConfig {
    int m = 1;                                    // number of weak learners
    LearnerKind learner = LearnerKind::sgd;
    UpdateMode mode = UpdateMode::weighted;
    WeightScheme weighting = WeightScheme::adaptive;
    double sigma_m2 = 0.02;   // per-learner squared-error target in the loss ladder
    double sigma2 = 0.25;     // asserted weighted-MSE level (known_sigma weighting only)
    double c = 1.0;           // exponent gain of the adaptive weight
    int K = 5;                // data-reuse multiplier
    double mu = 0.1;          // weak-learner SGD step size
    double mu_z = 0.01;       // combiner step size
    double beta = 0.9999;     // forgetting factor of the recursive learner
    double v = 1e-4;          // inverse-covariance init: P0 = I / v
    double delta_floor = 1e-6;  // lower clamp of the adaptive weight base
    std::uint64_t seed = 1;   // update-scheduling RNG seed

    /// Throws ConfigError on the first violated range constraint.
    void validate() const;
};

/// Deterministic random stream. All draws are defined directly on top of
/// the 64-bit Mersenne Twister so that a given seed yields the identical
/// sequence on every run of the same build:
///   - uniform():  next engine word, top 53 bits, mapped to [0, 1)
///   - normal():   Box-Muller cosine branch; consumes exactly two engine
///                 words, the first mapped to (0, 1] for the logarithm
///   - bernoulli(p): uniform() < p  (one word)
///   - poisson(lambda): inversion by sequential search (one word)
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw in [0, 1).
    double uniform();
    /// Standard normal draw.
    double normal();
    /// Bernoulli draw; requires 0 <= p <= 1.
    bool bernoulli(double p);
    /// Poisson draw by inversion; requires finite lambda >= 0.
    int poisson(double lambda);

  private:
    std::mt19937_64 engine_;
};

/// Clamp a prediction into [-1, 1]. Non-finite input is rejected.
double clamp_unit(double y);

/// Per-learner error target implied by a desired overall MSE level:
/// sigma_m2 = (sigma_d2 - kappa) / (1 - kappa). Requires 0 <= kappa <
/// sigma_d2 <= 1.
double sigma_m_from_target(double sigma_d2, double kappa);

/// Deterministic per-trial seed: the (trial_index + 1)-th output of the
/// splitmix64 sequence seeded with base_seed (Vigna's reference mixing
/// constants), computed in closed form.
std::uint64_t derive_trial_seed(std::uint64_t base_seed, std::uint64_t trial_index);

}  // namespace boostreg
