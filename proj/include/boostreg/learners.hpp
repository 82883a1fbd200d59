#pragma once

#include <vector>

#include "boostreg/core.hpp"

namespace boostreg {

/// Linear learner trained by (weighted) stochastic gradient steps.
struct SgdState {
    Vec w;
    double mu = 0.1;
};

/// Linear learner trained by the weighted recursive least-squares update
/// with forgetting factor beta; P tracks the scaled inverse Gram matrix.
struct NmState {
    Vec w;
    Mat P;
    double beta = 1.0;
};

SgdState make_sgd(int dim, double mu);
NmState make_nm(int dim, double beta, double v);

/// Linear prediction w'x; dimension mismatch is rejected.
double predict(const Vec& w, const Vec& x);
inline double predict(const SgdState& s, const Vec& x) { return predict(s.w, x); }
inline double predict(const NmState& s, const Vec& x) { return predict(s.w, x); }

/// One weighted SGD step w += mu * lambda * (d - w'x) x with 0 < lambda <= 1.
/// Returns the pre-update prediction error d - w'x.
double sgd_step(SgdState& s, const Sample& sample, double lambda);

/// One weighted recursive step with 0 <= lambda <= 1:
///   e = d - x'w
///   g = lambda P x / (beta + lambda x'P x)
///   w += e g
///   P <- (P - g x'P) / beta, then re-symmetrized
/// lambda == 0 leaves w unchanged and only rescales P by 1/beta. A
/// non-positive or non-finite update denominator raises NumericError.
/// Returns the pre-update prediction error e.
double nm_weighted_step(NmState& s, const Sample& sample, double lambda);

/// Prediction of the forward-regularized least-squares fit at x_new: the
/// Gram matrix includes x_new (plus ridge * I), the cross term sums over
/// the history only. Recomputes per query; meant for small streams and
/// tests. Rejects an empty problem without ridge and singular systems.
double nm_forward_fit(const std::vector<Sample>& history, const Vec& x_new, double ridge);

/// Exact batch least-squares coefficients over a sample history:
/// w = (sum x x' + ridge I)^-1 sum x d. Singular systems are rejected.
Vec batch_ls_oracle(const std::vector<Sample>& history, double ridge);

}  // namespace boostreg
