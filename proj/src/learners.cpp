#include "boostreg/learners.hpp"

#include <cmath>

namespace boostreg {

namespace {

void check_dim(int dim) {
    if (dim < 1) throw std::invalid_argument("learner dimension must be >= 1");
}

}  // namespace

SgdState make_sgd(int dim, double mu) {
    check_dim(dim);
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("make_sgd: mu must be finite and > 0");
    return SgdState{Vec::Zero(dim), mu};
}

NmState make_nm(int dim, double beta, double v) {
    check_dim(dim);
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("make_nm: beta must be in (0, 1]");
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("make_nm: v must be finite and > 0");
    return NmState{Vec::Zero(dim), Mat::Identity(dim, dim) / v, beta};
}

double predict(const Vec& w, const Vec& x) {
    if (w.size() != x.size())
        throw std::invalid_argument("predict: dimension mismatch between coefficients and input");
    return w.dot(x);
}

double sgd_step(SgdState& s, const Sample& sample, double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("sgd_step: lambda must be in (0, 1]");
    const double e = sample.d - predict(s.w, sample.x);
    s.w += (s.mu * lambda * e) * sample.x;
    return e;
}

double nm_weighted_step(NmState& s, const Sample& sample, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("nm_weighted_step: lambda must be in [0, 1]");
    const double e = sample.d - predict(s.w, sample.x);
    if (lambda == 0.0) {
        // Zero weight: the gain vanishes and only the forgetting factor acts.
        s.P /= s.beta;
        return e;
    }
    const Vec Px = s.P * sample.x;  // P is kept symmetric, so x'P == (P x)'
    const double denom = s.beta + lambda * sample.x.dot(Px);
    if (!(denom > 0.0) || !std::isfinite(denom))
        throw NumericError("nm_weighted_step: update denominator is not positive");
    const Vec g = (lambda / denom) * Px;
    s.w += e * g;
    s.P = (s.P - g * Px.transpose()) / s.beta;
    s.P = 0.5 * (s.P + s.P.transpose().eval());
    return e;
}

double nm_forward_fit(const std::vector<Sample>& history, const Vec& x_new, double ridge) {
    if (!(ridge >= 0.0) || !std::isfinite(ridge))
        throw std::invalid_argument("nm_forward_fit: ridge must be finite and >= 0");
    const auto dim = x_new.size();
    if (dim < 1) throw std::invalid_argument("nm_forward_fit: empty query vector");
    Mat gram = ridge * Mat::Identity(dim, dim);
    Vec cross = Vec::Zero(dim);
    for (const Sample& s : history) {
        if (s.x.size() != dim)
            throw std::invalid_argument("nm_forward_fit: dimension mismatch in history");
        gram.noalias() += s.x * s.x.transpose();
        cross.noalias() += s.x * s.d;
    }
    gram.noalias() += x_new * x_new.transpose();
    Eigen::FullPivLU<Mat> lu(gram);
    if (!lu.isInvertible())
        throw NumericError("nm_forward_fit: singular Gram matrix (no ridge to regularize)");
    return x_new.dot(lu.solve(cross));
}

Vec batch_ls_oracle(const std::vector<Sample>& history, double ridge) {
    if (!(ridge >= 0.0) || !std::isfinite(ridge))
        throw std::invalid_argument("batch_ls_oracle: ridge must be finite and >= 0");
    if (history.empty()) throw std::invalid_argument("batch_ls_oracle: empty history");
    const auto dim = history.front().x.size();
    Mat gram = ridge * Mat::Identity(dim, dim);
    Vec cross = Vec::Zero(dim);
    for (const Sample& s : history) {
        if (s.x.size() != dim)
            throw std::invalid_argument("batch_ls_oracle: dimension mismatch in history");
        gram.noalias() += s.x * s.x.transpose();
        cross.noalias() += s.x * s.d;
    }
    Eigen::FullPivLU<Mat> lu(gram);
    if (!lu.isInvertible()) throw NumericError("batch_ls_oracle: singular batch system");
    return lu.solve(cross);
}

}  // namespace boostreg
