// Tests for the boosting round: weight rules, the loss ladder, the
// weighted thresholded-MSE recursion, update scheduling, the combiner,
// and a fully hand-computed three-round trace of a two-learner ensemble.
#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "boostreg/boosting.hpp"
#include "boostreg/core.hpp"
#include "boostreg/metrics.hpp"
#include "doctest.h"

using namespace boostreg;

namespace {

Vec vec1(double a) {
    Vec x(1);
    x << a;
    return x;
}

// Bounded scalar-plus-bias stream with |d| <= 1.
std::vector<Sample> bounded_stream(std::uint64_t seed, int T) {
    RngStream rng(seed);
    std::vector<Sample> out;
    out.reserve(T);
    for (int t = 0; t < T; ++t) {
        Vec x(2);
        x << 2.0 * rng.uniform() - 1.0, 1.0;
        const double d = clamp_unit(0.6 * x(0) + 0.2 + 0.2 * rng.normal());
        out.push_back(Sample{x, d});
    }
    return out;
}

}  // namespace

TEST_CASE("update_loss adds the target-minus-squared-error increment") {
    CHECK(update_loss(0.0, 0.17, 1.0) == -0.83);
    CHECK(update_loss(0.0, 0.25, 1.0) == -0.75);
    CHECK(update_loss(2.0, 0.25, 0.5) == 2.0);
    CHECK(update_loss(-1.0, 0.0, 0.0) == -1.0);
}

TEST_CASE("compute_weight follows min{1, base^(c*l)} with clamped base") {
    // 0.5^(1*2) = 0.25.
    CHECK(compute_weight(0.5, 1.0, 2.0, 1e-6) == doctest::Approx(0.25).epsilon(1e-15));
    // Negative cumulative loss saturates at 1 (and exactly 1).
    CHECK(compute_weight(0.5, 1.0, -3.0, 1e-6) == 1.0);
    // c = 0 forces weight 1 regardless of the ladder.
    CHECK(compute_weight(0.7, 0.0, 123.4, 1e-6) == 1.0);
    // The base is clamped from below at the floor...
    CHECK(compute_weight(0.0, 1.0, 1.0, 1e-3) ==
          doctest::Approx(1e-3).epsilon(1e-15));
    // ...and from above at 1 (which makes the weight exactly 1).
    CHECK(compute_weight(2.5, 1.0, 5.0, 1e-6) == 1.0);
    // Deep underflow lands on the positive weight floor, never 0.
    CHECK(compute_weight(1e-6, 1.0, 1e6, 1e-6) == kLambdaFloor);

    RngStream rng(5);
    for (int i = 0; i < 500; ++i) {
        const double w = compute_weight(rng.uniform(), 2.0 * rng.uniform(),
                                        20.0 * (rng.uniform() - 0.5), 1e-6);
        CHECK(w > 0.0);
        CHECK(w <= 1.0);
    }

    CHECK_THROWS_AS(compute_weight(-0.1, 1.0, 0.0, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(compute_weight(0.5, -1.0, 0.0, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(compute_weight(0.5, 1.0, std::nan(""), 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(compute_weight(0.5, 1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_weight(0.5, 1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("compute_weight_known_sigma follows min{1, sigma2^(l/2)}") {
    CHECK(compute_weight_known_sigma(0.25, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(compute_weight_known_sigma(0.04, 1.0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(compute_weight_known_sigma(0.25, 0.0) == 1.0);
    CHECK(compute_weight_known_sigma(0.25, -4.0) == 1.0);  // saturates
    CHECK(compute_weight_known_sigma(0.25, 2000.0) == kLambdaFloor);
    CHECK_THROWS_AS(compute_weight_known_sigma(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_weight_known_sigma(1.5, 1.0), std::invalid_argument);
}

TEST_CASE("update_delta runs the weighted thresholded recursion with clamped output") {
    // First contribution: previous estimate is irrelevant at zero mass.
    DeltaUpdate du = update_delta(0.7, 0.0, 1.0, 1.0, 1.0);
    CHECK(du.delta == 0.0);
    CHECK(du.capital_lambda == 1.0);

    // (1*0.1 + (1/4)*(1 - (-1))^2) / 2 = 0.55.
    du = update_delta(0.1, 1.0, 1.0, 1.0, -1.0);
    CHECK(du.delta == 0.55);
    CHECK(du.capital_lambda == 2.0);

    // The output is clamped into [-1, 1] before the deviation: f = 3 acts
    // like f = 1, so only the old mass remains.
    du = update_delta(0.1, 1.0, 1.0, 1.0, 3.0);
    CHECK(du.delta == 0.05);
    // Far-negative output clamps to -1.
    const DeltaUpdate a = update_delta(0.1, 1.0, 1.0, 1.0, -5.0);
    const DeltaUpdate b = update_delta(0.1, 1.0, 1.0, 1.0, -1.0);
    CHECK(a.delta == b.delta);
    CHECK(a.capital_lambda == b.capital_lambda);

    CHECK_THROWS_AS(update_delta(0.1, 1.0, 0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(update_delta(0.1, -1.0, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(update_delta(-0.1, 1.0, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(update_delta(0.1, 1.0, 1.0, std::nan(""), 0.0), std::invalid_argument);
}

TEST_CASE("update_delta keeps the estimate inside [0, 1] on random inputs") {
    RngStream rng(12);
    double delta = 0.0, mass = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double lambda = std::max(1e-12, rng.uniform());
        const double d = 2.0 * rng.uniform() - 1.0;  // targets within [-1, 1]
        const double f = 6.0 * (rng.uniform() - 0.5);
        const DeltaUpdate du = update_delta(delta, mass, lambda, d, f);
        delta = du.delta;
        mass = du.capital_lambda;
        CHECK(delta >= 0.0);
        CHECK(delta <= 1.0);  // (d - [f])^2 / 4 <= 1 for |d| <= 1
        CHECK(mass > 0.0);
    }
}

TEST_CASE("schedule_updates implements the four scheduling rules") {
    RngStream rng(3);
    CHECK(schedule_updates(UpdateMode::weighted, 0.123, 5, rng) == 1);
    CHECK(schedule_updates(UpdateMode::weighted, 1.0, 5, rng) == 1);

    CHECK(schedule_updates(UpdateMode::data_reuse, 1.0, 5, rng) == 5);
    CHECK(schedule_updates(UpdateMode::data_reuse, 0.01, 5, rng) == 1);
    CHECK(schedule_updates(UpdateMode::data_reuse, 0.5, 5, rng) == 3);  // ceil(2.5)
    CHECK(schedule_updates(UpdateMode::data_reuse, 0.2, 5, rng) == 1);  // ceil(1.0)

    for (int i = 0; i < 100; ++i)
        CHECK(schedule_updates(UpdateMode::random, 1.0, 5, rng) == 1);

    // Bernoulli and Poisson scheduling match their rates to 4 sigma.
    const int n = 100000;
    const double lambda = 0.37;
    double bern = 0.0, poi = 0.0;
    for (int i = 0; i < n; ++i) {
        bern += schedule_updates(UpdateMode::random, lambda, 5, rng);
        poi += schedule_updates(UpdateMode::oza_poisson, lambda, 5, rng);
    }
    CHECK(std::abs(bern / n - lambda) < 4.0 * std::sqrt(lambda * (1.0 - lambda) / n));
    CHECK(std::abs(poi / n - lambda) < 4.0 * std::sqrt(lambda / n));

    CHECK_THROWS_AS(schedule_updates(UpdateMode::weighted, 0.0, 5, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(schedule_updates(UpdateMode::weighted, 1.2, 5, rng),
                    std::invalid_argument);
}

TEST_CASE("combiner_predict is the inner product") {
    Vec z(2), y(2);
    z << 0.5, 0.5;
    y << 0.0, 0.0;
    CHECK(combiner_predict(z, y) == 0.0);
    z << 1.0, 0.0;
    y << 0.3, 9.0;
    CHECK(combiner_predict(z, y) == 0.3);
    CHECK_THROWS_AS(combiner_predict(Vec::Zero(2), Vec::Zero(3)), std::invalid_argument);
}

TEST_CASE("combiner_update applies the normalized step and honors the guard") {
    Vec z(2), y(2);
    z << 0.5, 0.5;
    y << 1.0, -1.0;
    combiner_update(z, y, 1.0, 1.0, kCombinerEps);
    CHECK(z(0) == 1.0);
    CHECK(z(1) == 0.0);

    // Zero error: no movement.
    Vec z2 = z;
    combiner_update(z2, y, 0.0, 1.0, kCombinerEps);
    CHECK((z2 - z).norm() == 0.0);

    // Tiny output vector: skipped entirely.
    Vec z3 = z;
    combiner_update(z3, Vec::Zero(2), 5.0, 1.0, kCombinerEps);
    CHECK((z3 - z).norm() == 0.0);

    CHECK_THROWS_AS(combiner_update(z, y, 1.0, 0.0, kCombinerEps), std::invalid_argument);
    CHECK_THROWS_AS(combiner_update(z, Vec::Zero(3), 1.0, 0.1, kCombinerEps),
                    std::invalid_argument);
}

TEST_CASE("make_ensemble initializes slots, combiner and the data-reuse step size") {
    BoostConfig cfg;
    cfg.m = 4;
    cfg.learner = LearnerKind::sgd;
    cfg.mode = UpdateMode::weighted;
    EnsembleState st = make_ensemble(cfg, 3);
    CHECK(static_cast<int>(st.slots.size()) == 4);
    CHECK(st.z.size() == 4);
    for (int k = 0; k < 4; ++k) {
        CHECK(st.z(k) == 0.25);
        CHECK(st.slots[k].delta == 0.0);
        CHECK(st.slots[k].capital_lambda == 0.0);
        CHECK(st.slots[k].update_count == 0);
        CHECK(std::get<SgdState>(st.slots[k].state).mu == cfg.mu);
        CHECK(std::get<SgdState>(st.slots[k].state).w.isZero(0.0));
    }

    // Data reuse spreads the step size over the K inner updates (SGD only).
    cfg.mode = UpdateMode::data_reuse;
    cfg.mu = 0.1;
    cfg.K = 5;
    EnsembleState dr = make_ensemble(cfg, 3);
    CHECK(std::get<SgdState>(dr.slots[0].state).mu == 0.1 / 5);

    cfg.learner = LearnerKind::nm;
    EnsembleState nm = make_ensemble(cfg, 3);
    CHECK(std::get<NmState>(nm.slots[0].state).beta == cfg.beta);

    CHECK_THROWS_AS(make_ensemble(cfg, 0), std::invalid_argument);
    cfg.m = 0;
    CHECK_THROWS_AS(make_ensemble(cfg, 3), ConfigError);
}

TEST_CASE("run_round reproduces a hand-computed three-round trace") {
    BoostConfig cfg;
    cfg.m = 2;
    cfg.learner = LearnerKind::sgd;
    cfg.mode = UpdateMode::weighted;
    cfg.weighting = WeightScheme::adaptive;
    cfg.sigma_m2 = 0.25;
    cfg.c = 1.0;
    cfg.mu = 0.5;
    cfg.mu_z = 0.5;
    EnsembleState st = make_ensemble(cfg, 1);

    auto w_of = [&](int k) { return std::get<SgdState>(st.slots[k].state).w(0); };

    // --- Round 1: d = 1, both learners still at zero --------------------
    RoundLog r1 = run_round(st, Sample{vec1(1.0), 1.0});
    CHECK(r1.t == 1);
    CHECK(r1.lambdas == std::vector<double>{1.0, 1.0});
    CHECK(r1.losses == std::vector<double>{0.0, -0.75, -1.5});
    CHECK(r1.learner_outputs == std::vector<double>{0.0, 0.0});
    CHECK(r1.learner_errors == std::vector<double>{1.0, 1.0});
    CHECK(r1.updates_applied == std::vector<int>{1, 1});
    CHECK(r1.final_estimate == 0.0);
    CHECK(r1.final_error == 1.0);
    CHECK(w_of(0) == 0.5);  // 0 + 0.5 * 1 * 1
    CHECK(w_of(1) == 0.5);
    // Both outputs were zero, so the combiner guard left z untouched.
    CHECK(st.z(0) == 0.5);
    CHECK(st.z(1) == 0.5);
    CHECK(st.slots[0].delta == 0.25);  // (1 - 0)^2 / 4
    CHECK(st.slots[1].delta == 0.25);
    CHECK(st.slots[0].capital_lambda == 1.0);
    CHECK(st.slots[1].capital_lambda == 1.0);

    // --- Round 2: d = 0.5, learner outputs hit the target exactly -------
    RoundLog r2 = run_round(st, Sample{vec1(1.0), 0.5});
    const double lambda2 = 0.7071067811865476;  // 0.25^(1*0.25)
    CHECK(r2.lambdas[0] == 1.0);
    CHECK(r2.lambdas[1] == doctest::Approx(lambda2).epsilon(1e-15));
    CHECK(r2.losses[0] == 0.0);
    CHECK(r2.losses[1] == 0.25);
    CHECK(r2.losses[2] == 0.5);
    CHECK(r2.learner_errors == std::vector<double>{0.0, 0.0});
    CHECK(r2.final_estimate == 0.5);
    CHECK(r2.final_error == 0.0);
    CHECK(w_of(0) == 0.5);  // zero error moves nothing
    CHECK(w_of(1) == 0.5);
    CHECK(st.slots[0].delta == 0.125);  // (1*0.25 + 0) / 2
    CHECK(st.slots[0].capital_lambda == 2.0);
    CHECK(st.slots[1].delta == doctest::Approx(0.14644660940672624).epsilon(1e-15));
    CHECK(st.slots[1].capital_lambda == doctest::Approx(1.7071067811865475).epsilon(1e-15));

    // --- Round 3: d = -1, a large miss reactivates full weights ---------
    RoundLog r3 = run_round(st, Sample{vec1(1.0), -1.0});
    CHECK(r3.lambdas == std::vector<double>{1.0, 1.0});  // l = -2 saturates the rule
    CHECK(r3.losses == std::vector<double>{0.0, -2.0, -4.0});
    CHECK(r3.learner_errors == std::vector<double>{-1.5, -1.5});
    CHECK(r3.final_estimate == 0.5);
    CHECK(r3.final_error == -1.5);
    CHECK(w_of(0) == -0.25);  // 0.5 + 0.5 * (-1.5)
    CHECK(w_of(1) == -0.25);
    // z += (0.5 * (-1.5) / 0.5) * y with y = (0.5, 0.5).
    CHECK(st.z(0) == -0.25);
    CHECK(st.z(1) == -0.25);
    CHECK(st.slots[0].delta == doctest::Approx(0.8125 / 3.0).epsilon(1e-15));
    CHECK(st.slots[0].capital_lambda == 3.0);
    CHECK(st.slots[1].delta == doctest::Approx(0.30013592579598003).epsilon(1e-15));
    CHECK(st.slots[1].capital_lambda == doctest::Approx(2.7071067811865475).epsilon(1e-15));
}

TEST_CASE("a single weighted learner reduces to the plain recursion") {
    const auto stream = bounded_stream(91, 1000);

    BoostConfig cfg;
    cfg.m = 1;
    cfg.learner = LearnerKind::sgd;
    cfg.mode = UpdateMode::weighted;
    const RunReport rep = run_stream(cfg, stream);

    SgdState direct = make_sgd(2, cfg.mu);
    for (const Sample& s : stream) (void)sgd_step(direct, s, 1.0);
    CHECK((rep.final_w[0] - direct.w).norm() == 0.0);

    BoostConfig nmcfg = cfg;
    nmcfg.learner = LearnerKind::nm;
    nmcfg.beta = 0.999;
    const RunReport nmrep = run_stream(nmcfg, stream);
    NmState nmdirect = make_nm(2, nmcfg.beta, nmcfg.v);
    for (const Sample& s : stream) (void)nm_weighted_step(nmdirect, s, 1.0);
    CHECK((nmrep.final_w[0] - nmdirect.w).norm() == 0.0);
}

TEST_CASE("data reuse with full weight equals K unit steps at step size mu/K") {
    const auto stream = bounded_stream(17, 400);
    BoostConfig cfg;
    cfg.m = 1;  // the first learner always has weight 1
    cfg.learner = LearnerKind::sgd;
    cfg.mode = UpdateMode::data_reuse;
    cfg.mu = 0.1;
    cfg.K = 5;
    const RunReport rep = run_stream(cfg, stream);
    CHECK(rep.update_counts[0] == 5 * 400);

    SgdState direct = make_sgd(2, cfg.mu / cfg.K);
    for (const Sample& s : stream)
        for (int i = 0; i < cfg.K; ++i) (void)sgd_step(direct, s, 1.0);
    CHECK((rep.final_w[0] - direct.w).norm() == 0.0);
}

TEST_CASE("round weights follow the published rules on every logged round") {
    const auto stream = bounded_stream(23, 300);
    RunOptions opts;
    opts.keep_round_logs = true;

    BoostConfig cfg;
    cfg.m = 5;
    cfg.learner = LearnerKind::sgd;
    cfg.mode = UpdateMode::weighted;
    cfg.sigma_m2 = 0.05;

    SUBCASE("adaptive weights come from the running delta estimates") {
        const RunReport rep = run_stream(cfg, stream, opts);
        for (const RoundLog& log : rep.round_logs) {
            CHECK(log.lambdas[0] == 1.0);
            CHECK(log.losses[0] == 0.0);
            for (int k = 0; k + 1 < static_cast<int>(log.losses.size()); ++k)
                CHECK(log.losses[k + 1] ==
                      update_loss(log.losses[k], cfg.sigma_m2, log.learner_errors[k]));
            for (double lam : log.lambdas) {
                CHECK(lam > 0.0);
                CHECK(lam <= 1.0);
            }
        }
    }

    SUBCASE("known-variance weights are a pure function of the ladder") {
        cfg.weighting = WeightScheme::known_sigma;
        cfg.sigma2 = 0.25;
        const RunReport rep = run_stream(cfg, stream, opts);
        for (const RoundLog& log : rep.round_logs) {
            CHECK(log.lambdas[0] == 1.0);
            for (int k = 1; k < cfg.m; ++k)
                CHECK(log.lambdas[k] ==
                      compute_weight_known_sigma(cfg.sigma2, log.losses[k]));
        }
    }
}

TEST_CASE("zero exponent gain drives every slot through the identical trajectory") {
    const auto stream = bounded_stream(37, 500);
    for (const UpdateMode mode :
         {UpdateMode::weighted, UpdateMode::data_reuse, UpdateMode::random}) {
        BoostConfig cfg;
        cfg.m = 4;
        cfg.learner = LearnerKind::sgd;
        cfg.mode = mode;
        cfg.c = 0.0;  // lambda == 1 everywhere
        RunOptions opts;
        opts.keep_round_logs = true;
        const RunReport rep = run_stream(cfg, stream, opts);
        for (const RoundLog& log : rep.round_logs)
            for (double lam : log.lambdas) CHECK(lam == 1.0);
        for (int k = 1; k < cfg.m; ++k) {
            CHECK((rep.final_w[k] - rep.final_w[0]).norm() == 0.0);
            CHECK(rep.update_counts[k] == rep.update_counts[0]);
        }
    }
}

TEST_CASE("a high per-learner target shuts the deep learners off") {
    const auto stream = bounded_stream(53, 200);
    BoostConfig cfg;
    cfg.m = 6;
    cfg.learner = LearnerKind::sgd;
    cfg.mode = UpdateMode::weighted;
    cfg.sigma_m2 = 10.0;  // the ladder climbs by ~+10 per learner
    RunOptions opts;
    opts.keep_round_logs = true;
    const RunReport rep = run_stream(cfg, stream, opts);
    for (const RoundLog& log : rep.round_logs) {
        if (log.t < 5) continue;  // let the delta estimates settle
        for (int k = 1; k + 1 < cfg.m; ++k)
            CHECK(log.lambdas[k + 1] <= log.lambdas[k] * (1.0 + 1e-9));
    }
    CHECK(rep.round_logs.back().lambdas[cfg.m - 1] < 1e-3);
    CHECK(rep.mean_lambda[0] == 1.0);
    // In the last round the deepest learner sits far below the second one.
    CHECK(rep.round_logs.back().lambdas[cfg.m - 1] < rep.round_logs.back().lambdas[1]);
}

TEST_CASE("run_stream aggregates are internally consistent") {
    const auto stream = bounded_stream(67, 800);
    BoostConfig cfg;
    cfg.m = 3;
    cfg.learner = LearnerKind::sgd;
    cfg.mode = UpdateMode::weighted;
    RunOptions opts;
    opts.keep_lambda_trace = true;
    opts.lambda_trace_stride = 10;
    const RunReport rep = run_stream(cfg, stream, opts);

    CHECK(rep.T == 800);
    CHECK(static_cast<int>(rep.ase.size()) == 800);
    for (std::size_t i = 1; i < rep.ase.size(); ++i) CHECK(rep.ase[i] >= rep.ase[i - 1]);
    CHECK(rep.final_mse == rep.ase.back() / 800.0);

    for (int k = 0; k < cfg.m; ++k) {
        CHECK(rep.update_counts[k] == 800);  // weighted mode: one per round
        CHECK(rep.mean_lambda[k] > 0.0);
        CHECK(rep.mean_lambda[k] <= 1.0);
        CHECK(rep.wmse[k] >= 0.0);
        CHECK(rep.learner_mse[k] >= 0.0);
        CHECK(rep.data_reuse_equiv[k] >= 800);  // ceil(K*lambda) >= 1 per round
        CHECK(rep.mean_delta[k] >= 0.0);
        CHECK(rep.mean_delta[k] <= 1.0);
    }
    // Trace: rounds 1, 11, 21, ... each contribute m points.
    CHECK(static_cast<int>(rep.lambda_trace.size()) == 80 * cfg.m);
    CHECK(rep.lambda_trace.front().t == 1);
    CHECK(rep.lambda_trace.front().k == 1);
    CHECK(rep.lambda_trace.front().lambda == 1.0);
    CHECK(rep.lambda_trace[cfg.m].t == 11);

    // Scheduling counts: random mode on the first learner fires every
    // round (lambda = 1), Poisson mode concentrates around one per round.
    BoostConfig rnd = cfg;
    rnd.m = 1;
    rnd.mode = UpdateMode::random;
    CHECK(run_stream(rnd, stream).update_counts[0] == 800);
    rnd.mode = UpdateMode::oza_poisson;
    const auto oza_count = run_stream(rnd, stream).update_counts[0];
    CHECK(std::abs(static_cast<double>(oza_count) - 800.0) <= 4.0 * std::sqrt(800.0));
}

TEST_CASE("run_stream is deterministic for a fixed seed and rejects bad input") {
    const auto stream = bounded_stream(71, 300);
    BoostConfig cfg;
    cfg.m = 4;
    cfg.mode = UpdateMode::oza_poisson;  // exercises the scheduling RNG
    cfg.seed = 99;
    const RunReport a = run_stream(cfg, stream);
    const RunReport b = run_stream(cfg, stream);
    CHECK(a.final_mse == b.final_mse);
    for (int k = 0; k < cfg.m; ++k) {
        CHECK((a.final_w[k] - b.final_w[k]).norm() == 0.0);
        CHECK(a.update_counts[k] == b.update_counts[k]);
        CHECK(a.mean_lambda[k] == b.mean_lambda[k]);
    }

    CHECK_THROWS_AS(run_stream(cfg, {}), std::invalid_argument);

    auto ragged = stream;
    ragged[10].x = Vec::Ones(3);
    CHECK_THROWS_AS(run_stream(cfg, ragged), std::invalid_argument);

    RunOptions bad;
    bad.lambda_trace_stride = 0;
    CHECK_THROWS_AS(run_stream(cfg, stream, bad), std::invalid_argument);
}

TEST_CASE("numerical failures name the learner and the round") {
    BoostConfig cfg;
    cfg.m = 2;
    EnsembleState st = make_ensemble(cfg, 1);
    std::get<SgdState>(st.slots[0].state).w(0) = std::nan("");
    CHECK_THROWS_WITH_AS(run_round(st, Sample{vec1(1.0), 0.5}),
                         doctest::Contains("learner k=1"), NumericError);

    EnsembleState st2 = make_ensemble(cfg, 1);
    CHECK_THROWS_WITH_AS(run_round(st2, Sample{vec1(1.0), std::nan("")}),
                         doctest::Contains("round t=1"), std::invalid_argument);
}
