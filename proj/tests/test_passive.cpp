#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "onesided/errors.hpp"
#include "onesided/passive.hpp"

using namespace onesided;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {
LearnerConfig passive_config(long horizon, int batch = 1, int dim = 1) {
    LearnerConfig cfg;
    cfg.link = LinkSpec::identity();
    cfg.cutoff = 0.5;
    cfg.norm_bound = 1.0;
    cfg.horizon = horizon;
    cfg.batch_size = batch;
    cfg.dim = dim;
    return cfg;
}
}  // namespace

TEST_CASE("default phase sizes follow the T^(1/3) / T^(2/3) schedule") {
    PassiveLearner learner(passive_config(1000), PassiveParams{}, 1);
    CHECK(learner.discretize_k() == 10);
    CHECK(learner.explore_s() == 100);
    CHECK(learner.phase_length() == 110);
}

TEST_CASE("cover sample budget") {
    // one point in 1-D: tiny bound, floored
    CHECK(default_cover_samples(1, 1) == 32);
    // the cap engages for generous K and d
    CHECK(default_cover_samples(50, 6) == 50000);
}

TEST_CASE("accept-all phase then frozen rule") {
    StreamSpec spec;
    spec.kind = StreamKind::SyntheticGlm;
    spec.dim = 2;
    spec.horizon = 400;
    spec.batch_size = 1;
    spec.noise_phi = 0.05;
    spec.seed = 44;
    spec.link = LinkSpec::identity();
    spec.cutoff = 0.0;
    spec.beta_star = Eigen::Vector2d(1, 0);
    auto stream = open_stream(spec);

    LearnerConfig cfg = passive_config(400, 1, 2);
    cfg.cutoff = 0.0;
    auto [beta, trace] = passive_learn(*stream, cfg, PassiveParams{}, 7);
    CHECK(trace.size() == 400);

    const long phase = 8 + 55;  // ceil(400^(1/3)) + ceil(400^(2/3))
    for (long i = 0; i < phase; ++i) CHECK(trace[i].accept);

    // frozen rule: accept iff mu(x^T beta) >= c, with the >= convention
    CHECK(beta.norm() == doctest::Approx(1.0).epsilon(1e-9));
    long disagreements = 0;
    for (size_t i = phase; i < trace.size(); ++i) {
        const bool rule = trace[i].score >= cfg.cutoff;
        if (rule != trace[i].accept) ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("zero-utility fit on an all-positive sample") {
    // five observations, all labels above the cutoff: any parameter accepting
    // all of them has empirical utility zero and must be selected
    LearnerConfig cfg = passive_config(100, 1, 1);
    cfg.cutoff = 0.5;
    PassiveParams params;
    params.discretize_k = 2;
    params.explore_s = 3;
    PassiveLearner learner(cfg, params, 99);

    const double xs[5] = {0.8, 1.0, 0.9, 0.7, 1.0};
    const double ys[5] = {2.0, 1.5, 1.8, 2.2, 1.9};
    for (int i = 0; i < 5; ++i) {
        MatrixXd batch(1, 1);
        batch << xs[i];
        (void)learner.round(batch, [&](int) { return ys[i]; });
    }
    CHECK(learner.frozen());
    const VectorXd beta = learner.coefficients();
    double utility = 0.0;
    for (int i = 0; i < 5; ++i) {
        const bool action = xs[i] * beta[0] >= cfg.cutoff;
        if ((ys[i] > cfg.cutoff) != action) utility += std::abs(ys[i] - cfg.cutoff);
    }
    CHECK(utility == 0.0);
}

TEST_CASE("frozen parameter never changes after K+S") {
    StreamSpec spec;
    spec.kind = StreamKind::SyntheticGlm;
    spec.dim = 2;
    spec.horizon = 300;
    spec.batch_size = 1;
    spec.noise_phi = 0.5;
    spec.seed = 5;
    spec.link = LinkSpec::identity();
    spec.cutoff = 0.0;
    spec.beta_star = Eigen::Vector2d(0.6, -0.8);
    auto stream = open_stream(spec);

    LearnerConfig cfg = passive_config(300, 1, 2);
    cfg.cutoff = 0.0;
    PassiveLearner learner(cfg, PassiveParams{}, 21);
    VectorXd frozen_beta;
    while (stream->next_round()) {
        (void)learner.round(stream->covariates(), [&](int j) { return stream->reveal(j); });
        if (learner.items_seen() == learner.phase_length()) {
            frozen_beta = learner.coefficients();
        }
        if (learner.frozen()) {
            CHECK((learner.coefficients() - frozen_beta).norm() == 0.0);
        }
    }
    CHECK(learner.frozen());
}

TEST_CASE("stream too short") {
    StreamSpec spec;
    spec.kind = StreamKind::SyntheticGlm;
    spec.dim = 2;
    spec.horizon = 5;
    spec.batch_size = 1;
    spec.seed = 1;
    spec.link = LinkSpec::identity();
    spec.beta_star = Eigen::Vector2d(1, 0);
    auto stream = open_stream(spec);

    LearnerConfig cfg = passive_config(5, 1, 2);
    PassiveParams params;
    params.discretize_k = 4;
    params.explore_s = 10;
    CHECK_THROWS_AS((void)passive_learn(*stream, cfg, params, 1), StreamTooShortError);
}
