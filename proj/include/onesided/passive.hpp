#pragma once
#include <Eigen/Dense>
#include <memory>
#include <utility>
#include <vector>

#include "onesided/learners.hpp"
#include "onesided/stream.hpp"

namespace onesided {

struct PassiveParams {
    long discretize_k = 0;    // K; 0 = ceil(T^(1/3))
    long explore_s = 0;       // S; 0 = ceil(T^(2/3))
    long cover_samples = 0;   // 0 = default_cover_samples(K, d)
};

// Sampling budget for the randomized strategy cover: ten times the Sauer bound
// (e K / (d+1))^(d+1) on distinct dichotomies of the first K points, capped at
// 50000.
long default_cover_samples(long k, int dim);

// Offline policy: observes the first K+S items unconditionally, builds a
// discretized strategy set from sphere samples deduplicated by their decision
// vector on the first K covariates, picks the empirical one-sided-utility
// minimizer over all K+S observed pairs, and plays that frozen threshold rule
// (accept iff mu(x^T beta) >= c) for the rest of the stream.
class PassiveLearner final : public Learner {
public:
    PassiveLearner(const LearnerConfig& cfg, const PassiveParams& params, uint64_t rng_seed);

    std::vector<Decision> round(const Eigen::MatrixXd& batch, const RevealFn& reveal) override;
    Eigen::VectorXd coefficients() const override { return beta_; }

    bool frozen() const { return frozen_; }
    long items_seen() const { return seen_; }
    long phase_length() const { return k_ + s_; }  // K + S
    long discretize_k() const { return k_; }
    long explore_s() const { return s_; }

private:
    void fit_frozen_rule();

    LearnerConfig cfg_;
    long k_ = 0;
    long s_ = 0;
    long cover_samples_ = 0;
    std::mt19937_64 rng_;
    std::vector<Eigen::VectorXd> xs_;
    std::vector<double> ys_;
    Eigen::VectorXd beta_;
    bool frozen_ = false;
    long seen_ = 0;
};

// Runs the passive policy over an entire stream; returns the frozen parameter
// and the flattened per-item decision trace. Throws StreamTooShortError when
// the stream holds fewer than K+S items.
std::pair<Eigen::VectorXd, std::vector<Decision>> passive_learn(Stream& stream,
                                                                const LearnerConfig& cfg,
                                                                const PassiveParams& params,
                                                                uint64_t rng_seed);

}  // namespace onesided
