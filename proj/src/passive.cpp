#include "onesided/passive.hpp"

#include <cmath>
#include <map>

#include "onesided/errors.hpp"
#include "onesided/log.hpp"

namespace onesided {

long default_cover_samples(long k, int dim) {
    const double exponent = dim + 1;
    const double bound =
        std::pow(std::exp(1.0) * static_cast<double>(k) / exponent, exponent);
    const double capped = std::min(5e4, 10.0 * bound);
    return std::max<long>(32, static_cast<long>(std::ceil(capped)));
}

PassiveLearner::PassiveLearner(const LearnerConfig& cfg, const PassiveParams& params,
                               uint64_t rng_seed)
    : cfg_(cfg), rng_(rng_seed) {
    const double T = static_cast<double>(cfg.horizon) * cfg.batch_size;
    k_ = params.discretize_k > 0 ? params.discretize_k
                                 : static_cast<long>(std::ceil(std::cbrt(T)));
    s_ = params.explore_s > 0 ? params.explore_s
                              : static_cast<long>(std::ceil(std::pow(T, 2.0 / 3.0)));
    cover_samples_ =
        params.cover_samples > 0 ? params.cover_samples : default_cover_samples(k_, cfg.dim);
    beta_ = Eigen::VectorXd::Zero(cfg.dim);
}

std::vector<Decision> PassiveLearner::round(const Eigen::MatrixXd& batch,
                                            const RevealFn& reveal) {
    std::vector<Decision> decisions;
    decisions.reserve(batch.rows());
    for (long j = 0; j < batch.rows(); ++j) {
        const Eigen::VectorXd x = batch.row(j).transpose();
        Decision dec;
        if (!frozen_) {
            dec.accept = true;
            dec.score = 0.0;
            xs_.push_back(x);
            ys_.push_back(reveal(static_cast<int>(j)));
            ++seen_;
            if (seen_ == k_ + s_) {
                fit_frozen_rule();
                frozen_ = true;
            }
        } else {
            dec.score = link_eval(cfg_.link, x.dot(beta_));
            dec.accept = dec.score >= cfg_.cutoff;  // frozen rule keeps the >= convention
            if (dec.accept) reveal(static_cast<int>(j));
            ++seen_;
        }
        decisions.push_back(dec);
    }
    return decisions;
}

void PassiveLearner::fit_frozen_rule() {
    const double c = cfg_.cutoff;
    const long n = static_cast<long>(xs_.size());
    const long k = std::min<long>(k_, n);

    // Candidate parameters uniform on the radius-M sphere, deduplicated by the
    // decision vector they induce on the first K covariates.
    std::normal_distribution<double> normal(0.0, 1.0);
    std::map<std::vector<bool>, Eigen::VectorXd> cover;
    for (long s = 0; s < cover_samples_; ++s) {
        Eigen::VectorXd g(cfg_.dim);
        for (int i = 0; i < cfg_.dim; ++i) g[i] = normal(rng_);
        const double norm = g.norm();
        if (norm == 0.0) continue;
        g *= cfg_.norm_bound / norm;

        std::vector<bool> key(k);
        for (long i = 0; i < k; ++i) key[i] = link_eval(cfg_.link, xs_[i].dot(g)) >= c;
        cover.emplace(std::move(key), std::move(g));
    }
    log_debug("passive cover: ", cover.size(), " distinct dichotomies from ", cover_samples_,
              " samples");

    double best_utility = std::numeric_limits<double>::infinity();
    for (const auto& [key, candidate] : cover) {
        double utility = 0.0;
        for (long i = 0; i < n; ++i) {
            const bool action = link_eval(cfg_.link, xs_[i].dot(candidate)) >= c;
            const bool label_above = ys_[i] > c;
            if (label_above != action) utility += std::abs(ys_[i] - c);
        }
        if (utility < best_utility) {
            best_utility = utility;
            beta_ = candidate;
        }
    }
}

std::pair<Eigen::VectorXd, std::vector<Decision>> passive_learn(Stream& stream,
                                                                const LearnerConfig& cfg,
                                                                const PassiveParams& params,
                                                                uint64_t rng_seed) {
    LearnerConfig local = cfg;
    local.dim = stream.dim();
    PassiveLearner learner(local, params, rng_seed);

    const long available = stream.total_rounds() * local.batch_size;
    if (available < learner.phase_length()) {
        throw StreamTooShortError("passive_learn: stream holds " + std::to_string(available) +
                                  " items, needs K+S = " +
                                  std::to_string(learner.phase_length()));
    }

    std::vector<Decision> trace;
    while (stream.next_round()) {
        const Eigen::MatrixXd& batch = stream.covariates();
        auto decisions = learner.round(batch, [&](int j) { return stream.reveal(j); });
        trace.insert(trace.end(), decisions.begin(), decisions.end());
    }
    return {learner.coefficients(), std::move(trace)};
}

}  // namespace onesided
