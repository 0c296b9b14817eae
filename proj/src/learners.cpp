#include "onesided/learners.hpp"

#include <cmath>
#include <stdexcept>

#include "onesided/errors.hpp"
#include "onesided/log.hpp"

namespace onesided {

const char* method_name(Method m) {
    switch (m) {
        case Method::Adaptive: return "adaptive";
        case Method::Greedy: return "greedy";
        case Method::EpsGreedy: return "eps_greedy";
        case Method::OneSidedEpsGreedy: return "os_eps_greedy";
        case Method::Noise: return "noise";
        case Method::OneSidedNoise: return "os_noise";
        case Method::Margin: return "margin";
        case Method::Passive: return "passive";
        case Method::Sgd: return "sgd";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    for (Method m : {Method::Adaptive, Method::Greedy, Method::EpsGreedy,
                     Method::OneSidedEpsGreedy, Method::Noise, Method::OneSidedNoise,
                     Method::Margin, Method::Passive, Method::Sgd}) {
        if (name == method_name(m)) return m;
    }
    throw ConfigError("unknown method '" + name + "'");
}

double rho_t(const LearnerConfig& cfg, double eta, long t) {
    const double L = cfg.link.lipschitz;
    const double gamma = cfg.link.mu_at_zero_bound;
    const double kappa = std::sqrt(
        3.0 + 2.0 * std::log(1.0 + 2.0 * cfg.batch_size * cfg.covariate_bound *
                                       cfg.covariate_bound / cfg.lambda0));
    const double c_t_delta =
        L * cfg.covariate_bound * cfg.norm_bound + gamma + cfg.cutoff +
        cfg.noise_phi * std::sqrt(std::log(2.0 * static_cast<double>(cfg.horizon) / cfg.delta));
    const double log_t = std::log(static_cast<double>(t));
    return (2.0 * L / eta) * kappa * c_t_delta * std::sqrt(2.0 * cfg.dim * log_t) *
           std::sqrt(std::log(2.0 * cfg.dim * static_cast<double>(cfg.horizon) / cfg.delta));
}

namespace {

// Growing (X, y) history with amortized appends.
class History {
public:
    void init(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
        n_ = X.rows();
        const long cap = std::max<long>(2 * n_, 64);
        X_.resize(cap, X.cols());
        y_.resize(cap);
        X_.topRows(n_) = X;
        y_.head(n_) = y;
    }
    void append(const Eigen::Ref<const Eigen::VectorXd>& x, double label) {
        if (n_ == X_.rows()) {
            X_.conservativeResize(2 * n_, Eigen::NoChange);
            y_.conservativeResize(2 * n_);
        }
        X_.row(n_) = x.transpose();
        y_[n_] = label;
        ++n_;
    }
    Eigen::Ref<const Eigen::MatrixXd> X() const { return X_.topRows(n_); }
    Eigen::Ref<const Eigen::VectorXd> y() const { return y_.head(n_); }
    long size() const { return n_; }

private:
    Eigen::MatrixXd X_;
    Eigen::VectorXd y_;
    long n_ = 0;
};

class GlmPolicyLearner final : public Learner {
public:
    GlmPolicyLearner(Method method, const LearnerConfig& cfg, const Eigen::MatrixXd& warm_X,
                     const Eigen::VectorXd& warm_y, uint64_t rng_seed)
        : method_(method),
          cfg_(cfg),
          design_(DesignState::init(warm_X, cfg.lambda0)),
          rng_(rng_seed),
          unif_(0.0, 1.0) {
        cfg_.dim = static_cast<int>(warm_X.cols());
        eta_ = compute_eta(cfg_.link, cfg_.covariate_bound, cfg_.norm_bound);
        history_.init(warm_X, warm_y);
        xy_sum_ = warm_X.transpose() * warm_y;
        beta_ = Eigen::VectorXd::Zero(cfg_.dim);
        refit();
    }

    std::vector<Decision> round(const Eigen::MatrixXd& batch, const RevealFn& reveal) override {
        ++t_;
        if (refit_countdown_ <= 0) {
            refit();
            refit_countdown_ = cfg_.refit_every;
        }
        --refit_countdown_;

        std::vector<Decision> decisions;
        decisions.reserve(batch.rows());
        for (long j = 0; j < batch.rows(); ++j) {
            const Eigen::VectorXd x = batch.row(j).transpose();
            Decision dec = decide(x);
            if (dec.accept) {
                const double label = reveal(static_cast<int>(j));
                history_.append(x, label);
                xy_sum_.noalias() += x * label;
                design_.rank1_update(x);
            }
            decisions.push_back(dec);
        }
        return decisions;
    }

    Eigen::VectorXd coefficients() const override { return beta_; }

private:
    Decision decide(const Eigen::VectorXd& x) {
        Decision dec;
        dec.score = link_eval(cfg_.link, x.dot(beta_));
        const double eps = std::min(1.0, cfg_.alpha / std::sqrt(static_cast<double>(t_)));
        switch (method_) {
            case Method::Adaptive:
                dec.bonus = (cfg_.adaptive_bonus == AdaptiveBonus::TheoreticalRho
                                 ? rho_t(cfg_, eta_, t_)
                                 : cfg_.alpha) *
                            design_.width(x);
                break;
            case Method::Greedy:
                dec.bonus = 0.0;
                break;
            case Method::EpsGreedy:
                if (unif_(rng_) < eps) {
                    dec.accept = unif_(rng_) < 0.5;
                    return dec;
                }
                break;
            case Method::OneSidedEpsGreedy:
                if (unif_(rng_) < eps) {
                    dec.accept = true;
                    return dec;
                }
                break;
            case Method::Noise:
                dec.bonus = cfg_.alpha * (unif_(rng_) - 0.5) /
                            std::sqrt(static_cast<double>(t_));
                break;
            case Method::OneSidedNoise:
                dec.bonus = cfg_.alpha * unif_(rng_) / std::sqrt(static_cast<double>(t_));
                break;
            case Method::Margin:
                dec.bonus = cfg_.alpha / std::sqrt(static_cast<double>(t_));
                break;
            default:
                throw std::logic_error("GlmPolicyLearner: unsupported method");
        }
        dec.accept = dec.score - cfg_.cutoff + dec.bonus > 0.0;
        return dec;
    }

    void refit() {
        Eigen::VectorXd beta_hat;
        if (cfg_.link.kind == LinkKind::Identity) {
            // The maintained covariance A is exactly the Gram matrix of the
            // observed history, so the normal equations read A beta = sum x y.
            beta_hat = design_.A().ldlt().solve(xy_sum_);
        } else {
            const FitResult fit =
                fit_glm(history_.X(), history_.y(), cfg_.link, beta_, 1e-10, 100);
            if (!fit.converged) {
                log_debug("glm refit not converged at t=", t_, ", score_norm=", fit.score_norm,
                          "; projection will bound the iterate");
            }
            beta_hat = fit.beta;
        }
        if (beta_hat.norm() > cfg_.norm_bound) {
            beta_ = project_beta(beta_hat, history_.X(), cfg_.link, design_.A_inv(),
                                 cfg_.norm_bound);
        } else {
            beta_ = beta_hat;
        }
    }

    Method method_;
    LearnerConfig cfg_;
    DesignState design_;
    History history_;
    Eigen::VectorXd xy_sum_;
    Eigen::VectorXd beta_;
    double eta_ = 1.0;
    long t_ = 0;
    int refit_countdown_ = 0;
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> unif_;
};

}  // namespace

std::unique_ptr<Learner> make_glm_learner(Method method, const LearnerConfig& cfg,
                                          const Eigen::MatrixXd& warm_X,
                                          const Eigen::VectorXd& warm_y, uint64_t rng_seed) {
    switch (method) {
        case Method::Adaptive:
        case Method::Greedy:
        case Method::EpsGreedy:
        case Method::OneSidedEpsGreedy:
        case Method::Noise:
        case Method::OneSidedNoise:
        case Method::Margin:
            return std::make_unique<GlmPolicyLearner>(method, cfg, warm_X, warm_y, rng_seed);
        default:
            throw ConfigError(std::string("make_glm_learner: method '") + method_name(method) +
                              "' is not a GLM policy learner");
    }
}

}  // namespace onesided
