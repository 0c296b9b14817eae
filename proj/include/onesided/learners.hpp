#pragma once
#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "onesided/design.hpp"
#include "onesided/glm.hpp"
#include "onesided/link.hpp"

namespace onesided {

enum class Method {
    Adaptive,
    Greedy,
    EpsGreedy,
    OneSidedEpsGreedy,
    Noise,
    OneSidedNoise,
    Margin,
    Passive,
    Sgd,
};

const char* method_name(Method m);
Method method_from_name(const std::string& name);

// How the adaptive learner scales its uncertainty bonus: the closed-form
// rho_t(delta) from the regret analysis, or a tuned constant alpha in its place
// (the benchmark convention, where alpha is swept over a grid like the other
// exploration baselines).
enum class AdaptiveBonus { TheoreticalRho, AlphaWidth };

struct LearnerConfig {
    LinkSpec link;
    double cutoff = 0.5;           // c
    double norm_bound = 1.0;       // M
    double covariate_bound = 1.0;  // B
    double noise_phi = 1.0;        // phi
    double lambda0 = 1.0;
    double delta = 0.05;           // confidence level in (0, min(1, d/e))
    long horizon = 1000;           // T
    int batch_size = 1;            // N
    int warm_start = 0;            // K
    double alpha = 0.0;            // exploration scale
    int refit_every = 1;
    int dim = 0;                   // d
    AdaptiveBonus adaptive_bonus = AdaptiveBonus::TheoreticalRho;
};

// Confidence-width multiplier of the adaptive decision rule,
//   rho_t(delta) = (2L/eta) * kappa * C_{T,delta} * sqrt(2 d log t) * sqrt(log(2dT/delta))
// with kappa = sqrt(3 + 2 log(1 + 2 N B^2 / lambda0)) and
// C_{T,delta} = L*B*M + gamma + c + phi * sqrt(log(2T/delta)).
// rho_1 = 0 since log 1 = 0.
double rho_t(const LearnerConfig& cfg, double eta, long t);

struct Decision {
    bool accept = false;
    double score = 0.0;  // mu(x^T beta_t)
    double bonus = 0.0;  // additive term actually used, e.g. rho*width or alpha/sqrt(t)
};

using RevealFn = std::function<double(int)>;

// A sequential decision policy under one-sided feedback. Each round receives a
// covariate batch and a reveal callback that may be queried only for accepted
// items.
class Learner {
public:
    virtual ~Learner() = default;
    virtual std::vector<Decision> round(const Eigen::MatrixXd& batch, const RevealFn& reveal) = 0;
    virtual Eigen::VectorXd coefficients() const = 0;
};

// GLM policy family sharing one refit/decide/update loop: the adaptive learner,
// greedy, and the randomized/margin exploration baselines. Warm-started on
// labeled pairs; every accepted item is appended to the history and folded into
// the design state immediately.
std::unique_ptr<Learner> make_glm_learner(Method method, const LearnerConfig& cfg,
                                          const Eigen::MatrixXd& warm_X,
                                          const Eigen::VectorXd& warm_y, uint64_t rng_seed);

}  // namespace onesided
