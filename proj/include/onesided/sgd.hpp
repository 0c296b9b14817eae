#pragma once
#include <Eigen/Dense>
#include <memory>

#include "onesided/learners.hpp"
#include "onesided/link.hpp"

namespace onesided {

// State of the projected-SGD policy under partial feedback. dist_bound d_t is a
// certified bound on ||beta_t - beta*|| that only ever shrinks; noise_bound is
// the hard bound on |eps_t| (distinct from the covariate bound).
struct SgdState {
    Eigen::VectorXd beta;
    double dist_bound = 1.0;     // d_t
    double alpha_acc = 0.1;      // accuracy alpha
    double noise_bound = 0.0;    // bound on |eps_t|
    double delta_sgd = 1.0;      // delta in the bonus s_t = L (1+delta) d_t ||x||
    double omega_radius = 1e6;   // r of the slab Omega = {beta : |x^T beta| <= r}
    LinkSpec link;
    double cutoff = 0.5;
};

// One step of the SGD policy on covariate x: reject outright when even the
// optimistic estimate mu(x^T beta) + s_t falls below the cutoff; otherwise
// accept, and take a projected gradient step only when the observed residual
// exceeds alpha + noise_bound (in which case d_t contracts).
Decision sgd_round(SgdState& state, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const RevealFn& reveal, int item_index = 0);

// Streaming wrapper that applies sgd_round to each batch item in order.
class SgdLearner final : public Learner {
public:
    explicit SgdLearner(const SgdState& init) : state_(init) {}

    std::vector<Decision> round(const Eigen::MatrixXd& batch, const RevealFn& reveal) override {
        std::vector<Decision> decisions;
        decisions.reserve(batch.rows());
        for (long j = 0; j < batch.rows(); ++j) {
            decisions.push_back(
                sgd_round(state_, batch.row(j).transpose(), reveal, static_cast<int>(j)));
        }
        return decisions;
    }

    Eigen::VectorXd coefficients() const override { return state_.beta; }
    const SgdState& state() const { return state_; }

private:
    SgdState state_;
};

}  // namespace onesided
