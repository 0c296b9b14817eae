#include "onesided/sgd.hpp"

#include <cmath>

namespace onesided {

namespace {
// Projection onto the slab {beta : |x^T beta| <= r} for the current covariate.
void project_slab(Eigen::VectorXd& beta, const Eigen::Ref<const Eigen::VectorXd>& x, double r) {
    const double nsq = x.squaredNorm();
    if (nsq == 0.0) return;
    const double s = x.dot(beta);
    const double clipped = std::clamp(s, -r, r);
    if (s != clipped) beta -= ((s - clipped) / nsq) * x;
}
}  // namespace

Decision sgd_round(SgdState& state, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const RevealFn& reveal, int item_index) {
    const double L = state.link.lipschitz;
    const double xnorm = x.norm();

    Decision dec;
    dec.score = link_eval(state.link, x.dot(state.beta));
    dec.bonus = L * (1.0 + state.delta_sgd) * state.dist_bound * xnorm;

    if (dec.score + dec.bonus < state.cutoff) {
        dec.accept = false;
        return dec;
    }

    dec.accept = true;
    const double y = reveal(item_index);
    if (std::abs(y - dec.score) <= state.alpha_acc + state.noise_bound) {
        return dec;  // already accurate on this direction, keep beta and d_t
    }

    const double step = 1.0 / (L * xnorm * xnorm);
    state.beta -= step * (dec.score - y) * x;
    project_slab(state.beta, x, state.omega_radius);

    const double shrink =
        state.alpha_acc * state.alpha_acc / (xnorm * xnorm * L * L);
    const double d2 = state.dist_bound * state.dist_bound - shrink;
    state.dist_bound = d2 > 0.0 ? std::sqrt(d2) : 0.0;
    return dec;
}

}  // namespace onesided
