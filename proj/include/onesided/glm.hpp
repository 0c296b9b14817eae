#pragma once
#include <Eigen/Dense>

#include "onesided/design.hpp"
#include "onesided/link.hpp"

namespace onesided {

// A batch of observed (x, y) pairs the model is fit on. Every row satisfies
// ||x||_2 <= covariate_bound and the target parameter satisfies
// ||beta||_2 <= norm_bound.
struct GlmProblem {
    Eigen::MatrixXd features;  // n x d
    Eigen::VectorXd labels;    // n
    LinkSpec link;
    double norm_bound = 1.0;       // M
    double covariate_bound = 1.0;  // B

    // Throws DomainError on shape mismatch or a row-norm violation.
    void validate() const;
};

struct FitResult {
    Eigen::VectorXd beta;
    bool converged = false;
    int iterations = 0;
    double score_norm = 0.0;  // ||sum_i x_i (y_i - mu(x_i^T beta))|| at exit
    bool projected = false;
};

// Score of the GLM likelihood equations: sum_i x_i (y_i - mu(x_i^T beta)).
Eigen::VectorXd glm_score(const Eigen::Ref<const Eigen::MatrixXd>& X,
                          const Eigen::Ref<const Eigen::VectorXd>& y, const LinkSpec& link,
                          const Eigen::VectorXd& beta);

// Cross-entropy loss for the logistic link (used by tests as a gradient oracle);
// squared loss for the identity link.
double glm_loss(const Eigen::Ref<const Eigen::MatrixXd>& X,
                const Eigen::Ref<const Eigen::VectorXd>& y, const LinkSpec& link,
                const Eigen::VectorXd& beta);

// Solves the maximum-likelihood equations score(beta) = 0 by damped Newton
// iterations (IRLS). The identity link short-circuits to the normal equations.
// A 1e-8 ridge floor keeps Hessians invertible under separated logistic data;
// no norm projection is applied here.
//
// Throws RankDeficientError when the Gram matrix condition number exceeds 1e12.
// Hitting max_iter returns the best iterate seen with converged = false.
FitResult fit_mle(const GlmProblem& problem, const Eigen::VectorXd& init, double tol = 1e-10,
                  int max_iter = 100);

FitResult fit_glm(const Eigen::Ref<const Eigen::MatrixXd>& X,
                  const Eigen::Ref<const Eigen::VectorXd>& y, const LinkSpec& link,
                  const Eigen::VectorXd& init, double tol = 1e-10, int max_iter = 100);

// Projection step for an out-of-bound MLE fit: argmin over ||beta|| <= M of
// ||g(beta) - g(beta_hat)||_{A^-1} with g(beta) = sum_i x_i mu(x_i^T beta),
// solved by projected gradient descent on the squared objective with
// backtracking line search, started from the radial rescaling M beta_hat/||beta_hat||.
// Caller must ensure ||beta_hat|| > M.
Eigen::VectorXd project_beta(const Eigen::VectorXd& beta_hat, const GlmProblem& history,
                             const DesignState& design, double norm_bound);

Eigen::VectorXd project_beta(const Eigen::VectorXd& beta_hat,
                             const Eigen::Ref<const Eigen::MatrixXd>& X, const LinkSpec& link,
                             const Eigen::MatrixXd& A_inv, double norm_bound);

}  // namespace onesided
