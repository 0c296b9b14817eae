#include "onesided/glm.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "onesided/errors.hpp"
#include "onesided/log.hpp"

namespace onesided {

namespace {
constexpr double kRidgeFloor = 1e-8;
constexpr double kCondLimit = 1e12;

void check_gram_rank(const Eigen::MatrixXd& gram) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kCondLimit) {
        throw RankDeficientError("fit_mle: Gram matrix condition " +
                                 std::to_string(lo > 0.0 ? hi / lo : std::nan("")) +
                                 " beyond 1e12, design is rank deficient");
    }
}
}  // namespace

void GlmProblem::validate() const {
    if (features.rows() != labels.size()) {
        throw DomainError("GlmProblem: features rows " + std::to_string(features.rows()) +
                          " != labels size " + std::to_string(labels.size()));
    }
    for (long i = 0; i < features.rows(); ++i) {
        const double n = features.row(i).norm();
        if (n > covariate_bound + 1e-9) {
            throw DomainError("GlmProblem: row " + std::to_string(i) + " norm " +
                              std::to_string(n) + " exceeds bound " +
                              std::to_string(covariate_bound));
        }
    }
}

Eigen::VectorXd glm_score(const Eigen::Ref<const Eigen::MatrixXd>& X,
                          const Eigen::Ref<const Eigen::VectorXd>& y, const LinkSpec& link,
                          const Eigen::VectorXd& beta) {
    Eigen::VectorXd z = X * beta;
    for (long i = 0; i < z.size(); ++i) z[i] = link_eval(link, z[i]);
    return X.transpose() * (y - z);
}

double glm_loss(const Eigen::Ref<const Eigen::MatrixXd>& X,
                const Eigen::Ref<const Eigen::VectorXd>& y, const LinkSpec& link,
                const Eigen::VectorXd& beta) {
    const Eigen::VectorXd z = X * beta;
    double loss = 0.0;
    if (link.kind == LinkKind::Identity) {
        for (long i = 0; i < z.size(); ++i) {
            const double r = z[i] - y[i];
            loss += 0.5 * r * r;
        }
        return loss;
    }
    for (long i = 0; i < z.size(); ++i) {
        // -y log mu - (1-y) log(1-mu), written against the raw score for stability:
        // log(1 + e^z) - y z.
        const double zi = z[i];
        const double log1pe = zi > 0.0 ? zi + std::log1p(std::exp(-zi)) : std::log1p(std::exp(zi));
        loss += log1pe - y[i] * zi;
    }
    return loss;
}

FitResult fit_glm(const Eigen::Ref<const Eigen::MatrixXd>& X,
                  const Eigen::Ref<const Eigen::VectorXd>& y, const LinkSpec& link,
                  const Eigen::VectorXd& init, double tol, int max_iter) {
    const long d = X.cols();
    Eigen::MatrixXd gram = X.transpose() * X;
    check_gram_rank(gram);

    FitResult out;
    if (link.kind == LinkKind::Identity) {
        out.beta = gram.ldlt().solve(X.transpose() * y);
        out.converged = true;
        out.iterations = 1;
        out.score_norm = glm_score(X, y, link, out.beta).norm();
        return out;
    }

    Eigen::VectorXd beta = init.size() == d ? init : Eigen::VectorXd::Zero(d);
    Eigen::VectorXd score = glm_score(X, y, link, beta);
    double score_norm = score.norm();
    Eigen::VectorXd best_beta = beta;
    double best_norm = score_norm;

    int iter = 0;
    for (; iter < max_iter && score_norm > tol; ++iter) {
        Eigen::VectorXd z = X * beta;
        Eigen::VectorXd w(z.size());
        for (long i = 0; i < z.size(); ++i) w[i] = link_deriv(link, z[i]);
        Eigen::MatrixXd hess = X.transpose() * w.asDiagonal() * X;
        hess.diagonal().array() += kRidgeFloor;

        const Eigen::VectorXd step = hess.ldlt().solve(score);

        // Damping: halve the step while the score norm fails to decrease.
        double lambda = 1.0;
        Eigen::VectorXd cand;
        Eigen::VectorXd cand_score;
        double cand_norm = score_norm;
        while (lambda > 1e-12) {
            cand = beta + lambda * step;
            cand_score = glm_score(X, y, link, cand);
            cand_norm = cand_score.norm();
            if (cand_norm < score_norm) break;
            lambda *= 0.5;
        }
        if (!(cand_norm < score_norm)) break;  // no progress possible

        beta = cand;
        score = cand_score;
        score_norm = cand_norm;
        if (score_norm < best_norm) {
            best_norm = score_norm;
            best_beta = beta;
        }
    }

    out.beta = best_norm <= score_norm ? best_beta : beta;
    out.score_norm = std::min(best_norm, score_norm);
    out.iterations = iter;
    out.converged = out.score_norm <= tol;
    return out;
}

FitResult fit_mle(const GlmProblem& problem, const Eigen::VectorXd& init, double tol,
                  int max_iter) {
    return fit_glm(problem.features, problem.labels, problem.link, init, tol, max_iter);
}

Eigen::VectorXd project_beta(const Eigen::VectorXd& beta_hat,
                             const Eigen::Ref<const Eigen::MatrixXd>& X, const LinkSpec& link,
                             const Eigen::MatrixXd& A_inv, double norm_bound) {
    assert(beta_hat.norm() >= norm_bound - 1e-12);
    const long d = beta_hat.size();

    const auto g = [&](const Eigen::VectorXd& beta) {
        Eigen::VectorXd z = X * beta;
        for (long i = 0; i < z.size(); ++i) z[i] = link_eval(link, z[i]);
        return Eigen::VectorXd(X.transpose() * z);
    };
    const Eigen::VectorXd g_hat = g(beta_hat);
    const auto objective = [&](const Eigen::VectorXd& beta) {
        const Eigen::VectorXd r = g(beta) - g_hat;
        return r.dot(A_inv * r);
    };
    const auto project = [&](Eigen::VectorXd beta) {
        const double n = beta.norm();
        if (n > norm_bound) beta *= norm_bound / n;
        return beta;
    };

    Eigen::VectorXd beta = beta_hat * (norm_bound / beta_hat.norm());
    double f = objective(beta);

    for (int iter = 0; iter < 200; ++iter) {
        Eigen::VectorXd z = X * beta;
        Eigen::VectorXd w(z.size());
        for (long i = 0; i < z.size(); ++i) w[i] = link_deriv(link, z[i]);
        const Eigen::MatrixXd jac = X.transpose() * w.asDiagonal() * X;  // symmetric
        const Eigen::VectorXd r = g(beta) - g_hat;
        const Eigen::VectorXd grad = 2.0 * (jac * (A_inv * r));

        double step = 1.0;
        Eigen::VectorXd cand;
        double f_cand = f;
        bool improved = false;
        while (step > 1e-14) {
            cand = project(beta - step * grad);
            f_cand = objective(cand);
            if (f_cand < f) {
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;

        const double rel_change = (f - f_cand) / std::max(1e-300, f);
        beta = cand;
        f = f_cand;
        if (rel_change < 1e-10) break;
        (void)d;
    }
    return beta;
}

Eigen::VectorXd project_beta(const Eigen::VectorXd& beta_hat, const GlmProblem& history,
                             const DesignState& design, double norm_bound) {
    return project_beta(beta_hat, history.features, history.link, design.A_inv(), norm_bound);
}

}  // namespace onesided
