#include "onesided/design.hpp"

#include <stdexcept>
#include <string>

#include "onesided/errors.hpp"

namespace onesided {

DesignState DesignState::init(const Eigen::MatrixXd& rows, double lambda0) {
    const long n = rows.rows();
    const long d = rows.cols();
    if (n < d + 1) {
        throw EigenFloorViolatedError("init_design: need at least d+1 = " +
                                      std::to_string(d + 1) + " rows, got " + std::to_string(n));
    }
    DesignState s;
    s.A_ = rows.transpose() * rows;
    s.A_ = 0.5 * (s.A_ + s.A_.transpose().eval());
    s.lambda0_ = lambda0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.A_, Eigen::EigenvaluesOnly);
    const double eigmin = eig.eigenvalues().minCoeff();
    if (eigmin < lambda0 - 1e-9 * std::max(1.0, lambda0)) {
        throw EigenFloorViolatedError("init_design: smallest eigenvalue " +
                                      std::to_string(eigmin) + " below floor " +
                                      std::to_string(lambda0));
    }
    s.A_inv_ = s.A_.llt().solve(Eigen::MatrixXd::Identity(d, d));
    return s;
}

void DesignState::rank1_update(const Eigen::VectorXd& x) {
    A_.noalias() += x * x.transpose();
    A_ = 0.5 * (A_ + A_.transpose().eval());

    const Eigen::VectorXd u = A_inv_ * x;
    const double denom = 1.0 + x.dot(u);
    A_inv_.noalias() -= (u * u.transpose()) / denom;
    A_inv_ = 0.5 * (A_inv_ + A_inv_.transpose().eval());

    ++update_count_;
    if (update_count_ % kRefreshEvery == 0) {
        refresh_inverse();
    }
}

void DesignState::refresh_inverse() {
    A_inv_ = A_.llt().solve(Eigen::MatrixXd::Identity(A_.rows(), A_.cols()));
}

double DesignState::width(const Eigen::VectorXd& x) const {
    const double q = x.dot(A_inv_ * x);
    if (q < -1e-12) {
        throw std::logic_error("DesignState::width: negative quadratic form " +
                               std::to_string(q) + ", inverse state corrupted");
    }
    return std::sqrt(std::max(0.0, q));
}

}  // namespace onesided
