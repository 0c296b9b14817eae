#pragma once
#include <Eigen/Dense>
#include <vector>

namespace onesided {

// Running empirical covariance A = sum x x^T of the observed covariates, with its
// inverse maintained under rank-1 updates (Sherman-Morrison, periodic refresh) and
// the uncertainty width sqrt(x^T A^-1 x) used by the adaptive decision rule.
class DesignState {
public:
    // Builds A from warm-start rows and verifies eigmin(A) >= lambda0.
    // Throws EigenFloorViolatedError if the floor fails; needs >= d+1 rows.
    static DesignState init(const Eigen::MatrixXd& rows, double lambda0);

    // A += x x^T; inverse updated in O(d^2). Every `kRefreshEvery` updates the
    // inverse is recomputed from A to bound drift.
    void rank1_update(const Eigen::VectorXd& x);

    // sqrt(max(0, x^T A^-1 x)). Quadratic forms below -1e-12 indicate state
    // corruption and throw.
    double width(const Eigen::VectorXd& x) const;

    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::MatrixXd& A_inv() const { return A_inv_; }
    int dim() const { return static_cast<int>(A_.rows()); }
    long update_count() const { return update_count_; }
    double lambda0() const { return lambda0_; }

    // Recomputes A_inv from A by factorization.
    void refresh_inverse();

    static constexpr long kRefreshEvery = 4096;

private:
    DesignState() = default;
    Eigen::MatrixXd A_;
    Eigen::MatrixXd A_inv_;
    double lambda0_ = 0.0;
    long update_count_ = 0;
};

}  // namespace onesided
