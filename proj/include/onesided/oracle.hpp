#pragma once
#include <Eigen/Dense>
#include <vector>

#include "onesided/link.hpp"

namespace onesided {

// Bayes-optimal reference: accepts x exactly when mu(x^T beta_star) > cutoff.
// For replayed datasets beta_star is the full-dataset fit; for synthetic streams
// it is the generating parameter.
struct Oracle {
    Eigen::VectorXd beta_star;
    LinkSpec link;
    double cutoff = 0.5;

    double score(const Eigen::Ref<const Eigen::VectorXd>& x) const {
        return link_eval(link, x.dot(beta_star));
    }
    bool accepts(const Eigen::Ref<const Eigen::VectorXd>& x) const { return score(x) > cutoff; }
};

// One-sided loss of a batch of accept/reject actions against the oracle rule:
// sum_i |mu(x_i^T beta*) - c| * 1{ 1{mu(x_i^T beta*) > c} != a_i }.
inline double one_sided_loss(const Oracle& oracle, const Eigen::Ref<const Eigen::MatrixXd>& batch,
                             const std::vector<bool>& actions) {
    double total = 0.0;
    for (long i = 0; i < batch.rows(); ++i) {
        const double s = oracle.score(batch.row(i).transpose());
        const bool oracle_accepts = s > oracle.cutoff;
        if (oracle_accepts != actions[static_cast<size_t>(i)]) total += std::abs(s - oracle.cutoff);
    }
    return total;
}

struct RoundRecord {
    double r = 0.0;        // instantaneous one-sided loss of the round
    double R = 0.0;        // running cumulative loss
    int accepted = 0;
    int false_accepts = 0; // learner accepted, oracle rejects
    int false_rejects = 0; // learner rejected, oracle accepts
    int batch_size = 0;
};

// Per-round loss bookkeeping; R_t is the exact prefix sum of r_s.
class LossLedger {
public:
    const RoundRecord& record_round(const Oracle& oracle,
                                    const Eigen::Ref<const Eigen::MatrixXd>& batch,
                                    const std::vector<bool>& actions) {
        RoundRecord rec;
        rec.batch_size = static_cast<int>(batch.rows());
        for (long i = 0; i < batch.rows(); ++i) {
            const double s = oracle.score(batch.row(i).transpose());
            const bool oracle_accepts = s > oracle.cutoff;
            const bool accepted = actions[static_cast<size_t>(i)];
            if (accepted) ++rec.accepted;
            if (oracle_accepts != accepted) {
                rec.r += std::abs(s - oracle.cutoff);
                if (accepted) ++rec.false_accepts;
                else ++rec.false_rejects;
            }
        }
        cumulative_ += rec.r;
        rec.R = cumulative_;
        rounds_.push_back(rec);
        return rounds_.back();
    }

    double cumulative() const { return cumulative_; }
    const std::vector<RoundRecord>& rounds() const { return rounds_; }
    long size() const { return static_cast<long>(rounds_.size()); }

private:
    std::vector<RoundRecord> rounds_;
    double cumulative_ = 0.0;
};

}  // namespace onesided
