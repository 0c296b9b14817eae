#pragma once
#include <Eigen/Dense>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "onesided/link.hpp"
#include "onesided/oracle.hpp"

namespace onesided {

enum class StreamKind { SyntheticGlm, TheoremOneAdversarial, CsvReplay };
enum class CovariateLaw { SphereUniform, BallUniform };

// Declarative description of a synthetic data stream; open_stream() instantiates it.
struct StreamSpec {
    StreamKind kind = StreamKind::SyntheticGlm;
    int dim = 2;
    long horizon = 100;   // number of rounds T
    int batch_size = 1;   // N
    double noise_phi = 1.0;
    uint64_t seed = 0;
    LinkSpec link;
    double cutoff = 0.5;
    Eigen::VectorXd beta_star;

    // SyntheticGlm
    CovariateLaw law = CovariateLaw::SphereUniform;
    double x_radius = 1.0;

    // TheoremOneAdversarial
    double p_v = 0.1;
    double tau = 0.0;
};

// A seeded source of covariate batches whose labels stay hidden until revealed.
// Learners receive the covariates plus a reveal callback; only the ledger sees
// the oracle.
class Stream {
public:
    virtual ~Stream() = default;
    virtual int dim() const = 0;
    virtual long total_rounds() const = 0;
    virtual const Oracle& oracle() const = 0;

    // Draws the warm-start sample; call once, before the first round.
    virtual std::pair<Eigen::MatrixXd, Eigen::VectorXd> draw_warm(long n) = 0;

    // Advances to the next round; false once the stream is exhausted.
    virtual bool next_round() = 0;
    virtual const Eigen::MatrixXd& covariates() const = 0;
    virtual double reveal(int item) = 0;
};

std::unique_ptr<Stream> open_stream(const StreamSpec& spec);

// Hard instance for the greedy learner: mass p_v on v = e_1 whose oracle score
// sits tau above the cutoff, remaining mass uniform on the orthogonal directions
// e_2..e_d with scores 0.3 above the cutoff; label noise is unit Gaussian.
StreamSpec make_theorem1_stream(int d, double tau, double p_v, uint64_t seed,
                                const LinkSpec& link, double cutoff, long horizon = 1000,
                                int batch_size = 1);

// Percentile cutoff: midpoint between the floor(p*n)-th and next order statistic
// (1-indexed); degenerates to the minimum when floor(p*n) = 0.
double compute_cutoff(std::vector<double> scores, double percentile);

// Stratified warm/online split for dataset replay.
struct ReplaySplit {
    Eigen::MatrixXd warm_X;
    Eigen::VectorXd warm_y;
    std::vector<long> online_order;  // row indices served after the warm start
};

// Splits rows into a warm-start set of ~init_frac of the data, stratified on the
// binarized oracle label, and a shuffled online remainder. Throws
// InsufficientWarmStartError when the warm set is smaller than d+1 or rank
// deficient.
ReplaySplit replay_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const std::vector<bool>& above_cutoff, uint64_t split_seed,
                         double init_frac);

// Stream serving pre-split dataset rows in batches of N; the last partial batch
// is served as-is.
std::unique_ptr<Stream> make_replay_stream(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                           const Oracle& oracle, ReplaySplit split,
                                           int batch_size);

}  // namespace onesided
