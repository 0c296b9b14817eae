#include "onesided/stream.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "onesided/errors.hpp"

namespace onesided {

namespace {

class SyntheticStream final : public Stream {
public:
    explicit SyntheticStream(const StreamSpec& spec)
        : spec_(spec), rng_(spec.seed), normal_(0.0, 1.0), unif_(0.0, 1.0) {
        oracle_.beta_star = spec.beta_star;
        oracle_.link = spec.link;
        oracle_.cutoff = spec.cutoff;
        batch_.resize(spec.batch_size, spec.dim);
        labels_.resize(spec.batch_size);
    }

    int dim() const override { return spec_.dim; }
    long total_rounds() const override { return spec_.horizon; }
    const Oracle& oracle() const override { return oracle_; }

    std::pair<Eigen::MatrixXd, Eigen::VectorXd> draw_warm(long n) override {
        Eigen::MatrixXd X(n, spec_.dim);
        Eigen::VectorXd y(n);
        for (long i = 0; i < n; ++i) {
            const Eigen::VectorXd x = draw_x();
            X.row(i) = x.transpose();
            y[i] = draw_label(x);
        }
        return {std::move(X), std::move(y)};
    }

    bool next_round() override {
        if (round_ >= spec_.horizon) return false;
        ++round_;
        for (int j = 0; j < spec_.batch_size; ++j) {
            const Eigen::VectorXd x = draw_x();
            batch_.row(j) = x.transpose();
            labels_[j] = draw_label(x);
        }
        return true;
    }

    const Eigen::MatrixXd& covariates() const override { return batch_; }
    double reveal(int item) override { return labels_[item]; }

private:
    Eigen::VectorXd draw_x() {
        Eigen::VectorXd g(spec_.dim);
        for (int k = 0; k < spec_.dim; ++k) g[k] = normal_(rng_);
        double norm = g.norm();
        if (norm == 0.0) {
            g.setZero();
            g[0] = 1.0;
            norm = 1.0;
        }
        g /= norm;
        if (spec_.law == CovariateLaw::BallUniform) {
            const double u = unif_(rng_);
            g *= std::pow(u, 1.0 / spec_.dim);
        }
        return g * spec_.x_radius;
    }

    double draw_label(const Eigen::VectorXd& x) {
        return oracle_.score(x) + spec_.noise_phi * normal_(rng_);
    }

    StreamSpec spec_;
    Oracle oracle_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> unif_;
    Eigen::MatrixXd batch_;
    std::vector<double> labels_;
    long round_ = 0;
};

class TheoremOneStream final : public Stream {
public:
    explicit TheoremOneStream(const StreamSpec& spec)
        : spec_(spec), rng_(spec.seed), normal_(0.0, 1.0), unif_(0.0, 1.0) {
        oracle_.beta_star = spec.beta_star;
        oracle_.link = spec.link;
        oracle_.cutoff = spec.cutoff;
        batch_.resize(spec.batch_size, spec.dim);
        labels_.resize(spec.batch_size);
    }

    int dim() const override { return spec_.dim; }
    long total_rounds() const override { return spec_.horizon; }
    const Oracle& oracle() const override { return oracle_; }

    std::pair<Eigen::MatrixXd, Eigen::VectorXd> draw_warm(long n) override {
        Eigen::MatrixXd X(n, spec_.dim);
        Eigen::VectorXd y(n);
        for (long i = 0; i < n; ++i) {
            const Eigen::VectorXd x = draw_x();
            X.row(i) = x.transpose();
            y[i] = draw_label(x);
        }
        return {std::move(X), std::move(y)};
    }

    bool next_round() override {
        if (round_ >= spec_.horizon) return false;
        ++round_;
        for (int j = 0; j < spec_.batch_size; ++j) {
            const Eigen::VectorXd x = draw_x();
            batch_.row(j) = x.transpose();
            labels_[j] = draw_label(x);
        }
        return true;
    }

    const Eigen::MatrixXd& covariates() const override { return batch_; }
    double reveal(int item) override { return labels_[item]; }

private:
    Eigen::VectorXd draw_x() {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(spec_.dim);
        if (unif_(rng_) < spec_.p_v) {
            x[0] = 1.0;
        } else {
            std::uniform_int_distribution<int> pick(1, spec_.dim - 1);
            x[pick(rng_)] = 1.0;
        }
        return x;
    }

    double draw_label(const Eigen::VectorXd& x) {
        return oracle_.score(x) + spec_.noise_phi * normal_(rng_);
    }

    StreamSpec spec_;
    Oracle oracle_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> unif_;
    Eigen::MatrixXd batch_;
    std::vector<double> labels_;
    long round_ = 0;
};

class ReplayStream final : public Stream {
public:
    ReplayStream(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Oracle& oracle,
                 ReplaySplit split, int batch_size)
        : X_(X), y_(y), oracle_(oracle), split_(std::move(split)), batch_size_(batch_size) {
        const long n_online = static_cast<long>(split_.online_order.size());
        total_rounds_ = (n_online + batch_size_ - 1) / batch_size_;
    }

    int dim() const override { return static_cast<int>(X_.cols()); }
    long total_rounds() const override { return total_rounds_; }
    const Oracle& oracle() const override { return oracle_; }

    std::pair<Eigen::MatrixXd, Eigen::VectorXd> draw_warm(long) override {
        return {split_.warm_X, split_.warm_y};
    }

    bool next_round() override {
        const long n_online = static_cast<long>(split_.online_order.size());
        if (cursor_ >= n_online) return false;
        const long take = std::min<long>(batch_size_, n_online - cursor_);
        batch_.resize(take, X_.cols());
        labels_.assign(take, 0.0);
        for (long j = 0; j < take; ++j) {
            const long row = split_.online_order[cursor_ + j];
            batch_.row(j) = X_.row(row);
            labels_[j] = y_[row];
        }
        cursor_ += take;
        return true;
    }

    const Eigen::MatrixXd& covariates() const override { return batch_; }
    double reveal(int item) override { return labels_[item]; }

private:
    Eigen::MatrixXd X_;
    Eigen::VectorXd y_;
    Oracle oracle_;
    ReplaySplit split_;
    int batch_size_;
    long total_rounds_ = 0;
    long cursor_ = 0;
    Eigen::MatrixXd batch_;
    std::vector<double> labels_;
};

}  // namespace

std::unique_ptr<Stream> open_stream(const StreamSpec& spec) {
    switch (spec.kind) {
        case StreamKind::SyntheticGlm:
            return std::make_unique<SyntheticStream>(spec);
        case StreamKind::TheoremOneAdversarial:
            return std::make_unique<TheoremOneStream>(spec);
        case StreamKind::CsvReplay:
            throw DomainError("open_stream: CsvReplay streams are built via make_replay_stream");
    }
    return nullptr;
}

StreamSpec make_theorem1_stream(int d, double tau, double p_v, uint64_t seed,
                                const LinkSpec& link, double cutoff, long horizon,
                                int batch_size) {
    if (d < 2) throw DomainError("make_theorem1_stream: need d >= 2");
    if (!(p_v > 0.0 && p_v < 1.0) && p_v != 1.0) {
        throw DomainError("make_theorem1_stream: p_v must lie in (0,1]");
    }
    StreamSpec spec;
    spec.kind = StreamKind::TheoremOneAdversarial;
    spec.dim = d;
    spec.horizon = horizon;
    spec.batch_size = batch_size;
    spec.noise_phi = 1.0;
    spec.seed = seed;
    spec.link = link;
    spec.cutoff = cutoff;
    spec.p_v = p_v;
    spec.tau = tau;
    spec.beta_star = Eigen::VectorXd::Zero(d);
    spec.beta_star[0] = link_inverse(link, cutoff + tau);
    const double far_side = link_inverse(link, cutoff + 0.3);
    for (int j = 1; j < d; ++j) spec.beta_star[j] = far_side;
    return spec;
}

double compute_cutoff(std::vector<double> scores, double percentile) {
    if (scores.empty()) throw DomainError("compute_cutoff: empty scores");
    std::sort(scores.begin(), scores.end());
    const long n = static_cast<long>(scores.size());
    const long k = static_cast<long>(std::floor(percentile * static_cast<double>(n)));
    if (k <= 0) return scores.front();
    if (k >= n) return scores.back();
    return 0.5 * (scores[k - 1] + scores[k]);
}

ReplaySplit replay_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const std::vector<bool>& above_cutoff, uint64_t split_seed,
                         double init_frac) {
    const long n = X.rows();
    const long d = X.cols();
    std::vector<long> above, below;
    for (long i = 0; i < n; ++i) (above_cutoff[i] ? above : below).push_back(i);

    std::mt19937_64 rng(split_seed);
    std::shuffle(above.begin(), above.end(), rng);
    std::shuffle(below.begin(), below.end(), rng);

    const long k_total = std::lround(init_frac * static_cast<double>(n));
    long k_above = std::lround(init_frac * static_cast<double>(above.size()));
    k_above = std::min<long>(k_above, static_cast<long>(above.size()));
    long k_below = std::min<long>(k_total - k_above, static_cast<long>(below.size()));
    if (k_below < 0) k_below = 0;

    if (k_above + k_below < d + 1) {
        throw InsufficientWarmStartError("replay_split: warm set of " +
                                         std::to_string(k_above + k_below) +
                                         " rows is below d+1 = " + std::to_string(d + 1));
    }

    ReplaySplit split;
    split.warm_X.resize(k_above + k_below, d);
    split.warm_y.resize(k_above + k_below);
    long w = 0;
    for (long i = 0; i < k_above; ++i, ++w) {
        split.warm_X.row(w) = X.row(above[i]);
        split.warm_y[w] = y[above[i]];
    }
    for (long i = 0; i < k_below; ++i, ++w) {
        split.warm_X.row(w) = X.row(below[i]);
        split.warm_y[w] = y[below[i]];
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        split.warm_X.transpose() * split.warm_X, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 1e-12) {
        throw InsufficientWarmStartError("replay_split: warm design is rank deficient");
    }

    for (long i = k_above; i < static_cast<long>(above.size()); ++i) {
        split.online_order.push_back(above[i]);
    }
    for (long i = k_below; i < static_cast<long>(below.size()); ++i) {
        split.online_order.push_back(below[i]);
    }
    std::shuffle(split.online_order.begin(), split.online_order.end(), rng);
    return split;
}

std::unique_ptr<Stream> make_replay_stream(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                           const Oracle& oracle, ReplaySplit split,
                                           int batch_size) {
    return std::make_unique<ReplayStream>(X, y, oracle, std::move(split), batch_size);
}

}  // namespace onesided
