#include "onesided/runner.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "onesided/errors.hpp"
#include "onesided/log.hpp"
#include "onesided/oracle.hpp"
#include "onesided/passive.hpp"
#include "onesided/results.hpp"

namespace onesided {

namespace {

using nlohmann::json;

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct CutoffCase {
    double label = 0.0;  // percentile when percentile-driven, else the raw value
    double value = 0.0;  // the cutoff c actually used
};

struct Cell {
    Method method;
    double alpha = 0.0;
    uint64_t seed = 0;
    CutoffCase cutoff;
};

// Environment shared by every grid cell.
struct EnvBase {
    LinkSpec link;
    bool replay = false;

    // replay
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    Eigen::VectorXd oracle_scores;  // mu(x^T beta*) on all rows
    Eigen::VectorXd beta_star;
    double phi_auto = 1.0;
    double init_frac = 0.05;
    int batch_size = 1;

    // synthetic
    SyntheticConfig syn;

    std::vector<CutoffCase> cutoffs;
};

// Full-dataset reference fit, tolerant of collinear encodings the strict MLE
// solver rejects: least squares via SVD for the identity link, ridged IRLS for
// the logistic one.
Eigen::VectorXd fit_reference(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              const LinkSpec& link) {
    if (link.kind == LinkKind::Identity) {
        return X.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
    }
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
    for (int iter = 0; iter < 100; ++iter) {
        Eigen::VectorXd z = X * beta;
        Eigen::VectorXd mu(z.size()), w(z.size());
        for (long i = 0; i < z.size(); ++i) {
            mu[i] = link_eval(link, z[i]);
            w[i] = link_deriv(link, z[i]);
        }
        const Eigen::VectorXd score = X.transpose() * (y - mu);
        if (score.norm() <= 1e-8) break;
        Eigen::MatrixXd hess = X.transpose() * w.asDiagonal() * X;
        hess.diagonal().array() += 1e-6;
        beta += hess.ldlt().solve(score);
    }
    return beta;
}

Eigen::VectorXd resolve_beta_star(const SyntheticConfig& syn, int dim) {
    Eigen::VectorXd beta(dim);
    if (!syn.beta_star.empty()) {
        for (int i = 0; i < dim; ++i) beta[i] = syn.beta_star[static_cast<size_t>(i)];
        return beta;
    }
    std::mt19937_64 rng(syn.beta_star_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < dim; ++i) beta[i] = normal(rng);
    beta *= syn.beta_star_norm / beta.norm();
    return beta;
}

int default_batch(const LinkSpec& link) { return link.kind == LinkKind::Identity ? 1 : 100; }

double eigmin_of_gram(const Eigen::MatrixXd& rows) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rows.transpose() * rows,
                                                       Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

std::vector<ResultRow> run_cell(const EnvBase& env, const RunConfig& cfg, const Cell& cell) {
    const double c = cell.cutoff.value;
    const std::string method = method_name(cell.method);
    const std::string run_id = make_run_id(method, cell.cutoff.label, cell.alpha, cell.seed);

    // Streams are seeded by (seed, cutoff) only, so every method and alpha in a
    // cell sees the same data realization.
    const uint64_t stream_seed = derive_seed(cell.seed, "stream", "", 0.0, cell.cutoff.label);

    std::unique_ptr<Stream> stream;
    Eigen::MatrixXd warm_X;
    Eigen::VectorXd warm_y;
    Oracle oracle;

    if (env.replay) {
        oracle.beta_star = env.beta_star;
        oracle.link = env.link;
        oracle.cutoff = c;
        std::vector<bool> above(static_cast<size_t>(env.oracle_scores.size()));
        for (long i = 0; i < env.oracle_scores.size(); ++i) above[i] = env.oracle_scores[i] > c;
        ReplaySplit split = replay_split(env.X, env.y, above, stream_seed, env.init_frac);
        warm_X = split.warm_X;
        warm_y = split.warm_y;
        stream = make_replay_stream(env.X, env.y, oracle, std::move(split), env.batch_size);
    } else {
        StreamSpec spec;
        if (env.syn.kind == StreamKind::TheoremOneAdversarial) {
            const int warm_n = cfg.learner.warm_start > 0 ? cfg.learner.warm_start
                                                          : 4 * (env.syn.dim + 1);
            const double tau = env.syn.tau > 0.0
                                   ? env.syn.tau
                                   : 1.0 / std::sqrt(env.syn.p_v * warm_n);
            spec = make_theorem1_stream(env.syn.dim, tau, env.syn.p_v, stream_seed, env.link, c,
                                        env.syn.horizon,
                                        env.syn.batch_size > 0 ? env.syn.batch_size
                                                               : default_batch(env.link));
        } else {
            spec.kind = StreamKind::SyntheticGlm;
            spec.dim = env.syn.dim;
            spec.horizon = env.syn.horizon;
            spec.batch_size =
                env.syn.batch_size > 0 ? env.syn.batch_size : default_batch(env.link);
            spec.noise_phi = env.syn.noise_phi;
            spec.seed = stream_seed;
            spec.link = env.link;
            spec.cutoff = c;
            spec.law = env.syn.law;
            spec.x_radius = env.syn.x_radius;
            spec.beta_star = resolve_beta_star(env.syn, env.syn.dim);
        }
        stream = open_stream(spec);
        oracle = stream->oracle();
        const int warm_n =
            cfg.learner.warm_start > 0 ? cfg.learner.warm_start : 4 * (env.syn.dim + 1);
        std::tie(warm_X, warm_y) = stream->draw_warm(warm_n);
    }

    const int dim = stream->dim();
    LearnerConfig lcfg;
    lcfg.link = env.link;
    lcfg.cutoff = c;
    lcfg.covariate_bound = cfg.learner.covariate_bound;
    lcfg.norm_bound = cfg.learner.norm_bound > 0.0
                          ? cfg.learner.norm_bound
                          : std::max(1.0, 1.25 * oracle.beta_star.norm());
    lcfg.noise_phi = cfg.learner.noise_phi > 0.0
                         ? cfg.learner.noise_phi
                         : (env.replay ? env.phi_auto : env.syn.noise_phi);
    lcfg.delta = cfg.learner.delta;
    lcfg.horizon = stream->total_rounds();
    lcfg.batch_size = env.replay
                          ? env.batch_size
                          : (env.syn.batch_size > 0 ? env.syn.batch_size
                                                    : default_batch(env.link));
    lcfg.warm_start = static_cast<int>(warm_X.rows());
    lcfg.alpha = cell.alpha;
    lcfg.refit_every = cfg.learner.refit_every;
    lcfg.dim = dim;
    lcfg.adaptive_bonus = cfg.learner.adaptive_bonus;
    if (cfg.learner.lambda0 > 0.0) {
        lcfg.lambda0 = cfg.learner.lambda0;
    } else {
        const double eigmin = eigmin_of_gram(warm_X);
        if (eigmin <= 1e-12) {
            throw InsufficientWarmStartError(run_id + ": warm design is rank deficient");
        }
        lcfg.lambda0 = 0.9 * eigmin;
    }

    const uint64_t learner_seed =
        derive_seed(cell.seed, "learner", method, cell.alpha, cell.cutoff.label);

    std::unique_ptr<Learner> learner;
    switch (cell.method) {
        case Method::Passive:
            learner = std::make_unique<PassiveLearner>(lcfg, PassiveParams{}, learner_seed);
            break;
        case Method::Sgd: {
            SgdState st;
            st.beta = Eigen::VectorXd::Zero(dim);
            st.dist_bound = lcfg.norm_bound;
            st.alpha_acc = cfg.learner.sgd_alpha_acc;
            st.noise_bound = cfg.learner.sgd_noise_bound;
            st.delta_sgd = cfg.learner.sgd_delta;
            st.omega_radius = cfg.learner.sgd_omega_radius;
            st.link = env.link;
            st.cutoff = c;
            learner = std::make_unique<SgdLearner>(st);
            break;
        }
        default:
            learner = make_glm_learner(cell.method, lcfg, warm_X, warm_y, learner_seed);
    }

    LossLedger ledger;
    std::vector<ResultRow> rows;
    rows.reserve(static_cast<size_t>(stream->total_rounds()));
    long round = 0;
    while (stream->next_round()) {
        ++round;
        const Eigen::MatrixXd& batch = stream->covariates();
        const auto decisions = learner->round(batch, [&](int j) { return stream->reveal(j); });
        std::vector<bool> actions(decisions.size());
        for (size_t i = 0; i < decisions.size(); ++i) actions[i] = decisions[i].accept;
        const RoundRecord& rec = ledger.record_round(oracle, batch, actions);

        ResultRow row;
        row.run_id = run_id;
        row.method = method;
        row.seed = cell.seed;
        row.round = round;
        row.r_t = rec.r;
        row.R_t = rec.R;
        row.accepted = rec.accepted;
        row.batch_size = rec.batch_size;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> validate(const RunConfig& cfg) {
    std::vector<std::string> problems;
    if (cfg.synthetic.has_value() == cfg.dataset.has_value()) {
        problems.push_back("exactly one of 'synthetic' or 'dataset' must be given");
    }
    if (cfg.methods.empty()) problems.push_back("'methods' must be nonempty");
    if (cfg.seeds.empty()) problems.push_back("'seeds' must be nonempty");
    {
        auto sorted = cfg.seeds;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            problems.push_back("'seeds' must be distinct");
        }
    }
    if (cfg.alpha_grid.min_exp > cfg.alpha_grid.max_exp) {
        problems.push_back("alpha_grid.min_exp must be <= alpha_grid.max_exp");
    }
    if (cfg.cutoffs.values.empty() && cfg.cutoffs.percentiles.empty()) {
        problems.push_back("at least one cutoff value or percentile is required");
    }
    for (double p : cfg.cutoffs.percentiles) {
        if (!(p > 0.0 && p < 1.0)) {
            problems.push_back("cutoff percentile " + format_float(p) + " outside (0,1)");
        }
    }
    if (!(cfg.learner.delta > 0.0 && cfg.learner.delta < 1.0)) {
        problems.push_back("learner.delta must lie in (0,1)");
    }
    if (cfg.learner.refit_every < 1) problems.push_back("learner.refit_every must be >= 1");
    if (cfg.jobs < 1) problems.push_back("jobs must be >= 1");
    if (cfg.synthetic) {
        const auto& syn = *cfg.synthetic;
        if (syn.dim < 1) problems.push_back("synthetic.d must be >= 1");
        if (syn.horizon < 1) problems.push_back("synthetic.T must be >= 1");
        if (syn.batch_size < 0 || syn.batch_size > 1000) {
            problems.push_back("synthetic.N must lie in [1,1000] (0 = link default)");
        }
        if (syn.kind == StreamKind::TheoremOneAdversarial && syn.dim < 2) {
            problems.push_back("theorem1 stream needs d >= 2");
        }
        if (!syn.beta_star.empty() &&
            static_cast<int>(syn.beta_star.size()) != syn.dim) {
            problems.push_back("synthetic.beta_star length must equal d");
        }
        if (syn.noise_phi < 0.0) problems.push_back("synthetic.phi must be >= 0");
    }
    if (cfg.dataset) {
        const auto& ds = *cfg.dataset;
        if (ds.path.empty()) problems.push_back("dataset.path is required");
        if (ds.schema.features.empty()) problems.push_back("dataset needs feature columns");
        if (ds.schema.label_column.empty()) problems.push_back("dataset.label is required");
        if (!(ds.init_frac > 0.0 && ds.init_frac < 1.0)) {
            problems.push_back("dataset.init_frac must lie in (0,1)");
        }
        if (ds.batch_size < 0 || ds.batch_size > 1000) {
            problems.push_back("dataset.batch_size must lie in [1,1000] (0 = link default)");
        }
    }
    return problems;
}

}  // namespace

std::vector<double> AlphaGrid::values() const {
    std::vector<double> out;
    for (int e = min_exp; e <= max_exp; ++e) out.push_back(std::pow(2.0, e));
    return out;
}

uint64_t derive_seed(uint64_t seed, const std::string& role, const std::string& method,
                     double alpha, double cutoff) {
    return fnv1a("s=" + std::to_string(seed) + "|role=" + role + "|m=" + method +
                 "|a=" + format_float(alpha) + "|c=" + format_float(cutoff));
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_run_config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("load_run_config: invalid JSON in '" + path + "': " + e.what());
    }

    std::vector<std::string> problems;
    RunConfig cfg;
    try {
        const std::string link = j.value("link", "identity");
        if (link == "identity") {
            cfg.link = LinkSpec::identity();
        } else if (link == "logistic") {
            cfg.link = LinkSpec::logistic();
        } else {
            problems.push_back("link must be 'identity' or 'logistic'");
        }

        if (j.contains("synthetic")) {
            const auto& js = j["synthetic"];
            SyntheticConfig syn;
            const std::string kind = js.value("kind", "synthetic");
            if (kind == "synthetic") {
                syn.kind = StreamKind::SyntheticGlm;
            } else if (kind == "theorem1") {
                syn.kind = StreamKind::TheoremOneAdversarial;
            } else {
                problems.push_back("synthetic.kind must be 'synthetic' or 'theorem1'");
            }
            syn.dim = js.value("d", 2);
            syn.horizon = js.value("T", 100);
            syn.batch_size = js.value("N", 0);
            syn.noise_phi = js.value("phi", 1.0);
            const std::string law = js.value("law", "sphere");
            if (law == "sphere") {
                syn.law = CovariateLaw::SphereUniform;
            } else if (law == "ball") {
                syn.law = CovariateLaw::BallUniform;
            } else {
                problems.push_back("synthetic.law must be 'sphere' or 'ball'");
            }
            syn.x_radius = js.value("x_radius", 1.0);
            if (js.contains("beta_star")) {
                syn.beta_star = js["beta_star"].get<std::vector<double>>();
            }
            syn.beta_star_norm = js.value("beta_star_norm", 1.0);
            syn.beta_star_seed = js.value("beta_star_seed", 17ULL);
            syn.p_v = js.value("p_v", 0.1);
            syn.tau = js.value("tau", 0.0);
            cfg.synthetic = syn;
        }

        if (j.contains("dataset")) {
            const auto& jd = j["dataset"];
            DatasetConfig ds;
            ds.path = jd.value("path", "");
            ds.schema.label_column = jd.value("label", "");
            ds.schema.label_positive = jd.value("positive", "");
            ds.schema.row_norm_bound = jd.value("row_norm_bound", 1.0);
            ds.schema.one_hot_drop_first = jd.value("drop_first", false);
            for (const auto& name : jd.value("numeric", std::vector<std::string>{})) {
                ds.schema.features.push_back({name, false});
            }
            for (const auto& name : jd.value("categorical", std::vector<std::string>{})) {
                ds.schema.features.push_back({name, true});
            }
            ds.init_frac = jd.value("init_frac", 0.05);
            ds.batch_size = jd.value("batch_size", 0);
            cfg.dataset = ds;
        }

        if (j.contains("cutoffs")) {
            const auto& jc = j["cutoffs"];
            cfg.cutoffs.values = jc.value("values", std::vector<double>{});
            cfg.cutoffs.percentiles = jc.value("percentiles", std::vector<double>{});
        }

        for (const auto& name : j.value("methods", std::vector<std::string>{})) {
            try {
                cfg.methods.push_back(method_from_name(name));
            } catch (const ConfigError& e) {
                problems.push_back(e.what());
            }
        }

        if (j.contains("alpha_grid")) {
            cfg.alpha_grid.min_exp = j["alpha_grid"].value("min_exp", -6);
            cfg.alpha_grid.max_exp = j["alpha_grid"].value("max_exp", 6);
        }
        cfg.seeds = j.value("seeds", std::vector<uint64_t>{});

        if (j.contains("learner")) {
            const auto& jl = j["learner"];
            cfg.learner.norm_bound = jl.value("M", 0.0);
            cfg.learner.covariate_bound = jl.value("B", 1.0);
            cfg.learner.noise_phi = jl.value("phi", 0.0);
            cfg.learner.lambda0 = jl.value("lambda0", 0.0);
            cfg.learner.delta = jl.value("delta", 0.05);
            cfg.learner.warm_start = jl.value("warm_start", 0);
            cfg.learner.refit_every = jl.value("refit_every", 1);
            const std::string bonus = jl.value("adaptive_bonus", "alpha_width");
            if (bonus == "alpha_width") {
                cfg.learner.adaptive_bonus = AdaptiveBonus::AlphaWidth;
            } else if (bonus == "theoretical") {
                cfg.learner.adaptive_bonus = AdaptiveBonus::TheoreticalRho;
            } else {
                problems.push_back("learner.adaptive_bonus must be 'alpha_width' or 'theoretical'");
            }
            cfg.learner.sgd_alpha_acc = jl.value("sgd_alpha", 0.05);
            cfg.learner.sgd_noise_bound = jl.value("sgd_noise_bound", 0.0);
            cfg.learner.sgd_delta = jl.value("sgd_delta", 10.0);
            cfg.learner.sgd_omega_radius = jl.value("sgd_omega_radius", 1e6);
        }

        cfg.out_dir = j.value("out_dir", "out");
        cfg.jobs = j.value("jobs", 1);
    } catch (const json::exception& e) {
        problems.push_back(std::string("config field error: ") + e.what());
    }

    auto more = validate(cfg);
    problems.insert(problems.end(), more.begin(), more.end());
    if (!problems.empty()) {
        std::string msg = "invalid config '" + path + "':";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ConfigError(msg);
    }
    return cfg;
}

ExperimentOutput run_experiment(const RunConfig& config) {
    {
        const auto problems = validate(config);
        if (!problems.empty()) {
            std::string msg = "invalid run config:";
            for (const auto& p : problems) msg += "\n  - " + p;
            throw ConfigError(msg);
        }
    }

    EnvBase env;
    env.link = config.link;

    if (config.dataset) {
        env.replay = true;
        const auto& ds = *config.dataset;
        auto [X, y, report] = ingest_csv(ds.path, ds.schema);
        log_info("ingested ", X.rows(), " rows x ", X.cols(), " cols from ", ds.path, " (",
                 report.rows_dropped, " dropped)");
        env.X = std::move(X);
        env.y = std::move(y);
        env.beta_star = fit_reference(env.X, env.y, env.link);
        env.oracle_scores.resize(env.X.rows());
        Eigen::VectorXd residual(env.X.rows());
        for (long i = 0; i < env.X.rows(); ++i) {
            env.oracle_scores[i] = link_eval(env.link, env.X.row(i).dot(env.beta_star));
            residual[i] = env.y[i] - env.oracle_scores[i];
        }
        const double mean_res = residual.mean();
        env.phi_auto =
            std::max(1e-6, std::sqrt((residual.array() - mean_res).square().mean()));
        env.init_frac = ds.init_frac;
        env.batch_size = ds.batch_size > 0 ? ds.batch_size : default_batch(env.link);

        std::vector<double> scores(env.oracle_scores.data(),
                                   env.oracle_scores.data() + env.oracle_scores.size());
        for (double p : config.cutoffs.percentiles) {
            env.cutoffs.push_back({p, compute_cutoff(scores, p)});
        }
        for (double v : config.cutoffs.values) env.cutoffs.push_back({v, v});
    } else {
        env.syn = *config.synthetic;
        // Percentile cutoffs for synthetic streams come from a large sample of
        // oracle scores under the covariate law.
        if (!config.cutoffs.percentiles.empty()) {
            StreamSpec probe;
            probe.kind = StreamKind::SyntheticGlm;
            probe.dim = env.syn.dim;
            probe.horizon = 1;
            probe.batch_size = 1;
            probe.noise_phi = 0.0;
            probe.seed = env.syn.beta_star_seed ^ 0x9e3779b97f4a7c15ULL;
            probe.link = env.link;
            probe.law = env.syn.law;
            probe.x_radius = env.syn.x_radius;
            probe.beta_star = resolve_beta_star(env.syn, env.syn.dim);
            auto stream = open_stream(probe);
            auto [Xs, ys] = stream->draw_warm(100000);
            std::vector<double> scores(static_cast<size_t>(Xs.rows()));
            for (long i = 0; i < Xs.rows(); ++i) {
                scores[static_cast<size_t>(i)] =
                    link_eval(env.link, Xs.row(i).dot(probe.beta_star));
            }
            for (double p : config.cutoffs.percentiles) {
                env.cutoffs.push_back({p, compute_cutoff(scores, p)});
            }
        }
        for (double v : config.cutoffs.values) env.cutoffs.push_back({v, v});
    }

    // Grid enumeration; greedy, passive and sgd carry a singleton alpha.
    std::vector<Cell> cells;
    const std::vector<double> grid = config.alpha_grid.values();
    for (const auto& cutoff : env.cutoffs) {
        for (uint64_t seed : config.seeds) {
            for (Method m : config.methods) {
                const bool singleton =
                    m == Method::Greedy || m == Method::Passive || m == Method::Sgd;
                if (singleton) {
                    cells.push_back({m, 0.0, seed, cutoff});
                } else {
                    for (double a : grid) cells.push_back({m, a, seed, cutoff});
                }
            }
        }
    }

    std::vector<std::vector<ResultRow>> outputs(cells.size());
    std::vector<std::string> failures(cells.size());
    std::atomic<size_t> next{0};
    const int jobs = std::max(1, config.jobs);
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
            try {
                outputs[i] = run_cell(env, config, cells[i]);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::string failure_msg;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (!failures[i].empty()) failure_msg += "\n  - " + failures[i];
    }
    if (!failure_msg.empty()) {
        throw std::runtime_error("run_experiment: cell failures:" + failure_msg);
    }

    std::vector<ResultRow> all_rows;
    for (auto& rows : outputs) {
        all_rows.insert(all_rows.end(), std::make_move_iterator(rows.begin()),
                        std::make_move_iterator(rows.end()));
    }

    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    ExperimentOutput out;
    out.results_path = (fs::path(config.out_dir) / "results.csv").string();
    out.summary_path = (fs::path(config.out_dir) / "summary.csv").string();
    out.n_runs = static_cast<long>(cells.size());
    write_results(std::move(all_rows), out.results_path);
    write_summary(summarize(read_results(out.results_path)), out.summary_path);
    log_info("wrote ", out.results_path, " (", out.n_runs, " runs)");
    return out;
}

void emit_plotdata(const std::string& results_path, const std::string& out_path) {
    write_plotdata(plot_series(read_results(results_path)), out_path);
}

}  // namespace onesided
