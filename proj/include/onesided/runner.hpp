#pragma once
#include <optional>
#include <string>
#include <vector>

#include "onesided/dataset.hpp"
#include "onesided/learners.hpp"
#include "onesided/sgd.hpp"
#include "onesided/stream.hpp"

namespace onesided {

struct AlphaGrid {
    int min_exp = -6;
    int max_exp = 6;
    std::vector<double> values() const;
};

struct CutoffSpec {
    // Either explicit values or percentiles of the oracle score distribution.
    std::vector<double> values;
    std::vector<double> percentiles;
};

// Stream-side description for synthetic runs (replay runs use `dataset`).
struct SyntheticConfig {
    StreamKind kind = StreamKind::SyntheticGlm;
    int dim = 2;
    long horizon = 100;
    int batch_size = 0;              // 0 -> link default (1 identity, 100 logistic)
    double noise_phi = 1.0;
    CovariateLaw law = CovariateLaw::SphereUniform;
    double x_radius = 1.0;
    std::vector<double> beta_star;   // empty -> random unit vector * beta_star_norm
    double beta_star_norm = 1.0;
    uint64_t beta_star_seed = 17;
    double p_v = 0.1;                // theorem1 only
    double tau = 0.0;                // theorem1 only; 0 -> 1/sqrt(p_v * warm)
};

struct DatasetConfig {
    std::string path;
    DatasetSchema schema;
    double init_frac = 0.05;
    int batch_size = 0;  // 0 -> link default
};

struct LearnerDefaults {
    double norm_bound = 0.0;       // 0 -> auto
    double covariate_bound = 1.0;
    double noise_phi = 0.0;        // 0 -> auto (residual std for replay)
    double lambda0 = 0.0;          // 0 -> auto from warm design
    double delta = 0.05;
    int warm_start = 0;            // synthetic runs; 0 -> 4*(d+1)
    int refit_every = 1;
    AdaptiveBonus adaptive_bonus = AdaptiveBonus::AlphaWidth;
    // SGD extras
    double sgd_alpha_acc = 0.05;
    double sgd_noise_bound = 0.0;
    double sgd_delta = 10.0;
    double sgd_omega_radius = 1e6;
};

struct RunConfig {
    LinkSpec link;
    std::optional<SyntheticConfig> synthetic;
    std::optional<DatasetConfig> dataset;
    CutoffSpec cutoffs;
    std::vector<Method> methods;
    AlphaGrid alpha_grid;
    std::vector<uint64_t> seeds;
    LearnerDefaults learner;
    std::string out_dir = "out";
    int jobs = 1;
};

// Parses and validates a JSON config; every validation problem is listed in the
// thrown ConfigError, none of the run starts.
RunConfig load_run_config(const std::string& path);

// Derived per-cell RNG streams: adding a method or alpha never perturbs another
// cell's draw sequence.
uint64_t derive_seed(uint64_t seed, const std::string& role, const std::string& method,
                     double alpha, double cutoff);

struct ExperimentOutput {
    std::string results_path;
    std::string summary_path;
    long n_runs = 0;
};

// Executes the (method x alpha x seed x cutoff) grid, writes results.csv and
// summary.csv under config.out_dir. Cells run concurrently when jobs > 1; the
// output is merged deterministically.
ExperimentOutput run_experiment(const RunConfig& config);

// Reads a results CSV and writes the long-format loss-rate table.
void emit_plotdata(const std::string& results_path, const std::string& out_path);

}  // namespace onesided
