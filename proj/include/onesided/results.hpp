#pragma once
#include <string>
#include <vector>

namespace onesided {

// One row of the results CSV. run_id encodes the full grid cell as
// "<method>|c=<cutoff>|a=<alpha>|s=<seed>".
struct ResultRow {
    std::string run_id;
    std::string method;
    uint64_t seed = 0;
    long round = 0;
    double r_t = 0.0;
    double R_t = 0.0;
    long accepted = 0;
    int batch_size = 0;
};

std::string make_run_id(const std::string& method, double cutoff, double alpha, uint64_t seed);

struct RunKey {
    std::string method;
    double cutoff = 0.0;
    double alpha = 0.0;
    uint64_t seed = 0;
};
RunKey parse_run_id(const std::string& run_id);

// Fixed header `run_id,method,seed,round,r_t,R_t,accepted,batch_size`, floats
// at 6 significant digits, rows ordered by (run_id, round). Re-serializing a
// parsed file is byte-identical.
void write_results(std::vector<ResultRow> rows, const std::string& path);
std::vector<ResultRow> read_results(const std::string& path);

struct SummaryRow {
    std::string method;
    double cutoff = 0.0;
    double alpha = 0.0;   // best alpha for this (method, cutoff) cell
    double mean_RT = 0.0;
    double stderr_RT = 0.0;
    long n_seeds = 0;
};

// Per (method, cutoff): final cumulative loss averaged over seeds at the best
// alpha of the tuning grid (minimum mean R_T; ties keep the smaller alpha).
// Single-seed cells report a standard error of 0.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

// CSV with header `method,cutoff,alpha,mean_RT,stderr,n_seeds`.
void write_summary(const std::vector<SummaryRow>& rows, const std::string& path);

struct PlotRow {
    std::string method;
    long round = 0;
    double avg_loss_rate = 0.0;  // mean over seeds of R_t / t
    double stderr_rate = 0.0;
};

// Per-method average loss-rate curves at the best alpha per (method, cutoff);
// when several cutoffs are present the method label carries a "@c=<cutoff>"
// suffix so the schema stays `method,round,avg_loss_rate,stderr`.
std::vector<PlotRow> plot_series(const std::vector<ResultRow>& rows);
void write_plotdata(const std::vector<PlotRow>& rows, const std::string& path);

// %.6g formatting shared by all writers.
std::string format_float(double v);

}  // namespace onesided
