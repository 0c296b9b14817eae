#include "onesided/results.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "onesided/errors.hpp"

namespace onesided {

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string make_run_id(const std::string& method, double cutoff, double alpha, uint64_t seed) {
    std::ostringstream os;
    os << method << "|c=" << format_float(cutoff) << "|a=" << format_float(alpha)
       << "|s=" << seed;
    return os.str();
}

RunKey parse_run_id(const std::string& run_id) {
    RunKey key;
    std::stringstream ss(run_id);
    std::string part;
    bool first = true;
    while (std::getline(ss, part, '|')) {
        if (first) {
            key.method = part;
            first = false;
        } else if (part.rfind("c=", 0) == 0) {
            key.cutoff = std::stod(part.substr(2));
        } else if (part.rfind("a=", 0) == 0) {
            key.alpha = std::stod(part.substr(2));
        } else if (part.rfind("s=", 0) == 0) {
            key.seed = std::stoull(part.substr(2));
        }
    }
    if (key.method.empty()) throw ParseError("parse_run_id: malformed run id '" + run_id + "'");
    return key;
}

void write_results(std::vector<ResultRow> rows, const std::string& path) {
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.run_id != b.run_id) return a.run_id < b.run_id;
        return a.round < b.round;
    });
    std::ofstream out(path);
    if (!out) throw IoError("write_results: cannot open '" + path + "' for writing");
    out << "run_id,method,seed,round,r_t,R_t,accepted,batch_size\n";
    for (const auto& row : rows) {
        out << row.run_id << ',' << row.method << ',' << row.seed << ',' << row.round << ','
            << format_float(row.r_t) << ',' << format_float(row.R_t) << ',' << row.accepted
            << ',' << row.batch_size << '\n';
    }
    if (!out) throw IoError("write_results: write to '" + path + "' failed");
}

std::vector<ResultRow> read_results(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_results: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("read_results: '" + path + "' is empty");
    std::vector<ResultRow> rows;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8) {
            throw ParseError("read_results: line " + std::to_string(lineno) + " has " +
                             std::to_string(fields.size()) + " fields, expected 8");
        }
        ResultRow row;
        row.run_id = fields[0];
        row.method = fields[1];
        row.seed = std::stoull(fields[2]);
        row.round = std::stol(fields[3]);
        row.r_t = std::stod(fields[4]);
        row.R_t = std::stod(fields[5]);
        row.accepted = std::stol(fields[6]);
        row.batch_size = std::stoi(fields[7]);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

struct CellKey {
    std::string method;
    double cutoff;
    double alpha;
    bool operator<(const CellKey& o) const {
        if (method != o.method) return method < o.method;
        if (cutoff != o.cutoff) return cutoff < o.cutoff;
        return alpha < o.alpha;
    }
};

// Final R_T per run, grouped by grid cell.
std::map<CellKey, std::vector<double>> final_losses(const std::vector<ResultRow>& rows) {
    std::map<std::string, const ResultRow*> last_row;
    for (const auto& row : rows) {
        auto [it, inserted] = last_row.try_emplace(row.run_id, &row);
        if (!inserted && row.round > it->second->round) it->second = &row;
    }
    std::map<CellKey, std::vector<double>> cells;
    for (const auto& [run_id, row] : last_row) {
        const RunKey key = parse_run_id(run_id);
        cells[{key.method, key.cutoff, key.alpha}].push_back(row->R_t);
    }
    return cells;
}

void mean_and_se(const std::vector<double>& v, double& mean, double& se) {
    const double n = static_cast<double>(v.size());
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    if (v.size() < 2) {
        se = 0.0;
        return;
    }
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    const auto cells = final_losses(rows);

    // Best alpha per (method, cutoff); cells iterate in ascending alpha order so
    // strict < keeps the first (smallest) alpha on ties.
    std::map<std::pair<std::string, double>, SummaryRow> best;
    for (const auto& [key, losses] : cells) {
        double mean, se;
        mean_and_se(losses, mean, se);
        SummaryRow row{key.method, key.cutoff, key.alpha, mean, se,
                       static_cast<long>(losses.size())};
        const auto group = std::make_pair(key.method, key.cutoff);
        const auto it = best.find(group);
        if (it == best.end() || mean < it->second.mean_RT) best[group] = row;
    }

    std::vector<SummaryRow> out;
    out.reserve(best.size());
    for (const auto& [group, row] : best) out.push_back(row);
    return out;
}

void write_summary(const std::vector<SummaryRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_summary: cannot open '" + path + "' for writing");
    out << "method,cutoff,alpha,mean_RT,stderr,n_seeds\n";
    for (const auto& row : rows) {
        out << row.method << ',' << format_float(row.cutoff) << ',' << format_float(row.alpha)
            << ',' << format_float(row.mean_RT) << ',' << format_float(row.stderr_RT) << ','
            << row.n_seeds << '\n';
    }
}

std::vector<PlotRow> plot_series(const std::vector<ResultRow>& rows) {
    const auto cells = final_losses(rows);
    std::map<std::pair<std::string, double>, CellKey> best;
    for (const auto& [key, losses] : cells) {
        double mean, se;
        mean_and_se(losses, mean, se);
        const auto group = std::make_pair(key.method, key.cutoff);
        const auto it = best.find(group);
        if (it == best.end()) {
            best[group] = key;
        } else {
            double prev_mean, prev_se;
            mean_and_se(cells.at(it->second), prev_mean, prev_se);
            if (mean < prev_mean) best[group] = key;
        }
    }

    std::set<double> cutoffs;
    for (const auto& [group, key] : best) cutoffs.insert(group.second);
    const bool single_cutoff = cutoffs.size() <= 1;

    // R_t/t per (best cell, seed, round), then mean/se over seeds.
    std::vector<PlotRow> out;
    for (const auto& [group, cell] : best) {
        std::map<long, std::vector<double>> per_round;
        for (const auto& row : rows) {
            const RunKey key = parse_run_id(row.run_id);
            if (key.method != cell.method || key.cutoff != cell.cutoff ||
                key.alpha != cell.alpha) {
                continue;
            }
            per_round[row.round].push_back(row.R_t / static_cast<double>(row.round));
        }
        const std::string label =
            single_cutoff ? cell.method
                          : cell.method + "@c=" + format_float(cell.cutoff);
        for (const auto& [round, rates] : per_round) {
            double mean, se;
            mean_and_se(rates, mean, se);
            out.push_back({label, round, mean, se});
        }
    }
    return out;
}

void write_plotdata(const std::vector<PlotRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_plotdata: cannot open '" + path + "' for writing");
    out << "method,round,avg_loss_rate,stderr\n";
    for (const auto& row : rows) {
        out << row.method << ',' << row.round << ',' << format_float(row.avg_loss_rate) << ','
            << format_float(row.stderr_rate) << '\n';
    }
}

}  // namespace onesided
