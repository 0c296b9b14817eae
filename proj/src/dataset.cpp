#include "onesided/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "onesided/errors.hpp"
#include "onesided/log.hpp"

namespace onesided {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (char ch : line) {
        if (ch == '"') {
            in_quotes = !in_quotes;
        } else if (ch == ',' && !in_quotes) {
            fields.push_back(field);
            field.clear();
        } else {
            field.push_back(ch);
        }
    }
    fields.push_back(field);
    for (auto& f : fields) {
        const auto b = f.find_first_not_of(" \t\r");
        const auto e = f.find_last_not_of(" \t\r");
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return fields;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?" || cell == "NA"; }

double parse_number(const std::string& cell, long row, const std::string& column) {
    try {
        size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError("row " + std::to_string(row) + ", column '" + column +
                         "': cannot parse '" + cell + "' as a number");
    }
}

}  // namespace

std::tuple<Eigen::MatrixXd, Eigen::VectorXd, IngestReport> ingest_csv(
    const std::string& path, const DatasetSchema& schema) {
    std::ifstream in(path);
    if (!in) throw IoError("ingest_csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ParseError("ingest_csv: '" + path + "' is empty");
    const std::vector<std::string> header = split_csv_line(line);

    std::map<std::string, int> col_index;
    for (size_t i = 0; i < header.size(); ++i) col_index[header[i]] = static_cast<int>(i);

    const auto require_column = [&](const std::string& name) {
        const auto it = col_index.find(name);
        if (it == col_index.end()) {
            throw SchemaMismatchError("ingest_csv: column '" + name + "' not found in '" + path +
                                      "'");
        }
        return it->second;
    };

    std::vector<int> feature_idx;
    for (const auto& col : schema.features) feature_idx.push_back(require_column(col.name));
    const int label_idx = require_column(schema.label_column);

    IngestReport report;
    std::vector<std::vector<std::string>> rows;
    long file_row = 1;
    while (std::getline(in, line)) {
        ++file_row;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError("row " + std::to_string(file_row) + ": has " +
                             std::to_string(fields.size()) + " fields, header has " +
                             std::to_string(header.size()));
        }
        ++report.rows_read;
        bool missing = is_missing(fields[label_idx]);
        for (int idx : feature_idx) missing = missing || is_missing(fields[idx]);
        if (missing) {
            ++report.rows_dropped;
            continue;
        }
        rows.push_back(std::move(fields));
    }
    const long n = static_cast<long>(rows.size());
    if (n == 0) throw ParseError("ingest_csv: no usable rows in '" + path + "'");

    // Collect category values per categorical column, sorted for determinism.
    std::vector<std::vector<std::string>> categories(schema.features.size());
    for (size_t c = 0; c < schema.features.size(); ++c) {
        if (!schema.features[c].categorical) continue;
        std::set<std::string> values;
        for (const auto& row : rows) values.insert(row[feature_idx[c]]);
        categories[c].assign(values.begin(), values.end());
        if (schema.one_hot_drop_first && categories[c].size() > 1) {
            categories[c].erase(categories[c].begin());
        }
    }

    // Column layout: numerics and one-hot blocks in schema order, then intercept.
    std::vector<std::string> out_names;
    for (size_t c = 0; c < schema.features.size(); ++c) {
        if (schema.features[c].categorical) {
            for (const auto& v : categories[c]) {
                out_names.push_back(schema.features[c].name + "=" + v);
            }
        } else {
            out_names.push_back(schema.features[c].name);
        }
    }

    Eigen::MatrixXd X(n, static_cast<long>(out_names.size()));
    Eigen::VectorXd y(n);
    for (long i = 0; i < n; ++i) {
        long out_col = 0;
        for (size_t c = 0; c < schema.features.size(); ++c) {
            const std::string& cell = rows[i][feature_idx[c]];
            if (schema.features[c].categorical) {
                for (const auto& v : categories[c]) X(i, out_col++) = cell == v ? 1.0 : 0.0;
            } else {
                X(i, out_col++) = parse_number(cell, i + 2, schema.features[c].name);
            }
        }
        const std::string& label = rows[i][label_idx];
        y[i] = schema.label_positive.empty() ? parse_number(label, i + 2, schema.label_column)
                                             : (label == schema.label_positive ? 1.0 : 0.0);
    }

    // Standardize numeric columns (population std); drop constants.
    std::vector<long> keep;
    {
        long out_col = 0;
        for (size_t c = 0; c < schema.features.size(); ++c) {
            if (schema.features[c].categorical) {
                for (size_t v = 0; v < categories[c].size(); ++v) keep.push_back(out_col++);
                continue;
            }
            const double mean = X.col(out_col).mean();
            const double var = (X.col(out_col).array() - mean).square().mean();
            const double sd = std::sqrt(var);
            report.numeric_stats.push_back({schema.features[c].name, mean, sd});
            if (sd <= 1e-12) {
                report.dropped_columns.push_back(schema.features[c].name);
                log_info("ingest_csv: dropping constant column '", schema.features[c].name, "'");
                ++out_col;
                continue;
            }
            X.col(out_col) = (X.col(out_col).array() - mean) / sd;
            keep.push_back(out_col++);
        }
    }

    Eigen::MatrixXd Xk(n, static_cast<long>(keep.size()) + 1);
    std::vector<std::string> kept_names;
    for (size_t j = 0; j < keep.size(); ++j) {
        Xk.col(static_cast<long>(j)) = X.col(keep[j]);
        kept_names.push_back(out_names[static_cast<size_t>(keep[j])]);
    }
    Xk.col(Xk.cols() - 1).setOnes();
    kept_names.push_back("(intercept)");
    report.encoded_columns = std::move(kept_names);

    double max_norm = 0.0;
    for (long i = 0; i < n; ++i) max_norm = std::max(max_norm, Xk.row(i).norm());
    report.rescale_factor = schema.row_norm_bound / max_norm;
    Xk *= report.rescale_factor;

    return {std::move(Xk), std::move(y), std::move(report)};
}

}  // namespace onesided
