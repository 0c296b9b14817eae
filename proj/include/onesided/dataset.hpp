#pragma once
#include <Eigen/Dense>
#include <string>
#include <tuple>
#include <vector>

namespace onesided {

struct ColumnSpec {
    std::string name;
    bool categorical = false;
};

struct DatasetSchema {
    std::vector<ColumnSpec> features;
    std::string label_column;
    std::string label_positive;   // empty -> numeric label parsed as-is
    double row_norm_bound = 1.0;  // B; rows are rescaled so the max norm hits this
    // Drop the first (sorted) category of each one-hot block. Off by default;
    // needed when an intercept would otherwise make the design collinear.
    bool one_hot_drop_first = false;
};

struct ColumnStat {
    std::string name;
    double mean = 0.0;
    double stddev = 0.0;
};

struct IngestReport {
    long rows_read = 0;
    long rows_dropped = 0;  // rows with missing values
    std::vector<std::string> dropped_columns;  // constant numeric columns
    std::vector<ColumnStat> numeric_stats;     // pre-standardization stats
    std::vector<std::string> encoded_columns;  // final column order incl. intercept
    double rescale_factor = 1.0;
};

// Loads a headered CSV, drops rows with missing values, one-hot encodes
// categorical columns (categories in sorted order), standardizes numeric
// columns to zero mean / unit variance (population convention; constant columns
// dropped), appends an intercept column, then rescales all rows by a common
// factor so the max row norm equals row_norm_bound.
//
// Throws SchemaMismatchError when a named column is absent and ParseError (with
// row and column in the message) on malformed numeric cells.
std::tuple<Eigen::MatrixXd, Eigen::VectorXd, IngestReport> ingest_csv(const std::string& path,
                                                                      const DatasetSchema& schema);

}  // namespace onesided
