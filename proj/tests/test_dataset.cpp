#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "onesided/dataset.hpp"
#include "onesided/errors.hpp"

using namespace onesided;

namespace {

struct TempCsv {
    std::string path;
    explicit TempCsv(const std::string& contents) {
        static int counter = 0;
        path = (std::filesystem::temp_directory_path() /
                ("onesided_test_" + std::to_string(counter++) + ".csv"))
                   .string();
        std::ofstream out(path);
        out << contents;
    }
    ~TempCsv() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("two-point standardization") {
    TempCsv csv("a,b,label\n0,0,1\n2,2,0\n");
    DatasetSchema schema;
    schema.features = {{"a", false}, {"b", false}};
    schema.label_column = "label";
    schema.row_norm_bound = 10.0;
    const auto [X, y, report] = ingest_csv(csv.path, schema);
    REQUIRE(X.rows() == 2);
    REQUIRE(X.cols() == 3);  // a, b, intercept

    // before the global rescale the rows are (-1,-1,1) and (1,1,1); the rescale
    // multiplies everything by a common factor
    const double f = report.rescale_factor;
    CHECK(X(0, 0) == doctest::Approx(-f).epsilon(1e-12));
    CHECK(X(0, 1) == doctest::Approx(-f).epsilon(1e-12));
    CHECK(X(1, 0) == doctest::Approx(f).epsilon(1e-12));
    CHECK(X(0, 2) == doctest::Approx(f).epsilon(1e-12));
    CHECK(y[0] == 1.0);
    CHECK(y[1] == 0.0);
}

TEST_CASE("standardized columns have zero mean and unit variance") {
    TempCsv csv("a,b,label\n1,10,0\n2,20,1\n3,35,0\n4,41,1\n5,58,0\n");
    DatasetSchema schema;
    schema.features = {{"a", false}, {"b", false}};
    schema.label_column = "label";
    const auto [X, y, report] = ingest_csv(csv.path, schema);
    const double f = report.rescale_factor;
    for (int j = 0; j < 2; ++j) {
        const auto col = X.col(j) / f;
        CHECK(std::abs(col.mean()) <= 1e-9);
        const double var = (col.array() - col.mean()).square().mean();
        CHECK(std::abs(std::sqrt(var) - 1.0) <= 1e-9);
    }
    // row norms never exceed the bound
    for (long i = 0; i < X.rows(); ++i) CHECK(X.row(i).norm() <= schema.row_norm_bound + 1e-9);
}

TEST_CASE("one-hot encoding") {
    TempCsv csv("cat,label\na,1\nb,0\na,1\n");
    DatasetSchema schema;
    schema.features = {{"cat", true}};
    schema.label_column = "label";
    const auto [X, y, report] = ingest_csv(csv.path, schema);
    REQUIRE(X.cols() == 3);  // cat=a, cat=b, intercept
    const double f = report.rescale_factor;
    CHECK(X(0, 0) / f == doctest::Approx(1.0));
    CHECK(X(0, 1) / f == doctest::Approx(0.0));
    CHECK(X(1, 0) / f == doctest::Approx(0.0));
    CHECK(X(1, 1) / f == doctest::Approx(1.0));
    CHECK(X(2, 0) / f == doctest::Approx(1.0));
    CHECK(report.encoded_columns[0] == "cat=a");
    CHECK(report.encoded_columns[1] == "cat=b");
}

TEST_CASE("drop-first keeps one-hot blocks full rank with an intercept") {
    TempCsv csv("cat,label\na,1\nb,0\nc,1\n");
    DatasetSchema schema;
    schema.features = {{"cat", true}};
    schema.label_column = "label";
    schema.one_hot_drop_first = true;
    const auto [X, y, report] = ingest_csv(csv.path, schema);
    CHECK(X.cols() == 3);  // cat=b, cat=c, intercept
    CHECK(report.encoded_columns[0] == "cat=b");
}

TEST_CASE("categorical label via positive value") {
    TempCsv csv("a,label\n1,yes\n2,no\n3,yes\n");
    DatasetSchema schema;
    schema.features = {{"a", false}};
    schema.label_column = "label";
    schema.label_positive = "yes";
    const auto [X, y, report] = ingest_csv(csv.path, schema);
    CHECK(y[0] == 1.0);
    CHECK(y[1] == 0.0);
    CHECK(y[2] == 1.0);
}

TEST_CASE("missing rows are dropped and counted") {
    TempCsv csv("a,b,label\n1,2,1\n?,3,0\n4,,1\n5,6,0\n");
    DatasetSchema schema;
    schema.features = {{"a", false}, {"b", false}};
    schema.label_column = "label";
    const auto [X, y, report] = ingest_csv(csv.path, schema);
    CHECK(report.rows_read == 4);
    CHECK(report.rows_dropped == 2);
    CHECK(X.rows() == 2);
}

TEST_CASE("constant columns are dropped with a note") {
    TempCsv csv("a,b,label\n1,7,0\n2,7,1\n3,7,0\n");
    DatasetSchema schema;
    schema.features = {{"a", false}, {"b", false}};
    schema.label_column = "label";
    const auto [X, y, report] = ingest_csv(csv.path, schema);
    CHECK(X.cols() == 2);  // a, intercept
    REQUIRE(report.dropped_columns.size() == 1);
    CHECK(report.dropped_columns[0] == "b");
}

TEST_CASE("schema mismatch names the column") {
    TempCsv csv("a,b\n1,2\n");
    DatasetSchema schema;
    schema.features = {{"a", false}};
    schema.label_column = "income";
    try {
        (void)ingest_csv(csv.path, schema);
        FAIL("expected SchemaMismatchError");
    } catch (const SchemaMismatchError& e) {
        CHECK(std::string(e.what()).find("income") != std::string::npos);
    }
}

TEST_CASE("parse errors carry row and column") {
    TempCsv csv("a,label\n1,0\nnot_a_number,1\n");
    DatasetSchema schema;
    schema.features = {{"a", false}};
    schema.label_column = "label";
    try {
        (void)ingest_csv(csv.path, schema);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("'a'") != std::string::npos);
        CHECK(msg.find("row") != std::string::npos);
    }
}

TEST_CASE("ingest determinism") {
    TempCsv csv("a,c,label\n1,x,0\n2,y,1\n3,x,1\n");
    DatasetSchema schema;
    schema.features = {{"a", false}, {"c", true}};
    schema.label_column = "label";
    const auto [X1, y1, r1] = ingest_csv(csv.path, schema);
    const auto [X2, y2, r2] = ingest_csv(csv.path, schema);
    CHECK((X1 - X2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((y1 - y2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("missing file") {
    DatasetSchema schema;
    schema.features = {{"a", false}};
    schema.label_column = "label";
    CHECK_THROWS_AS((void)ingest_csv("/nonexistent/file.csv", schema), IoError);
}
