#include <doctest.h>

#include <random>

#include "onesided/orthogonal.hpp"

using namespace onesided;

namespace {
// Brute-force value of the one-sided empirical loss at a fixed side: the only
// two equivalence classes of the 1-D threshold rule are beta < c and beta > c.
double brute_loss(const std::vector<double>& ys, double c, bool above) {
    double total = 0.0;
    for (double y : ys) {
        const bool label_above = y > c;
        if (label_above != above) total += std::abs(y - c);
    }
    return total;
}
}  // namespace

TEST_CASE("worked example") {
    const auto out = orthogonal_exact_minimizer({{0.2, 0.9}}, 0.5);
    REQUIRE(out.size() == 1);
    CHECK(out[0].side == GroupSide::Above);  // l = 0.3 < u = 0.4
    CHECK(out[0].objective == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("degenerate tie at the cutoff goes below") {
    const auto out = orthogonal_exact_minimizer({{0.5}}, 0.5);
    CHECK(out[0].side == GroupSide::Below);
    CHECK(out[0].objective == 0.0);
}

TEST_CASE("all labels above the cutoff") {
    const auto out = orthogonal_exact_minimizer({{0.7, 0.9, 1.4}}, 0.5);
    CHECK(out[0].side == GroupSide::Above);
    CHECK(out[0].objective == 0.0);
}

TEST_CASE("multiple groups are solved independently") {
    const auto out = orthogonal_exact_minimizer({{0.2, 0.9}, {0.1, 0.2}, {0.5}}, 0.5);
    REQUIRE(out.size() == 3);
    CHECK(out[0].side == GroupSide::Above);
    CHECK(out[1].side == GroupSide::Below);
    CHECK(out[1].objective == 0.0);
    CHECK(out[2].side == GroupSide::Below);
}

TEST_CASE("objective equals the brute-force minimum on random grid instances") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_int_distribution<int> tick(-10, 20);
    const double c = 0.5;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> ys(size(rng));
        for (auto& y : ys) y = 0.1 * tick(rng);
        const auto out = orthogonal_exact_minimizer({ys}, c);
        const double above = brute_loss(ys, c, true);
        const double below = brute_loss(ys, c, false);
        CHECK(out[0].objective == std::min(above, below));
        if (out[0].side == GroupSide::Above) {
            CHECK(out[0].objective == above);
        } else {
            CHECK(out[0].objective == below);
        }
    }
}
