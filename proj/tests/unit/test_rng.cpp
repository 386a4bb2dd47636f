#include "covchain/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

using namespace covchain;

TEST_CASE("trial seeds are deterministic and distinct") {
    CHECK(trial_seed(42, 0) == trial_seed(42, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(trial_seed(42, t));
    CHECK(seen.size() == 1000);
    CHECK(trial_seed(42, 0) != trial_seed(43, 0));
}

TEST_CASE("unit stays in [0,1) and has the right mean") {
    SplitMix64 rng(7);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // 3 sigma of the mean of n uniforms: 3 / sqrt(12 n).
    CHECK(std::abs(sum / n - 0.5) < 3.0 / std::sqrt(12.0 * n));
}

TEST_CASE("below never reaches the bound") {
    SplitMix64 rng(9);
    std::vector<int> counts(5, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const std::uint64_t v = rng.below(5);
        REQUIRE(v < 5);
        ++counts[v];
    }
    for (int c : counts) {
        // 3 sigma around n/5 for a Bernoulli(1/5) count.
        CHECK(std::abs(c - n / 5.0) < 3.0 * std::sqrt(n * 0.2 * 0.8));
    }
}

TEST_CASE("alias table reproduces the weight profile") {
    AliasTable table(std::vector<double>{1.0, 2.0, 3.0});
    REQUIRE(table.size() == 3);
    SplitMix64 rng(11);
    std::vector<int> counts(3, 0);
    const int n = 120000;
    for (int i = 0; i < n; ++i) ++counts[table.sample(rng)];
    const double total = 6.0;
    for (int k = 0; k < 3; ++k) {
        const double p = (k + 1) / total;
        CHECK(std::abs(counts[k] - n * p) < 3.0 * std::sqrt(n * p * (1 - p)));
    }
}

TEST_CASE("degenerate alias table always answers zero") {
    AliasTable table(std::vector<double>{3.5});
    SplitMix64 rng(1);
    for (int i = 0; i < 100; ++i) CHECK(table.sample(rng) == 0);
}
