#include "covchain/chain_core.hpp"
#include "covchain/errors.hpp"
#include "covchain/zoo.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

using namespace covchain;

namespace {

MarkovChain from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    return make_markov_chain(std::move(m));
}

} // namespace

TEST_CASE("validation rejects broken transition matrices") {
    Matrix bad_sum(2, 2);
    bad_sum(0, 0) = 0.5; bad_sum(0, 1) = 0.4;
    bad_sum(1, 0) = 0.5; bad_sum(1, 1) = 0.5;
    CHECK_THROWS_AS(make_markov_chain(bad_sum), ValidationError);

    Matrix negative(2, 2);
    negative(0, 0) = 1.2; negative(0, 1) = -0.2;
    negative(1, 0) = 0.5; negative(1, 1) = 0.5;
    CHECK_THROWS_AS(make_markov_chain(negative), ValidationError);

    // Two disconnected blocks.
    Matrix blocks(4, 4);
    blocks(0, 1) = 1; blocks(1, 0) = 1;
    blocks(2, 3) = 1; blocks(3, 2) = 1;
    CHECK_THROWS_AS(make_markov_chain(blocks), ValidationError);

    Matrix rect(2, 3);
    MarkovChain c;
    c.n = 2;
    c.transition = rect;
    CHECK_THROWS_AS(validate_markov_chain(c), ValidationError);
}

TEST_CASE("two-state chain has closed-form everything") {
    const double eps = 0.3;
    const MarkovChain chain = two_state(eps);
    const StationaryDistribution pi = stationary_distribution(chain);
    CHECK(std::abs(pi.pi[0] - eps) < 1e-12);
    CHECK(std::abs(pi.pi[1] - (1 - eps)) < 1e-12);

    const HittingMatrix h = expected_hitting_times(chain);
    CHECK(std::abs(h.expected_steps(0, 1) - 1.0 / 0.7) < 1e-12);
    CHECK(std::abs(h.expected_steps(1, 0) - 1.0 / 0.3) < 1e-12);
    CHECK(h.expected_steps(0, 0) == 0.0);

    const FiniteMetric d = commute_distance(h);
    CHECK(std::abs(d.distance(0, 1) - 1.0 / 0.21) < 1e-9);
    CHECK(is_reversible(chain, pi));

    // Escaping 0 toward 1 means moving on the first step.
    CHECK(std::abs(escape_probability(chain, 0, 1) - 0.7) < 1e-12);
    CHECK(std::abs(expected_first_return(chain, h, 0) - 1.0 / eps) < 1e-12);
    CHECK(std::abs(expected_first_return(chain, h, 1) - 1.0 / (1 - eps)) < 1e-12);
}

TEST_CASE("complete graph hitting times are n-1 everywhere") {
    const MarkovChain chain = complete_graph_walk(5);
    const HittingMatrix h = expected_hitting_times(chain);
    for (std::size_t x = 0; x < 5; ++x)
        for (std::size_t y = 0; y < 5; ++y) {
            const double want = x == y ? 0.0 : 4.0;
            CHECK(std::abs(h.expected_steps(x, y) - want) < 1e-9);
        }
    const FiniteMetric d = commute_distance(h);
    CHECK(std::abs(d.distance(1, 3) - 8.0) < 1e-9);
    // Escape probability on K3 is 1/(pi * d) = 3/4.
    const MarkovChain k3 = complete_graph_walk(3);
    CHECK(std::abs(escape_probability(k3, 0, 1) - 0.75) < 1e-12);
}

TEST_CASE("directed cycle rotates deterministically") {
    const MarkovChain chain = directed_cycle(5);
    const StationaryDistribution pi = stationary_distribution(chain);
    const HittingMatrix h = expected_hitting_times(chain);
    for (std::size_t x = 0; x < 5; ++x)
        for (std::size_t y = 0; y < 5; ++y) {
            const double want = static_cast<double>((y + 5 - x) % 5);
            CHECK(std::abs(h.expected_steps(x, y) - want) < 1e-9);
        }
    const FiniteMetric d = commute_distance(h);
    for (std::size_t x = 0; x < 5; ++x)
        for (std::size_t y = x + 1; y < 5; ++y) CHECK(std::abs(d.distance(x, y) - 5.0) < 1e-9);
    CHECK_FALSE(is_reversible(chain, pi));
    // The rotation visits everything before returning.
    CHECK(std::abs(escape_probability(chain, 0, 3) - 1.0) < 1e-12);
}

TEST_CASE("cycle walk hitting times follow k(n-k)") {
    const MarkovChain chain = cycle_walk(9);
    const HittingMatrix h = expected_hitting_times(chain);
    CHECK(std::abs(h.expected_steps(0, 3) - 18.0) < 1e-9);
    CHECK(std::abs(h.expected_steps(0, 4) - 20.0) < 1e-9);
    const FiniteMetric d = commute_distance(h);
    CHECK(std::abs(d.distance(0, 3) - 36.0) < 1e-9);
}

TEST_CASE("reflecting path endpoint hit takes (n-1)^2") {
    const MarkovChain chain = path_walk(4);
    const HittingMatrix h = expected_hitting_times(chain);
    CHECK(std::abs(h.expected_steps(0, 3) - 9.0) < 1e-9);
    const StationaryDistribution pi = stationary_distribution(chain);
    CHECK(std::abs(pi.pi[0] - 1.0 / 6) < 1e-12);
    CHECK(std::abs(pi.pi[1] - 2.0 / 6) < 1e-12);
}

TEST_CASE("escape probability matches 1/(pi d) off the closed forms") {
    for (const char* name : {"torus_2d(3)", "path(5)", "cycle_srw(7)"}) {
        const MarkovChain chain = make_zoo_chain(name);
        const StationaryDistribution pi = stationary_distribution(chain);
        const HittingMatrix h = expected_hitting_times(chain);
        const FiniteMetric d = commute_distance(h);
        for (std::size_t y = 1; y < chain.n; y += 2) {
            const double p = escape_probability(chain, 0, y);
            CHECK(std::abs(p - 1.0 / (pi.pi[0] * d.distance(0, y))) < 1e-9);
        }
    }
}

TEST_CASE("return identity check passes on honest chains") {
    for (const char* name : {"two_state(0.5)", "complete_graph(6)", "cycle_srw(8)",
                             "directed_cycle(6)", "torus_2d(3)"}) {
        const BoundReport row = return_time_identity_check(make_zoo_chain(name));
        CHECK(row.passed);
        CHECK(row.hard);
    }
}

TEST_CASE("hitting solver refuses oversized chains") {
    const MarkovChain chain = complete_graph_walk(6);
    CHECK_THROWS_AS(expected_hitting_times(chain, 5), CapacityError);
}

TEST_CASE("metric validation catches broken axioms") {
    Matrix tri(3, 3);
    tri(0, 1) = tri(1, 0) = 1.0;
    tri(1, 2) = tri(2, 1) = 1.0;
    tri(0, 2) = tri(2, 0) = 10.0;
    CHECK_THROWS_AS(validate_metric(FiniteMetric{tri}), ValidationError);

    Matrix asym(2, 2);
    asym(0, 1) = 1.0;
    asym(1, 0) = 2.0;
    CHECK_THROWS_AS(validate_metric(FiniteMetric{asym}), ValidationError);

    Matrix diag(2, 2);
    diag(0, 0) = 0.5;
    CHECK_THROWS_AS(validate_metric(FiniteMetric{diag}), ValidationError);
}

TEST_CASE("sqrt metric takes entrywise roots and stays a metric") {
    const MarkovChain chain = cycle_walk(6);
    const FiniteMetric d = commute_distance(expected_hitting_times(chain));
    const FiniteMetric s = sqrt_metric(d);
    CHECK(std::abs(s.distance(0, 2) - std::sqrt(d.distance(0, 2))) < 1e-12);
    validate_metric(s);
}

TEST_CASE("chain sampler follows the row distribution") {
    const MarkovChain chain = complete_graph_walk(4);
    ChainSampler sampler(chain);
    SplitMix64 rng(123);
    std::vector<int> counts(4, 0);
    const int n = 90000;
    for (int i = 0; i < n; ++i) ++counts[sampler.step(0, rng)];
    CHECK(counts[0] == 0);
    for (int k = 1; k < 4; ++k)
        CHECK(std::abs(counts[k] - n / 3.0) < 3.0 * std::sqrt(n * (1.0 / 3) * (2.0 / 3)));
}

TEST_CASE("hand-built reversible chain agrees with detailed balance") {
    const MarkovChain chain = from_rows({{0.0, 0.5, 0.5},
                                         {0.25, 0.5, 0.25},
                                         {0.5, 0.5, 0.0}});
    const StationaryDistribution pi = stationary_distribution(chain);
    double sum = 0.0;
    for (double v : pi.pi) {
        CHECK(v > 0.0);
        sum += v;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
}
