#include "covchain/chain_core.hpp"
#include "covchain/cover_time.hpp"
#include "covchain/errors.hpp"
#include "covchain/zoo.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

using namespace covchain;

namespace {

std::vector<std::size_t> all_states(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace

TEST_CASE("complete graph cover time is the coupon collector sum") {
    const MarkovChain k4 = complete_graph_walk(4);
    const std::vector<double> cover = exact_cover_all_starts(k4, all_states(4));
    REQUIRE(cover.size() == 4);
    // 3 * (1 + 1/2 + 1/3) = 5.5 from every start.
    for (double v : cover) CHECK(std::abs(v - 5.5) < 1e-9);

    const CoverTimeEstimate est = exact_cover_expectation(k4, all_states(4), 2);
    CHECK(est.method == CoverTimeEstimate::Method::ExactDp);
    CHECK(est.ci_halfwidth == 0.0);
    CHECK(std::abs(est.value - 5.5) < 1e-9);
}

TEST_CASE("closed-form cover times on small families") {
    // Two states: covering means hitting the other state.
    const MarkovChain ts = two_state(0.3);
    const std::vector<double> ts_cover = exact_cover_all_starts(ts, all_states(2));
    CHECK(std::abs(ts_cover[0] - 1.0 / 0.7) < 1e-9);
    CHECK(std::abs(ts_cover[1] - 1.0 / 0.3) < 1e-9);

    // The rotation covers in exactly n-1 steps.
    const MarkovChain rot = directed_cycle(7);
    for (double v : exact_cover_all_starts(rot, all_states(7))) CHECK(std::abs(v - 6.0) < 1e-9);

    // Cycle cover from anywhere is n(n-1)/2.
    const MarkovChain cyc = cycle_walk(5);
    for (double v : exact_cover_all_starts(cyc, all_states(5))) CHECK(std::abs(v - 10.0) < 1e-9);

    // Covering the reflecting path from the left end means hitting the right end.
    const MarkovChain path = path_walk(4);
    const std::vector<double> pc = exact_cover_all_starts(path, all_states(4));
    CHECK(std::abs(pc[0] - 9.0) < 1e-9);

    // Subset cover from inside the subset.
    const std::vector<double> sub = exact_cover_all_starts(path, {0, 2});
    CHECK(std::abs(sub[0] - 4.0) < 1e-9);
}

TEST_CASE("cover extremes pick starts inside the subset") {
    const MarkovChain ts = two_state(0.3);
    CHECK(std::abs(cov_minus(ts, all_states(2)) - 1.0 / 0.7) < 1e-9);
    CHECK(std::abs(cov_plus(ts, all_states(2)) - 1.0 / 0.3) < 1e-9);

    // Singleton: the start is already covered.
    CHECK(cov_minus(ts, {1}) == 0.0);
    CHECK(cov_plus(ts, {1}) == 0.0);
}

TEST_CASE("exact cover rejects oversized subsets") {
    const MarkovChain cyc = cycle_walk(25);
    std::vector<std::size_t> big(21);
    std::iota(big.begin(), big.end(), 0);
    CHECK_THROWS_AS(exact_cover_all_starts(cyc, big), CapacityError);
    CHECK_THROWS_AS(exact_cover_all_starts(cyc, {}), std::invalid_argument);
    CHECK_THROWS_AS(exact_cover_all_starts(cyc, {0, 99}), std::invalid_argument);

    // Duplicates collapse instead of erroring.
    const std::vector<double> dup = exact_cover_all_starts(cyc, {0, 0, 1});
    const std::vector<double> plain = exact_cover_all_starts(cyc, {0, 1});
    CHECK(dup == plain);
}

TEST_CASE("monte carlo cover estimate brackets the exact value") {
    const MarkovChain k4 = complete_graph_walk(4);
    const CoverTimeEstimate mc = mc_cover_time(k4, all_states(4), 0, 20000, 99);
    CHECK(mc.method == CoverTimeEstimate::Method::MonteCarlo);
    CHECK(mc.trials == 20000);
    REQUIRE(mc.seed.has_value());
    CHECK(*mc.seed == 99);
    CHECK(mc.ci_halfwidth > 0.0);
    CHECK(std::abs(mc.value - 5.5) <= mc.ci_halfwidth);

    // Same seed replays bit for bit; the CI is three sigmas wide.
    const CoverTimeEstimate again = mc_cover_time(k4, all_states(4), 0, 20000, 99);
    CHECK(again.value == mc.value);
    CHECK(again.ci_halfwidth == mc.ci_halfwidth);

    const CoverTimeEstimate tiny = mc_cover_time(k4, all_states(4), 0, 1, 5);
    CHECK(std::isinf(tiny.ci_halfwidth));
}

TEST_CASE("matthews bracket contains the worst cover expectation") {
    const MarkovChain k4 = complete_graph_walk(4);
    const HittingMatrix h = expected_hitting_times(k4);
    const auto [lo, hi] = matthews_bounds(h, all_states(4));
    CHECK(std::abs(lo - 3.0 * std::log(4.0)) < 1e-12);
    CHECK(std::abs(hi - 3.0 * (1.0 + std::log(4.0))) < 1e-12);
    CHECK(lo <= 5.5);
    CHECK(5.5 <= hi);

    const auto [slo, shi] = matthews_bounds(h, {2});
    CHECK(slo == 0.0);
    CHECK(shi == 0.0);
}

TEST_CASE("harmonic lower bound is sharp on complete graphs") {
    const MarkovChain k5 = complete_graph_walk(5);
    const HittingMatrix h = expected_hitting_times(k5);
    const double bound = matthews_harmonic_lower(h, all_states(5));
    const double harmonic4 = 1.0 + 0.5 + 1.0 / 3 + 0.25;
    CHECK(std::abs(bound - 4.0 * harmonic4) < 1e-12);
    CHECK(std::abs(cov_plus(k5, all_states(5)) - bound) < 1e-9);
}

TEST_CASE("refined lower bound checks its separation hypothesis") {
    const MarkovChain cyc = cycle_walk(12);
    const std::vector<std::vector<std::size_t>> groups = {{0}, {4}, {8}};
    // Pairwise hitting times are 4*8 = 32.
    const BoundReport row = matthews_refined_lower(cyc, groups, 32.0);
    CHECK(row.passed);
    CHECK_THROWS_AS(matthews_refined_lower(cyc, groups, 1000.0), PreconditionError);
    CHECK_THROWS_AS(matthews_refined_lower(cyc, {{0}, {0}, {4}}, 1.0), std::invalid_argument);
}

TEST_CASE("excursion visit law matches the geometric formula") {
    for (const char* name : {"two_state(0.4)", "complete_graph(3)", "cycle_srw(6)",
                             "directed_cycle(6)"}) {
        const MarkovChain chain = make_zoo_chain(name);
        const BoundReport row = excursion_visit_law(chain, 0, 1, 4000, 31);
        CHECK(row.passed);
    }
    const MarkovChain ts = two_state(0.4);
    CHECK_THROWS_AS(excursion_visit_law(ts, 0, 0, 100, 1), std::invalid_argument);
}

TEST_CASE("restart bound holds on small chains") {
    const MarkovChain k4 = complete_graph_walk(4);
    const BoundReport row = bdnp_restart_check(k4, all_states(4), 0, 8, 4000, 17);
    CHECK(row.passed);
    CHECK_THROWS_AS(bdnp_restart_check(k4, all_states(4), 0, 0, 100, 1), std::invalid_argument);
}

TEST_CASE("lower tail of excursion visit counts") {
    const BoundReport row = kklv_tail_check(two_state(0.3), 0, 1, 30, 0.5, 4000, 23);
    CHECK(row.passed);
    CHECK_THROWS_AS(kklv_tail_check(two_state(0.3), 0, 1, 30, 1.5, 100, 1),
                    std::invalid_argument);
}

TEST_CASE("race estimate requires the drift gap") {
    const MarkovChain cyc = cycle_walk(9);
    const BoundReport row = key_estimate_check(cyc, 0, 0, 4, 6, 2, 4000, 41);
    CHECK(row.passed);
    CHECK_THROWS_AS(key_estimate_check(cyc, 0, 0, 4, 3, 5, 100, 1), std::invalid_argument);
}

TEST_CASE("chaining certificate on the complete graph") {
    const MarkovChain k4 = complete_graph_walk(4);
    const FiniteMetric d = commute_distance(expected_hitting_times(k4));
    const GammaEstimate g = greedy_gamma_upper(sqrt_metric(d), 2);
    REQUIRE(g.witness.has_value());
    const BoundReport row = chaining_cover_certificate(k4, all_states(4), 0, *g.witness,
                                                       4000, 57);
    CHECK(row.passed);
    CHECK_THROWS_AS(chaining_cover_certificate(k4, {1, 2}, 0, *g.witness, 100, 1),
                    std::invalid_argument);
}

TEST_CASE("trajectory statistics are consistent") {
    const MarkovChain cyc = cycle_walk(6);
    const TrajectoryStats stats = simulate_trajectory(cyc, 2, 5000, 7);
    CHECK(stats.horizon == 5000);
    std::uint64_t total = 0;
    for (std::uint64_t c : stats.visit_counts) total += c;
    CHECK(total == 5000);
    for (std::size_t i = 1; i < stats.return_times.size(); ++i)
        CHECK(stats.return_times[i - 1] < stats.return_times[i]);
    const TrajectoryStats again = simulate_trajectory(cyc, 2, 5000, 7);
    CHECK(again.visit_counts == stats.visit_counts);
    CHECK_THROWS_AS(simulate_trajectory(cyc, 9, 10, 1), std::invalid_argument);
}
