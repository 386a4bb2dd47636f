#include "covchain/chain_core.hpp"
#include "covchain/errors.hpp"
#include "covchain/growth.hpp"
#include "covchain/zoo.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

using namespace covchain;

namespace {

FiniteMetric uniform_metric(std::size_t n, double c) {
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d(i, j) = i == j ? 0.0 : c;
    return FiniteMetric{d};
}

bool is_independent(const DirectedGraph& g, const std::vector<std::size_t>& keep) {
    const std::set<std::size_t> s(keep.begin(), keep.end());
    for (const auto& [u, v] : g.edges)
        if (s.count(u) && s.count(v)) return false;
    return true;
}

} // namespace

TEST_CASE("growth instance verifies hypotheses then the inequality") {
    const FiniteMetric u4 = uniform_metric(4, 1.0);
    GrowthInstance inst;
    inst.ratio = 2.0;
    inst.level = 0;
    inst.scale = 1.0;
    inst.sets = {{0}, {1}};

    // F(S) = a 2^n per extra point: holds with equality.
    const SetFunctional growing = [](const std::vector<std::size_t>& s) {
        return static_cast<double>(s.size() - 1);
    };
    CHECK(check_growth_instance(growing, u4, inst).passed);

    // The zero functional cannot grow; the report fails honestly.
    const SetFunctional flat = [](const std::vector<std::size_t>&) { return 0.0; };
    const BoundReport bad = check_growth_instance(flat, u4, inst);
    CHECK_FALSE(bad.passed);

    // Hypothesis violations throw instead of failing.
    GrowthInstance tight = inst;
    tight.scale = 2.0; // cross distance 1 < a
    CHECK_THROWS_AS(check_growth_instance(growing, u4, tight), PreconditionError);

    GrowthInstance fat = inst;
    fat.sets = {{0, 1}, {2}}; // group diameter 1 > a/r
    CHECK_THROWS_AS(check_growth_instance(growing, u4, fat), PreconditionError);

    GrowthInstance overlap = inst;
    overlap.sets = {{0}, {0}};
    CHECK_THROWS_AS(check_growth_instance(growing, u4, overlap), std::invalid_argument);

    GrowthInstance shallow = inst;
    shallow.ratio = 0.5;
    CHECK_THROWS_AS(check_growth_instance(growing, u4, shallow), std::invalid_argument);
}

TEST_CASE("independent set via longest condensation path") {
    // Two-layer DAG: sources {0,1}, sinks {2,3}.
    DirectedGraph dag;
    dag.vertex_count = 4;
    dag.edges = {{0, 2}, {1, 2}, {0, 3}, {1, 3}};
    const std::vector<std::size_t> keep = longest_path_bound_independent_set(dag);
    CHECK(keep.size() >= 2);
    CHECK(is_independent(dag, keep));

    // A single cycle condenses to one component.
    DirectedGraph cycle;
    cycle.vertex_count = 3;
    cycle.edges = {{0, 1}, {1, 2}, {2, 0}};
    const std::vector<std::size_t> one = longest_path_bound_independent_set(cycle);
    CHECK(one.size() == 1);

    // Path 0 -> 1 -> 2: three layers, one vertex survives.
    DirectedGraph path;
    path.vertex_count = 3;
    path.edges = {{0, 1}, {1, 2}};
    const std::vector<std::size_t> rep = longest_path_bound_independent_set(path);
    CHECK(rep.size() == 1);
    CHECK(is_independent(path, rep));

    DirectedGraph loop;
    loop.vertex_count = 1;
    loop.edges = {{0, 0}};
    CHECK_THROWS_AS(longest_path_bound_independent_set(loop), ValidationError);
}

TEST_CASE("cycle identity holds exactly for reversible chains") {
    const MarkovChain cyc = cycle_walk(8);
    const HittingMatrix h = expected_hitting_times(cyc);
    CHECK(cycle_identity_check(cyc, h, {0, 2, 5}).passed);
    CHECK(cycle_identity_check(cyc, h, {1, 4, 6, 7}).passed);
    CHECK(cycle_identity_check(cyc, h, {0, 3}).passed);

    CHECK_THROWS_AS(cycle_identity_check(cyc, h, {0}), std::invalid_argument);
    CHECK_THROWS_AS(cycle_identity_check(cyc, h, {0, 2, 2}), std::invalid_argument);

    const MarkovChain rot = directed_cycle(6);
    const HittingMatrix rh = expected_hitting_times(rot);
    CHECK_THROWS_AS(cycle_identity_check(rot, rh, {0, 1, 2}), PreconditionError);

    // Diagnostic mode reports the directed sums instead: forward 1+1+4,
    // backward 5+5+2.
    const BoundReport diag = cycle_identity_check(rot, rh, {0, 1, 2}, 1e-9, true);
    CHECK_FALSE(diag.passed);
    CHECK(std::abs(diag.lhs - 6.0) < 1e-9);
    CHECK(std::abs(diag.rhs - 12.0) < 1e-9);
}

TEST_CASE("one-way sparsification keeps a third with slow pairwise hits") {
    // Complete graph: all hitting times equal, nothing needs pruning.
    const MarkovChain k6 = complete_graph_walk(6);
    const HittingMatrix h6 = expected_hitting_times(k6);
    const FiniteMetric d6 = commute_distance(h6);
    const std::vector<std::size_t> pts = {0, 1, 2, 3, 4, 5};
    const std::vector<std::size_t> kept = one_way_sparsify(h6, d6, pts, 10.0);
    CHECK(kept.size() == 6);

    // Weighted star: leaf-to-center hits are fast, the center is pruned.
    WeightedGraph star;
    star.n = 7;
    star.edges = {{0, 1, 50}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}, {0, 5, 1}, {0, 6, 1}};
    const MarkovChain walk = weighted_graph_walk(star);
    const HittingMatrix h = expected_hitting_times(walk);
    const FiniteMetric d = commute_distance(h);
    std::vector<std::size_t> points = {0, 2, 3, 4, 5, 6};
    double scale = 1e300;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j)
            if (i != j) scale = std::min(scale, d.distance(points[i], points[j]));
    const std::vector<std::size_t> keep = one_way_sparsify(h, d, points, scale);
    CHECK(33 * keep.size() >= points.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (i != j) CHECK(h.expected_steps(keep[i], keep[j]) >= scale / 4 - 1e-9);

    CHECK_THROWS_AS(one_way_sparsify(h, d, {}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(one_way_sparsify(h, d, {0, 0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(one_way_sparsify(h, d, points, 0.0), std::invalid_argument);
    // Scale so small the diameter cap 16a fails.
    CHECK_THROWS_AS(one_way_sparsify(h, d, points, scale / 1000.0), PreconditionError);
}

TEST_CASE("growth step on spaced cycle singletons") {
    const MarkovChain cyc = cycle_walk(24);
    const FiniteMetric d = commute_distance(expected_hitting_times(cyc));
    const std::vector<std::vector<std::size_t>> groups = {{0}, {4}, {8}, {12}, {16}, {20}};
    double scale = 1e300;
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i + 1; j < groups.size(); ++j)
            scale = std::min(scale, d.distance(groups[i][0], groups[j][0]));
    CoverOptions opts;
    opts.trials = 2000;
    opts.seed = 77;
    const BoundReport row = growth_step_verify(cyc, groups, d, scale, opts);
    CHECK(row.passed);
    CHECK(row.hard);

    // Clustered pairs on a bare cycle violate the diameter hypothesis.
    const std::vector<std::vector<std::size_t>> fat = {{0, 1}, {12, 13}};
    CHECK_THROWS_AS(growth_step_verify(cyc, fat, d, d.distance(0, 12), opts),
                    PreconditionError);
    CHECK_THROWS_AS(growth_step_verify(cyc, {{0}}, d, 1.0, opts), std::invalid_argument);
}

TEST_CASE("growth step on a weighted dumbbell") {
    WeightedGraph bell;
    bell.n = 4;
    bell.edges = {{0, 1, 64}, {1, 2, 1}, {2, 3, 64}};
    const MarkovChain walk = weighted_graph_walk(bell);
    const FiniteMetric d = commute_distance(expected_hitting_times(walk));
    const std::vector<std::vector<std::size_t>> groups = {{0, 1}, {2, 3}};
    double scale = 1e300;
    for (std::size_t a : groups[0])
        for (std::size_t b : groups[1]) scale = std::min(scale, d.distance(a, b));
    CoverOptions opts;
    opts.trials = 2000;
    opts.seed = 78;
    const BoundReport row = growth_step_verify(walk, groups, d, scale, opts);
    CHECK(row.passed);
}
