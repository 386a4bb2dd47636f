#pragma once

#include "covchain/chain_core.hpp"
#include "covchain/report.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace covchain {

// Undirected multigraph with integer edge multiplicities, kept exact so
// degree ratios survive into the walk without rounding.
struct WeightedGraph {
    struct Edge {
        std::size_t u = 0;
        std::size_t v = 0;
        std::uint64_t multiplicity = 1;
    };
    std::size_t n = 0;
    std::vector<Edge> edges;
};

std::vector<std::uint64_t> vertex_degrees(const WeightedGraph& graph);
std::uint64_t total_multiplicity(const WeightedGraph& graph);

// Walk moving along edges with probability proportional to multiplicity;
// reversible with stationary mass degree(x) / (2 * total multiplicity).
MarkovChain weighted_graph_walk(const WeightedGraph& graph);

MarkovChain complete_graph_walk(std::size_t n); // n >= 2
MarkovChain path_walk(std::size_t n);           // n >= 2, reflecting ends
MarkovChain cycle_walk(std::size_t n);          // n >= 3, steps +-1 each w.p. 1/2
MarkovChain directed_cycle(std::size_t n);      // n >= 2, deterministic rotation
MarkovChain torus_walk(std::size_t side);       // side >= 2, side^2 states
MarkovChain two_state(double eps);              // rows (eps, 1-eps)

using ZooParams = std::map<std::string, std::string>;

// kind in {complete_graph, path, cycle_srw, directed_cycle, torus_2d,
// two_state, weighted_graph, kklv_tree}; throws ValidationError on unknown
// kinds and std::invalid_argument on bad parameters.
MarkovChain make_zoo_chain(const std::string& kind, const ZooParams& params);

// "kind(arg)" shorthand, e.g. "complete_graph(6)" or "two_state(0.3)".
MarkovChain make_zoo_chain(const std::string& name);

// Rooted tree: a node at depth i has N_i + 1 children where N_0 = 1 and
// N_i = 2^(2^i), and edges from depth i to depth i+1 carry multiplicity 2^i.
// Node 0 is the root; nodes are indexed in breadth-first order.
struct LayeredTree {
    int depth = 0;
    WeightedGraph graph;
    std::vector<int> node_depth;
    std::vector<std::size_t> parent; // parent[0] == 0
    std::vector<std::vector<std::size_t>> children;
};

LayeredTree layered_tree(int depth); // 1 <= depth <= 4, else CapacityError

MarkovChain layered_tree_walk(const LayeredTree& tree);

// Commute distance from the tree structure: an edge between depths i and
// i+1 contributes 2 * total multiplicity * 2^-i, and distances add along
// the unique tree path.
FiniteMetric layered_tree_commute_metric(const LayeredTree& tree);

// Exact cross-checks of the closed-form metric against solver output:
// per-edge values, path additivity, and the depth sandwich
//   E * 2^(1-i) <= d(x, y) <= E * 2^(3-i)
// for pairs whose closest common ancestor sits at depth i. depth <= 3.
std::vector<BoundReport> tree_commute_checks(const LayeredTree& tree,
                                             std::uint64_t sample_pairs = 500,
                                             std::uint64_t seed = 1);

// Net M_i = vertices of depth <= i-3 (the root net for i < 3); cardinality
// fits the doubly exponential schedule with three levels to spare.
std::vector<std::vector<std::size_t>> shifted_prefix_nets(const LayeredTree& tree);

// Walks a root-to-leaf path avoiding every net level below it and returns
// sum_i 2^i d(x_leaf, M_i); certifies the net functional of the given nets
// from below. Nets must respect the cardinality schedule.
double adversarial_net_certificate(const LayeredTree& tree, const FiniteMetric& metric,
                                   const std::vector<std::vector<std::size_t>>& nets);

struct TreeGammaRow {
    int depth = 0;
    double total_multiplicity = 0.0;
    double gamma1_upper = 0.0;
    double gamma1_lower = 0.0;
    double gamma2_sqrt_upper = 0.0;
    double gamma2_sqrt_lower = 0.0;
    double adversarial_value = 0.0;
    double adversarial_target = 0.0; // 2 * E * depth
};

TreeGammaRow tree_gamma_scaling_row(int depth); // depth <= 3

} // namespace covchain
