#include "covchain/zoo.hpp"

#include "covchain/chaining.hpp"
#include "covchain/errors.hpp"
#include "covchain/io.hpp"
#include "covchain/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace covchain {

std::vector<std::uint64_t> vertex_degrees(const WeightedGraph& graph) {
    std::vector<std::uint64_t> deg(graph.n, 0);
    for (const auto& e : graph.edges) {
        deg[e.u] += e.multiplicity;
        deg[e.v] += e.multiplicity;
    }
    return deg;
}

std::uint64_t total_multiplicity(const WeightedGraph& graph) {
    std::uint64_t total = 0;
    for (const auto& e : graph.edges) total += e.multiplicity;
    return total;
}

MarkovChain weighted_graph_walk(const WeightedGraph& graph) {
    const std::size_t n = graph.n;
    if (n < 2) throw ValidationError("weighted graph: need at least two vertices");
    Matrix weight(n, n, 0.0);
    for (const auto& e : graph.edges) {
        if (e.u >= n || e.v >= n) throw ValidationError("weighted graph: edge endpoint out of range");
        if (e.u == e.v) throw ValidationError("weighted graph: self-loops not supported");
        if (e.multiplicity == 0) throw ValidationError("weighted graph: zero multiplicity edge");
        weight(e.u, e.v) += static_cast<double>(e.multiplicity);
        weight(e.v, e.u) += static_cast<double>(e.multiplicity);
    }
    const auto deg = vertex_degrees(graph);
    Matrix p(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (deg[i] == 0) {
            throw ValidationError("weighted graph: vertex " + std::to_string(i) + " has zero degree");
        }
        for (std::size_t j = 0; j < n; ++j) p(i, j) = weight(i, j) / static_cast<double>(deg[i]);
    }
    return make_markov_chain(std::move(p));
}

MarkovChain complete_graph_walk(std::size_t n) {
    if (n < 2) throw std::invalid_argument("complete graph: need n >= 2");
    Matrix p(n, n, 1.0 / static_cast<double>(n - 1));
    for (std::size_t i = 0; i < n; ++i) p(i, i) = 0.0;
    return make_markov_chain(std::move(p));
}

MarkovChain path_walk(std::size_t n) {
    if (n < 2) throw std::invalid_argument("path: need n >= 2");
    Matrix p(n, n, 0.0);
    p(0, 1) = 1.0;
    p(n - 1, n - 2) = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        p(i, i - 1) = 0.5;
        p(i, i + 1) = 0.5;
    }
    return make_markov_chain(std::move(p));
}

MarkovChain cycle_walk(std::size_t n) {
    if (n < 3) throw std::invalid_argument("cycle: need n >= 3");
    Matrix p(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        p(i, (i + 1) % n) += 0.5;
        p(i, (i + n - 1) % n) += 0.5;
    }
    return make_markov_chain(std::move(p));
}

MarkovChain directed_cycle(std::size_t n) {
    if (n < 2) throw std::invalid_argument("directed cycle: need n >= 2");
    Matrix p(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) p(i, (i + 1) % n) = 1.0;
    return make_markov_chain(std::move(p));
}

MarkovChain torus_walk(std::size_t side) {
    if (side < 2) throw std::invalid_argument("torus: need side >= 2");
    const std::size_t n = side * side;
    Matrix p(n, n, 0.0);
    auto id = [side](std::size_t r, std::size_t c) { return r * side + c; };
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            const std::size_t x = id(r, c);
            p(x, id((r + 1) % side, c)) += 0.25;
            p(x, id((r + side - 1) % side, c)) += 0.25;
            p(x, id(r, (c + 1) % side)) += 0.25;
            p(x, id(r, (c + side - 1) % side)) += 0.25;
        }
    }
    return make_markov_chain(std::move(p));
}

MarkovChain two_state(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("two state: need eps in (0,1)");
    Matrix p(2, 2, 0.0);
    p(0, 0) = eps;
    p(0, 1) = 1.0 - eps;
    p(1, 0) = eps;
    p(1, 1) = 1.0 - eps;
    return make_markov_chain(std::move(p));
}

namespace {

long parse_int_param(const ZooParams& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument("missing parameter: " + key);
    char* end = nullptr;
    const long v = std::strtol(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0') {
        throw std::invalid_argument("parameter " + key + " is not an integer: " + it->second);
    }
    return v;
}

double parse_double_param(const ZooParams& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument("missing parameter: " + key);
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0') {
        throw std::invalid_argument("parameter " + key + " is not a number: " + it->second);
    }
    return v;
}

} // namespace

MarkovChain make_zoo_chain(const std::string& kind, const ZooParams& params) {
    if (kind == "complete_graph") return complete_graph_walk(static_cast<std::size_t>(parse_int_param(params, "n")));
    if (kind == "path") return path_walk(static_cast<std::size_t>(parse_int_param(params, "n")));
    if (kind == "cycle_srw") return cycle_walk(static_cast<std::size_t>(parse_int_param(params, "n")));
    if (kind == "directed_cycle") return directed_cycle(static_cast<std::size_t>(parse_int_param(params, "n")));
    if (kind == "torus_2d") return torus_walk(static_cast<std::size_t>(parse_int_param(params, "n")));
    if (kind == "two_state") return two_state(parse_double_param(params, "eps"));
    if (kind == "kklv_tree") return layered_tree_walk(layered_tree(static_cast<int>(parse_int_param(params, "depth"))));
    if (kind == "weighted_graph") {
        auto it = params.find("file");
        if (it == params.end()) {
            throw std::invalid_argument("weighted_graph needs file=PATH with a weighted_edges chain file");
        }
        return read_chain_file(it->second);
    }
    throw ValidationError("unknown chain kind: " + kind);
}

MarkovChain make_zoo_chain(const std::string& name) {
    const auto open = name.find('(');
    if (open == std::string::npos || name.back() != ')') {
        throw ValidationError("chain name must look like kind(arg): " + name);
    }
    const std::string kind = name.substr(0, open);
    const std::string arg = name.substr(open + 1, name.size() - open - 2);
    ZooParams params;
    if (kind == "two_state") params["eps"] = arg;
    else if (kind == "kklv_tree") params["depth"] = arg;
    else params["n"] = arg;
    return make_zoo_chain(kind, params);
}

namespace {

// N_0 = 1, N_i = 2^(2^i); the tree fan-out at depth i is N_i + 1.
std::uint64_t tree_level_cap(int i) {
    if (i == 0) return 1;
    return std::uint64_t{1} << (std::uint64_t{1} << i);
}

} // namespace

LayeredTree layered_tree(int depth) {
    if (depth < 1 || depth > 4) {
        throw CapacityError("layered tree: depth " + std::to_string(depth) + " outside [1,4]");
    }
    LayeredTree tree;
    tree.depth = depth;
    tree.node_depth.push_back(0);
    tree.parent.push_back(0);
    std::vector<std::size_t> frontier{0};
    for (int level = 0; level < depth; ++level) {
        const std::uint64_t fanout = tree_level_cap(level) + 1;
        const std::uint64_t mult = std::uint64_t{1} << level;
        std::vector<std::size_t> next;
        for (std::size_t node : frontier) {
            for (std::uint64_t c = 0; c < fanout; ++c) {
                const std::size_t child = tree.node_depth.size();
                tree.node_depth.push_back(level + 1);
                tree.parent.push_back(node);
                tree.graph.edges.push_back({node, child, mult});
                next.push_back(child);
            }
        }
        frontier = std::move(next);
    }
    tree.graph.n = tree.node_depth.size();
    tree.children.assign(tree.graph.n, {});
    for (std::size_t v = 1; v < tree.graph.n; ++v) tree.children[tree.parent[v]].push_back(v);
    return tree;
}

MarkovChain layered_tree_walk(const LayeredTree& tree) { return weighted_graph_walk(tree.graph); }

FiniteMetric layered_tree_commute_metric(const LayeredTree& tree) {
    const std::size_t n = tree.graph.n;
    const double total = static_cast<double>(total_multiplicity(tree.graph));
    auto edge_up = [&](int child_depth) {
        // Edge between depths child_depth-1 and child_depth.
        return 2.0 * total * std::ldexp(1.0, -(child_depth - 1));
    };
    Matrix d(n, n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            std::size_t a = x, b = y;
            double sum = 0.0;
            while (tree.node_depth[a] > tree.node_depth[b]) {
                sum += edge_up(tree.node_depth[a]);
                a = tree.parent[a];
            }
            while (tree.node_depth[b] > tree.node_depth[a]) {
                sum += edge_up(tree.node_depth[b]);
                b = tree.parent[b];
            }
            while (a != b) {
                sum += edge_up(tree.node_depth[a]) + edge_up(tree.node_depth[b]);
                a = tree.parent[a];
                b = tree.parent[b];
            }
            d(x, y) = sum;
            d(y, x) = sum;
        }
    }
    FiniteMetric metric{std::move(d)};
    validate_metric(metric);
    return metric;
}

namespace {

std::size_t ancestor_at_depth(const LayeredTree& tree, std::size_t node, int depth) {
    while (tree.node_depth[node] > depth) node = tree.parent[node];
    return node;
}

std::size_t lca(const LayeredTree& tree, std::size_t a, std::size_t b) {
    while (tree.node_depth[a] > tree.node_depth[b]) a = tree.parent[a];
    while (tree.node_depth[b] > tree.node_depth[a]) b = tree.parent[b];
    while (a != b) {
        a = tree.parent[a];
        b = tree.parent[b];
    }
    return a;
}

} // namespace

std::vector<BoundReport> tree_commute_checks(const LayeredTree& tree,
                                             std::uint64_t sample_pairs, std::uint64_t seed) {
    if (tree.depth > 3) throw CapacityError("tree commute checks: exact solves limited to depth <= 3");
    const MarkovChain walk = layered_tree_walk(tree);
    const HittingMatrix h = expected_hitting_times(walk);
    const FiniteMetric solved = commute_distance(h);
    const FiniteMetric formula = layered_tree_commute_metric(tree);
    const double total = static_cast<double>(total_multiplicity(tree.graph));
    const std::size_t n = tree.graph.n;

    std::vector<BoundReport> out;

    double worst_edge = 0.0;
    for (const auto& e : tree.graph.edges) {
        const int parent_depth = std::min(tree.node_depth[e.u], tree.node_depth[e.v]);
        const double expect = 2.0 * total * std::ldexp(1.0, -parent_depth);
        worst_edge = std::max(worst_edge, std::fabs(solved.distance(e.u, e.v) - expect) / expect);
    }
    out.push_back(make_report("tree-edge-commute", worst_edge, 1e-6, worst_edge <= 1e-6,
                              "max relative edge error; depth " + std::to_string(tree.depth)));

    // Pair list: exhaustive when small, else seeded sample.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const std::uint64_t all = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (all <= sample_pairs) {
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
        }
    } else {
        SplitMix64 rng(seed);
        while (pairs.size() < sample_pairs) {
            const std::size_t x = static_cast<std::size_t>(rng.below(n));
            const std::size_t y = static_cast<std::size_t>(rng.below(n));
            if (x != y) pairs.emplace_back(std::min(x, y), std::max(x, y));
        }
    }

    double worst_path = 0.0;
    double min_sandwich_slack = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : pairs) {
        const double ds = solved.distance(x, y);
        const double df = formula.distance(x, y);
        worst_path = std::max(worst_path, std::fabs(ds - df) / df);
        const int i = tree.node_depth[lca(tree, x, y)];
        const double lo = total * std::ldexp(1.0, 1 - i);
        const double hi = total * std::ldexp(1.0, 3 - i);
        min_sandwich_slack = std::min({min_sandwich_slack, ds - lo, hi - ds});
    }
    out.push_back(make_report("tree-path-additivity", worst_path, 1e-6, worst_path <= 1e-6,
                              "max relative gap over " + std::to_string(pairs.size()) + " pairs"));
    const double sandwich_eps = 1e-6 * total;
    out.push_back(make_report("distance-depth", -min_sandwich_slack, sandwich_eps,
                              min_sandwich_slack >= -sandwich_eps,
                              "ancestor-depth sandwich; min slack over " +
                                  std::to_string(pairs.size()) + " pairs"));
    return out;
}

std::vector<std::vector<std::size_t>> shifted_prefix_nets(const LayeredTree& tree) {
    // S_j = all vertices of depth <= j.
    std::vector<std::vector<std::size_t>> prefixes(tree.depth + 1);
    for (std::size_t v = 0; v < tree.graph.n; ++v) {
        for (int j = tree.node_depth[v]; j <= tree.depth; ++j) prefixes[j].push_back(v);
    }
    std::vector<std::vector<std::size_t>> nets;
    for (int i = 0; i <= tree.depth + 3; ++i) {
        const int j = std::max(0, i - 3);
        nets.push_back(prefixes[std::min(j, tree.depth)]);
    }
    return nets;
}

double adversarial_net_certificate(const LayeredTree& tree, const FiniteMetric& metric,
                                   const std::vector<std::vector<std::size_t>>& nets) {
    const std::size_t n = tree.graph.n;
    for (std::size_t i = 0; i < nets.size(); ++i) {
        if (nets[i].empty()) throw ValidationError("net " + std::to_string(i) + " is empty");
        const std::uint64_t cap = partition_cardinality_cap(i);
        if (nets[i].size() > cap) {
            throw ValidationError("net " + std::to_string(i) + " has " +
                                  std::to_string(nets[i].size()) + " points, cap " +
                                  std::to_string(cap));
        }
        for (std::size_t v : nets[i]) {
            if (v >= n) throw ValidationError("net point out of range");
        }
    }

    // Descend away from each net in turn: the child picked at depth i must
    // head a subtree disjoint from M_i. The fan-out exceeds the net cap, so
    // such a child always exists.
    std::size_t node = 0;
    for (int i = 0; i < tree.depth; ++i) {
        std::vector<bool> blocked(tree.children[node].size(), false);
        if (static_cast<std::size_t>(i) < nets.size()) {
            for (std::size_t m : nets[i]) {
                if (tree.node_depth[m] < i + 1) continue;
                if (ancestor_at_depth(tree, m, i) != node) continue;
                const std::size_t child = ancestor_at_depth(tree, m, i + 1);
                for (std::size_t c = 0; c < tree.children[node].size(); ++c) {
                    if (tree.children[node][c] == child) blocked[c] = true;
                }
            }
        }
        std::size_t next = n;
        for (std::size_t c = 0; c < tree.children[node].size(); ++c) {
            if (!blocked[c]) {
                next = tree.children[node][c];
                break;
            }
        }
        if (next == n) throw std::logic_error("adversarial descent: every child blocked");
        node = next;
    }

    double value = 0.0;
    for (std::size_t i = 0; i < nets.size(); ++i) {
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t m : nets[i]) dist = std::min(dist, metric.distance(node, m));
        value += std::ldexp(1.0, static_cast<int>(i)) * dist;
    }
    return value;
}

TreeGammaRow tree_gamma_scaling_row(int depth) {
    const LayeredTree tree = layered_tree(depth);
    if (depth > 3) throw CapacityError("tree gamma scaling: depth <= 3");
    const FiniteMetric metric = layered_tree_commute_metric(tree);
    const FiniteMetric root = sqrt_metric(metric);
    const double total = static_cast<double>(total_multiplicity(tree.graph));

    TreeGammaRow row;
    row.depth = depth;
    row.total_multiplicity = total;
    if (tree.graph.n <= 6) {
        row.gamma1_upper = row.gamma1_lower = exact_gamma(metric, 1).value;
        row.gamma2_sqrt_upper = row.gamma2_sqrt_lower = exact_gamma(root, 2).value;
    } else {
        row.gamma1_upper = greedy_gamma_upper(metric, 1).value;
        row.gamma1_lower = gamma_lower_packing(metric, 1).value;
        row.gamma2_sqrt_upper = greedy_gamma_upper(root, 2).value;
        row.gamma2_sqrt_lower = gamma_lower_packing(root, 2).value;
    }
    row.adversarial_value = adversarial_net_certificate(tree, metric, shifted_prefix_nets(tree));
    row.adversarial_target = 2.0 * total * depth;
    return row;
}

} // namespace covchain
