#include "covchain/growth.hpp"

#include "covchain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace covchain {

namespace {

double min_cross_distance(const Matrix& d, const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x : a) {
        for (std::size_t y : b) best = std::min(best, d(x, y));
    }
    return best;
}

std::vector<std::size_t> flatten_disjoint(const std::vector<std::vector<std::size_t>>& sets,
                                          std::size_t point_count) {
    std::vector<std::size_t> all;
    for (const auto& s : sets) {
        if (s.empty()) throw std::invalid_argument("sets must be nonempty");
        for (std::size_t p : s) {
            if (p >= point_count) throw std::invalid_argument("set point out of range");
        }
        all.insert(all.end(), s.begin(), s.end());
    }
    std::vector<std::size_t> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("sets must be disjoint");
    }
    return all;
}

} // namespace

BoundReport check_growth_instance(const SetFunctional& functional, const FiniteMetric& metric,
                                  const GrowthInstance& instance) {
    if (!(instance.ratio > 1.0)) throw std::invalid_argument("growth ratio must exceed 1");
    if (!(instance.scale > 0.0)) throw std::invalid_argument("growth scale must be positive");
    if (instance.level < 0) throw std::invalid_argument("growth level must be nonnegative");
    if (instance.sets.empty()) throw std::invalid_argument("need at least one set");
    const Matrix& d = metric.distance;
    const std::vector<std::size_t> united = flatten_disjoint(instance.sets, d.rows());

    const double a = instance.scale;
    const double r = instance.ratio;
    const double eps = 1e-9 * std::max(1.0, d.max_abs());

    const double union_diam = set_diameter(d, united);
    if (union_diam > r * a + eps) {
        throw PreconditionError("union diameter " + format_sig17(union_diam) + " exceeds r*a = " +
                                format_sig17(r * a));
    }
    for (std::size_t i = 0; i < instance.sets.size(); ++i) {
        const double diam = set_diameter(d, instance.sets[i]);
        if (diam > a / r + eps) {
            throw PreconditionError("set " + std::to_string(i) + " diameter " +
                                    format_sig17(diam) + " exceeds a/r = " + format_sig17(a / r));
        }
        for (std::size_t j = i + 1; j < instance.sets.size(); ++j) {
            const double cross = min_cross_distance(d, instance.sets[i], instance.sets[j]);
            if (cross + eps < a) {
                throw PreconditionError("sets " + std::to_string(i) + " and " + std::to_string(j) +
                                        " are only " + format_sig17(cross) + " apart, need " +
                                        format_sig17(a));
            }
        }
    }

    double min_part = std::numeric_limits<double>::infinity();
    for (const auto& s : instance.sets) min_part = std::min(min_part, functional(s));
    const double lhs = a * std::ldexp(1.0, instance.level) + min_part;
    const double rhs = functional(united);
    return make_report("growth-def", lhs, rhs, lhs <= rhs + 1e-6,
                       "m=" + std::to_string(instance.sets.size()) + "; n=" +
                           std::to_string(instance.level) + "; a=" + format_sig17(a) +
                           "; r=" + format_sig17(r));
}

std::vector<std::size_t> longest_path_bound_independent_set(const DirectedGraph& graph) {
    const std::size_t n = graph.vertex_count;
    if (n == 0) throw ValidationError("independent set: empty graph");
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [u, v] : graph.edges) {
        if (u >= n || v >= n) throw ValidationError("independent set: edge endpoint out of range");
        if (u == v) throw ValidationError("independent set: self-loop at " + std::to_string(u));
        adj[u].push_back(v);
    }

    // Tarjan, iterative. Components come out in reverse topological order.
    std::vector<std::size_t> comp(n, n), low(n, 0), num(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 1;
    std::size_t comp_count = 0;
    struct Frame {
        std::size_t v;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (num[root] != 0) continue;
        std::vector<Frame> frames{{root, 0}};
        num[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < adj[f.v].size()) {
                const std::size_t w = adj[f.v][f.edge++];
                if (num[w] == 0) {
                    num[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], num[w]);
                }
            } else {
                if (low[f.v] == num[f.v]) {
                    while (true) {
                        const std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if (w == f.v) break;
                    }
                    ++comp_count;
                }
                const std::size_t v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }

    // comp ids are reverse-topological: every condensation edge goes from a
    // higher id to a lower one. Longest-path layer in vertex count.
    std::vector<std::size_t> layer(comp_count, 1);
    std::vector<std::vector<std::size_t>> comp_edges(comp_count);
    for (const auto& [u, v] : graph.edges) {
        if (comp[u] != comp[v]) comp_edges[comp[u]].push_back(comp[v]);
    }
    for (std::size_t c = comp_count; c-- > 0;) {
        for (std::size_t w : comp_edges[c]) layer[w] = std::max(layer[w], layer[c] + 1);
    }

    std::size_t longest = 0;
    for (std::size_t c = 0; c < comp_count; ++c) longest = std::max(longest, layer[c]);
    std::vector<std::size_t> layer_size(longest + 1, 0);
    for (std::size_t c = 0; c < comp_count; ++c) ++layer_size[layer[c]];
    std::size_t best_layer = 1;
    for (std::size_t l = 1; l <= longest; ++l) {
        if (layer_size[l] > layer_size[best_layer]) best_layer = l;
    }

    // Lowest-index representative per component in the chosen layer.
    std::vector<std::size_t> rep(comp_count, n);
    for (std::size_t v = 0; v < n; ++v) {
        if (layer[comp[v]] == best_layer && v < rep[comp[v]]) rep[comp[v]] = v;
    }
    std::vector<std::size_t> chosen;
    for (std::size_t c = 0; c < comp_count; ++c) {
        if (rep[c] != n) chosen.push_back(rep[c]);
    }
    std::sort(chosen.begin(), chosen.end());

    std::vector<bool> picked(n, false);
    for (std::size_t v : chosen) picked[v] = true;
    for (const auto& [u, v] : graph.edges) {
        if (picked[u] && picked[v]) {
            throw std::logic_error("independent set construction kept edge " + std::to_string(u) +
                                   " -> " + std::to_string(v));
        }
    }
    return chosen;
}

BoundReport cycle_identity_check(const MarkovChain& chain, const HittingMatrix& hitting,
                                 const std::vector<std::size_t>& cycle, double tol,
                                 bool diagnostic) {
    if (cycle.size() < 2) throw std::invalid_argument("cycle needs at least two states");
    for (std::size_t s : cycle) {
        if (s >= chain.n) throw std::invalid_argument("cycle state out of range");
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        for (std::size_t j = i + 1; j < cycle.size(); ++j) {
            if (cycle[i] == cycle[j]) throw std::invalid_argument("cycle states must be distinct");
        }
    }
    const auto pi = stationary_distribution(chain);
    const bool reversible = is_reversible(chain, pi);
    if (!reversible && !diagnostic) {
        throw PreconditionError("cycle identity requires a reversible chain");
    }

    const Matrix& h = hitting.expected_steps;
    const std::size_t m = cycle.size();
    double forward = 0.0, backward = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t a = cycle[i];
        const std::size_t b = cycle[(i + 1) % m];
        forward += h(a, b);
        backward += h(b, a);
    }
    const double eps = tol * std::max(1.0, h.max_abs());
    const bool passed = reversible && std::fabs(forward - backward) <= eps;
    return make_report("cycle-identity", forward, backward, passed,
                       std::string(reversible ? "reversible" : "non-reversible (diagnostic)") +
                           "; cycle length " + std::to_string(m) + "; tol " + format_sig17(eps));
}

std::vector<std::size_t> one_way_sparsify(const HittingMatrix& hitting, const FiniteMetric& metric,
                                          const std::vector<std::size_t>& points, double scale) {
    if (points.empty()) throw std::invalid_argument("sparsify: empty point set");
    if (!(scale > 0.0)) throw std::invalid_argument("sparsify: scale must be positive");
    const Matrix& d = metric.distance;
    const Matrix& h = hitting.expected_steps;
    std::vector<std::size_t> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("sparsify: duplicate points");
    }
    if (sorted.back() >= d.rows()) throw std::invalid_argument("sparsify: point out of range");

    const double a = scale;
    const double eps = 1e-9 * std::max(1.0, d.max_abs());
    const double diam = set_diameter(d, sorted);
    if (diam > 16.0 * a + eps) {
        throw PreconditionError("sparsify: diameter " + format_sig17(diam) + " exceeds 16a = " +
                                format_sig17(16.0 * a));
    }
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = i + 1; j < sorted.size(); ++j) {
            if (d(sorted[i], sorted[j]) + eps < a) {
                throw PreconditionError("sparsify: states " + std::to_string(sorted[i]) + " and " +
                                        std::to_string(sorted[j]) + " are only " +
                                        format_sig17(d(sorted[i], sorted[j])) + " apart, need " +
                                        format_sig17(a));
            }
        }
    }

    // Edge wherever one direction is fast. Around any directed cycle the
    // hitting sums agree for reversible chains, so a cycle of fast edges
    // would close a short cycle in commute distance; with the pairwise
    // separation that caps condensation path lengths at 33 vertices.
    DirectedGraph graph;
    graph.vertex_count = sorted.size();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = 0; j < sorted.size(); ++j) {
            if (i != j && h(sorted[i], sorted[j]) <= a / 4.0) graph.edges.emplace_back(i, j);
        }
    }
    const std::vector<std::size_t> kept_local = longest_path_bound_independent_set(graph);

    std::vector<std::size_t> kept;
    kept.reserve(kept_local.size());
    for (std::size_t i : kept_local) kept.push_back(sorted[i]);

    if (33 * kept.size() < sorted.size()) {
        throw std::logic_error("sparsify: kept " + std::to_string(kept.size()) + " of " +
                               std::to_string(sorted.size()) +
                               " points, below the guaranteed 1/33 fraction");
    }
    for (std::size_t x : kept) {
        for (std::size_t y : kept) {
            if (x != y && h(x, y) < a / 4.0 - eps) {
                throw std::logic_error("sparsify: kept pair with fast one-way hitting time");
            }
        }
    }
    return kept;
}

BoundReport growth_step_verify(const MarkovChain& chain,
                               const std::vector<std::vector<std::size_t>>& groups,
                               const FiniteMetric& metric, double scale,
                               const CoverOptions& options) {
    if (groups.size() < 2) throw std::invalid_argument("growth step: need at least two groups");
    if (!(scale > 0.0)) throw std::invalid_argument("growth step: scale must be positive");
    const Matrix& d = metric.distance;
    const std::vector<std::size_t> united = flatten_disjoint(groups, d.rows());
    const double a = scale;
    const double eps = 1e-9 * std::max(1.0, d.max_abs());

    const double diam = set_diameter(d, united);
    if (diam > 16.0 * a + eps) {
        throw PreconditionError("growth step: union diameter " + format_sig17(diam) +
                                " exceeds 16a = " + format_sig17(16.0 * a));
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double gd = set_diameter(d, groups[i]);
        if (gd > a / 16.0 + eps) {
            throw PreconditionError("growth step: group " + std::to_string(i) + " diameter " +
                                    format_sig17(gd) + " exceeds a/16 = " + format_sig17(a / 16.0));
        }
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            const double cross = min_cross_distance(d, groups[i], groups[j]);
            if (cross + eps < a) {
                throw PreconditionError("growth step: groups " + std::to_string(i) + " and " +
                                        std::to_string(j) + " are only " + format_sig17(cross) +
                                        " apart, need " + format_sig17(a));
            }
        }
    }

    const HittingMatrix h = expected_hitting_times(chain);

    // One representative per group; the corollary hypotheses hold for them,
    // so a 1/33 fraction survives with one-way separation a/4.
    std::vector<std::size_t> reps;
    for (const auto& g : groups) reps.push_back(*std::min_element(g.begin(), g.end()));
    const std::vector<std::size_t> kept_reps = one_way_sparsify(h, metric, reps, a);

    std::vector<std::size_t> kept_groups;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (std::find(kept_reps.begin(), kept_reps.end(),
                      *std::min_element(groups[i].begin(), groups[i].end())) != kept_reps.end()) {
            kept_groups.push_back(i);
        }
    }

    // Separation transfers from representatives to whole groups through the
    // group diameters: a/4 - a/16 - a/16 = a/8.
    const double transferred = a / 8.0;
    for (std::size_t i : kept_groups) {
        for (std::size_t j : kept_groups) {
            if (i == j) continue;
            for (std::size_t x : groups[i]) {
                for (std::size_t y : groups[j]) {
                    if (h.expected_steps(x, y) < transferred - eps) {
                        throw std::logic_error("growth step: transferred separation fails from " +
                                               std::to_string(x) + " to " + std::to_string(y));
                    }
                }
            }
        }
    }

    std::vector<std::size_t> kept_union;
    double min_cover = std::numeric_limits<double>::infinity();
    for (std::size_t i : kept_groups) {
        kept_union.insert(kept_union.end(), groups[i].begin(), groups[i].end());
        min_cover = std::min(min_cover, cov_minus(chain, groups[i], options));
    }
    const double lhs = transferred * std::log(static_cast<double>(kept_groups.size())) + min_cover;
    const double rhs = cov_minus(chain, kept_union, options);
    return make_report("growth-step", lhs, rhs, lhs <= rhs + 1e-6,
                       "groups " + std::to_string(groups.size()) + "; kept " +
                           std::to_string(kept_groups.size()) + "; a=" + format_sig17(a) +
                           "; log term uses the measured kept count");
}

} // namespace covchain
