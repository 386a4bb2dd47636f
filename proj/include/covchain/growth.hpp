#pragma once

#include "covchain/chain_core.hpp"
#include "covchain/cover_time.hpp"
#include "covchain/report.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace covchain {

// Set functional evaluated on subsets of the metric's point set.
using SetFunctional = std::function<double(const std::vector<std::size_t>&)>;

// One candidate growth step: m sets at scale `a` with ratio r and level n.
// Hypotheses (diam of the union <= r*a, pairwise distance >= a, each diam
// <= a/r) are verified before the functional inequality
//   F(union) >= a * 2^n + min_i F(H_i)
// is tested; the report is honest, a false instance fails rather than throws.
struct GrowthInstance {
    double ratio = 16.0; // r
    int level = 0;       // n
    double scale = 0.0;  // a
    std::vector<std::vector<std::size_t>> sets;
};

BoundReport check_growth_instance(const SetFunctional& functional, const FiniteMetric& metric,
                                  const GrowthInstance& instance);

struct DirectedGraph {
    std::size_t vertex_count = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges; // no self-loops
};

// Independent set of size >= #SCCs / L where L is the longest path length
// (counted in vertices) of the condensation: color by longest-path layer,
// keep the majority color, one representative per strongly connected
// component. Independence is asserted before returning.
std::vector<std::size_t> longest_path_bound_independent_set(const DirectedGraph& graph);

// For reversible chains the hitting-time sum around any closed cycle reads
// the same in both directions. Non-reversible input throws unless
// `diagnostic`, which reports the directed gap instead.
BoundReport cycle_identity_check(const MarkovChain& chain, const HittingMatrix& hitting,
                                 const std::vector<std::size_t>& cycle, double tol = 1e-9,
                                 bool diagnostic = false);

// Under diam(points) <= 16 a and pairwise commute distance >= a on a
// reversible chain, keeps at least |points|/33 points whose pairwise
// one-way hitting times all reach a/4. Both guarantees are checked before
// returning; reversibility is the caller's obligation.
std::vector<std::size_t> one_way_sparsify(const HittingMatrix& hitting, const FiniteMetric& metric,
                                          const std::vector<std::size_t>& points, double scale);

// Full growth step at ratio 16: sparsifies one representative per group,
// transfers the separation to whole groups (a/4 - a/16 - a/16 = a/8), and
// checks cov_minus(union of kept groups) >= (a/8) ln|kept| + min cov_minus.
BoundReport growth_step_verify(const MarkovChain& chain,
                               const std::vector<std::vector<std::size_t>>& groups,
                               const FiniteMetric& metric, double scale,
                               const CoverOptions& options = {});

} // namespace covchain
