#pragma once

#include "covchain/chain_core.hpp"
#include "covchain/report.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace covchain {

// Cardinality budget per level: 1 at level 0, then 2^(2^n), saturating at
// the 64-bit ceiling (any realistic point set fits from level 6 on).
std::uint64_t partition_cardinality_cap(std::size_t level);

using PartitionBlock = std::vector<std::size_t>;
using Partition = std::vector<PartitionBlock>;

// Nested partitions of {0, ..., n-1}: level 0 is the whole set, each level
// refines the previous one, level k has at most partition_cardinality_cap(k)
// blocks, and the last level is all singletons.
struct AdmissibleSequence {
    std::vector<Partition> levels;
};

void validate_admissible_sequence(const AdmissibleSequence& seq, std::size_t point_count);

// Point subsets M_0, M_1, ... with |M_i| <= partition_cardinality_cap(i).
// Levels past the end of the list are read as covering every point.
struct NetSequence {
    std::vector<std::vector<std::size_t>> nets;
};

void validate_net_sequence(const NetSequence& nets, std::size_t point_count);

double set_diameter(const Matrix& d, const PartitionBlock& block);

// sup_x sum_n 2^(n/alpha) diam(A_n(x)); alpha is 1 or 2.
double functional_value(const FiniteMetric& metric, const AdmissibleSequence& seq, int alpha);

// sup_x sum_i 2^i d(x, M_i).
double net_functional_value(const FiniteMetric& metric, const NetSequence& nets);

struct GammaEstimate {
    int alpha = 1;
    double value = 0.0;
    enum class Kind { UpperGreedy, Dudley, LowerPacking, ExactOracle } kind = Kind::UpperGreedy;
    std::optional<AdmissibleSequence> witness;
};

// Farthest-point traversal from point 0, distance ties broken by lowest
// index; returns all points in traversal order.
std::vector<std::size_t> farthest_point_order(const FiniteMetric& metric);

// Builds nets along the farthest-point order, converts them to Voronoi
// partitions, and stacks running common refinements two levels late so the
// cardinality caps hold. The returned value is achieved by the witness.
GammaEstimate greedy_gamma_upper(const FiniteMetric& metric, int alpha);

// Best covering radius with partition_cardinality_cap(level) centers:
// exhaustive for <= 12 points with cap <= 4 (and whenever a single center
// or a full cover settles it), greedy 2-approximation otherwise.
double covering_radius(const FiniteMetric& metric, std::size_t level);

// Entropy-sum upper estimate sum_n 2^(n/alpha) e_n.
GammaEstimate dudley_bound(const FiniteMetric& metric, int alpha);

// max_n 2^(n/alpha) e_n with certified lower bounds on each e_n; never
// exceeds the exact functional.
GammaEstimate gamma_lower_packing(const FiniteMetric& metric, int alpha);

// Exhaustive minimization over refinement chains; point count <= 6.
GammaEstimate exact_gamma(const FiniteMetric& metric, int alpha);

// Hard part: a certified lower estimate of the alpha=1 functional on d never
// exceeds the squared upper estimate of the alpha=2 functional on sqrt(d).
// Soft part: that squared value over (lower gamma_1 * ln ln |M|), reported in
// the context. Needs at least 3 points.
BoundReport loglog_comparison(const FiniteMetric& metric);

} // namespace covchain
