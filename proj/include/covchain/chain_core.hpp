#pragma once

#include "covchain/matrix.hpp"
#include "covchain/report.hpp"
#include "covchain/rng.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace covchain {

inline constexpr std::size_t kDefaultMaxStates = 5000;

// Finite irreducible chain given by its row-stochastic transition matrix.
// labels are optional display names, one per state when present.
struct MarkovChain {
    std::size_t n = 0;
    Matrix transition;
    std::vector<std::string> labels;
};

MarkovChain make_markov_chain(Matrix transition, std::vector<std::string> labels = {});

// Row sums within 1e-12 of one, entries within [0,1], strong connectivity.
// Throws ValidationError naming the offending row or unreachable state.
void validate_markov_chain(const MarkovChain& chain);

struct StationaryDistribution {
    std::vector<double> pi;
};

// h(x, y) = expected steps from x until the first visit to y; zero diagonal.
struct HittingMatrix {
    Matrix expected_steps;
};

// Symmetric matrix with zero diagonal satisfying the triangle inequality.
struct FiniteMetric {
    Matrix distance;
};

// Checks metric axioms; tolerance is scaled by the largest entry.
void validate_metric(const FiniteMetric& metric, double tol = 1e-9);

StationaryDistribution stationary_distribution(const MarkovChain& chain);

HittingMatrix expected_hitting_times(const MarkovChain& chain,
                                     std::size_t max_states = kDefaultMaxStates);

// Commute distance d(x, y) = h(x, y) + h(y, x).
FiniteMetric commute_distance(const HittingMatrix& hitting);

// Entry-wise square root; concavity of sqrt preserves the triangle inequality.
FiniteMetric sqrt_metric(const FiniteMetric& metric);

bool is_reversible(const MarkovChain& chain, const StationaryDistribution& pi,
                   double tol = 1e-9);

// Chance of reaching `target` before the first return to `from`, by an
// absorbing-chain solve.
double escape_probability(const MarkovChain& chain, std::size_t from, std::size_t target);

// Expected first return time to `state`.
double expected_first_return(const MarkovChain& chain, const HittingMatrix& hitting,
                             std::size_t state);

// Verifies pi(x) * E_x[first return to x] = 1 for every state and
// 1/pi(x) <= d(x, y) for every pair; reports the worst violation.
BoundReport return_time_identity_check(const MarkovChain& chain, double tol = 1e-9);

// Per-row alias samplers for simulation.
class ChainSampler {
public:
    explicit ChainSampler(const MarkovChain& chain);
    std::size_t step(std::size_t state, SplitMix64& rng) const {
        return rows_[state].sample(rng);
    }

private:
    std::vector<AliasTable> rows_;
};

} // namespace covchain
