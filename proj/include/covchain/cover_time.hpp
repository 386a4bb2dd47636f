#pragma once

#include "covchain/chain_core.hpp"
#include "covchain/chaining.hpp"
#include "covchain/report.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace covchain {

inline constexpr std::size_t kDefaultExactCoverCap = 20;

struct CoverTimeEstimate {
    double value = 0.0;
    enum class Method { ExactDp, MonteCarlo } method = Method::ExactDp;
    double ci_halfwidth = 0.0; // 3-sigma half width; infinite below 2 trials
    std::uint64_t trials = 0;
    std::optional<std::uint64_t> seed;
};

// Expected time to visit all of `subset` from every start, by dynamic
// programming over (state, visited-subset) with one linear solve per
// visited-set; |subset| <= cap and the table must fit in memory.
std::vector<double> exact_cover_all_starts(const MarkovChain& chain,
                                           const std::vector<std::size_t>& subset,
                                           std::size_t cap = kDefaultExactCoverCap);

CoverTimeEstimate exact_cover_expectation(const MarkovChain& chain,
                                          const std::vector<std::size_t>& subset,
                                          std::size_t start,
                                          std::size_t cap = kDefaultExactCoverCap);

CoverTimeEstimate mc_cover_time(const MarkovChain& chain, const std::vector<std::size_t>& subset,
                                std::size_t start, std::uint64_t trials, std::uint64_t seed);

struct CoverOptions {
    std::size_t exact_cap = kDefaultExactCoverCap;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0x5eed;
};

// Extremes of the expected cover time over starts inside the subset; exact
// when the subset fits the DP cap, seeded Monte Carlo otherwise.
double cov_minus(const MarkovChain& chain, const std::vector<std::size_t>& subset,
                 const CoverOptions& options = {});
double cov_plus(const MarkovChain& chain, const std::vector<std::size_t>& subset,
                const CoverOptions& options = {});

// (lower, upper) bracket of cov_plus from extreme pairwise hitting times:
// ln|A| * min and (1 + ln|A|) * max; (0, 0) for singletons.
std::pair<double, double> matthews_bounds(const HittingMatrix& hitting,
                                          const std::vector<std::size_t>& subset);

// Harmonic-sum lower bound a * (1 + 1/2 + ... + 1/(|A|-1)) with a the
// minimum pairwise hitting time inside the subset.
double matthews_harmonic_lower(const HittingMatrix& hitting,
                               const std::vector<std::size_t>& subset);

// For groups pairwise separated by hitting time at least `separation`:
//   cov_minus(union) >= separation * ln(m) + min_i cov_minus(H_i),
// all cover expectations exact. Separation is checked first.
BoundReport matthews_refined_lower(const MarkovChain& chain,
                                   const std::vector<std::vector<std::size_t>>& groups,
                                   double separation, const CoverOptions& options = {});

// Restart bound E_z[T_cov(A)] <= k / (pi(z) * P_z(T_cov(A) <= T^k(z))) with
// the probability estimated by simulation (upper-confidence adjusted), plus
// the k-th return identity E_z[T^k(z)] = k / pi(z) within its CI.
BoundReport bdnp_restart_check(const MarkovChain& chain, const std::vector<std::size_t>& subset,
                               std::size_t z, std::uint64_t k, std::uint64_t trials,
                               std::uint64_t seed);

// Number of visits to y during one excursion from x follows
//   P_x(N >= r + 1) = p_xy (1 - p_yx)^r,  r = 0, 1, ...
// checked exactly against independent absorbing solves with a visit counter,
// plus a seeded smoke simulation of the first tail value.
BoundReport excursion_visit_law(const MarkovChain& chain, std::size_t x, std::size_t y,
                                std::uint64_t trials, std::uint64_t seed,
                                std::size_t r_max = 20);

// Lower-tail estimate for visits to y before the k-th return to x:
//   P_x(N_{T^k(x)}(y) <= (1-eps) k pi(y)/pi(x)) <= exp(-eps^2 k / (4 pi(x) d(x,y))).
BoundReport kklv_tail_check(const MarkovChain& chain, std::size_t x, std::size_t y,
                            std::uint64_t k, double eps, std::uint64_t trials,
                            std::uint64_t seed);

// Race estimate: for (l-1)/pi(y) < (k-1)/pi(x),
//   P_z(T^l(y) > T^k(x)) <= exp(-((k-1)/pi(x) - (l-1)/pi(y))^2 / (4 d(x,y) (k-1)/pi(x))).
BoundReport key_estimate_check(const MarkovChain& chain, std::size_t z, std::size_t x,
                               std::size_t y, std::uint64_t k, std::uint64_t l,
                               std::uint64_t trials, std::uint64_t seed);

// Certificate extracted from an admissible sequence over the subset (blocks
// index positions of the sorted subset): with
//   r0 = sup_p sum_n 2^(n/2) sqrt(diam(A_n(p)))  and
//   k0 = floor(34 pi(z) r0^2) + 1,
// checks P_z(T_cov <= T^{k0}(z)) >= 7/8 by simulation and the exact cover
// expectation against (8/7) k0 / pi(z) and 40 r0^2.
BoundReport chaining_cover_certificate(const MarkovChain& chain,
                                       const std::vector<std::size_t>& subset, std::size_t z,
                                       const AdmissibleSequence& seq, std::uint64_t trials,
                                       std::uint64_t seed);

struct TrajectoryStats {
    std::vector<std::uint64_t> visit_counts; // over steps 0 .. horizon-1
    std::vector<std::uint64_t> return_times; // times of returns to the start
    std::uint64_t horizon = 0;
};

TrajectoryStats simulate_trajectory(const MarkovChain& chain, std::size_t start,
                                    std::uint64_t horizon, std::uint64_t seed);

} // namespace covchain
