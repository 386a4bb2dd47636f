#include "covchain/cover_time.hpp"

#include "covchain/errors.hpp"
#include "covchain/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace covchain {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> checked_subset(const MarkovChain& chain,
                                        std::vector<std::size_t> subset) {
    if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    if (subset.back() >= chain.n) throw std::invalid_argument("subset state out of range");
    return subset;
}

struct RunningStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v) {
        ++count;
        const double delta = v - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (v - mean);
    }
    // 3-sigma half width of the mean estimate.
    double ci3() const {
        if (count < 2) return kInf;
        const double var = m2 / static_cast<double>(count - 1);
        return 3.0 * std::sqrt(var / static_cast<double>(count));
    }
};

double binom_sigma(double p, std::uint64_t trials) {
    if (trials < 2) return kInf;
    // An extreme p estimate carries no spread information; fall back to the
    // worst-case Bernoulli variance instead of a zero-width interval.
    double var = p * (1.0 - p);
    if (!(var > 0.0)) var = 0.25;
    return std::sqrt(var / static_cast<double>(trials));
}

} // namespace

std::vector<double> exact_cover_all_starts(const MarkovChain& chain,
                                           const std::vector<std::size_t>& subset_in,
                                           std::size_t cap) {
    validate_markov_chain(chain);
    const auto subset = checked_subset(chain, subset_in);
    const std::size_t n = chain.n;
    const std::size_t m = subset.size();
    if (m > cap) {
        throw CapacityError("exact cover: subset of " + std::to_string(m) +
                            " exceeds cap " + std::to_string(cap) + "; use mc_cover_time");
    }
    const std::size_t masks = std::size_t{1} << m;
    if (masks * n > (std::size_t{1} << 24)) {
        throw CapacityError("exact cover: table of " + std::to_string(masks * n) +
                            " entries exceeds the memory budget");
    }

    std::vector<int> bit_of(n, -1);
    for (std::size_t i = 0; i < m; ++i) bit_of[subset[i]] = static_cast<int>(i);
    auto consistent = [&](std::size_t state, std::size_t mask) {
        return bit_of[state] < 0 || (mask >> bit_of[state]) & 1u;
    };

    // Visited sets in decreasing popcount; each solve only feeds on strictly
    // larger sets, which are already done.
    std::vector<std::vector<std::size_t>> by_popcount(m + 1);
    for (std::size_t mask = 0; mask < masks; ++mask) {
        by_popcount[std::popcount(mask)].push_back(mask);
    }

    const Matrix& p = chain.transition;
    std::vector<std::vector<double>> table(masks);
    table[masks - 1].assign(n, 0.0);

    std::vector<std::size_t> states;
    std::vector<std::size_t> pos(n);
    for (std::size_t pc = m; pc-- > 0;) {
        for (const std::size_t mask : by_popcount[pc]) {
            states.clear();
            for (std::size_t s = 0; s < n; ++s) {
                if (consistent(s, mask)) {
                    pos[s] = states.size();
                    states.push_back(s);
                }
            }
            const std::size_t dim = states.size();
            Matrix a(dim, dim, 0.0);
            std::vector<double> rhs(dim, 1.0);
            for (std::size_t i = 0; i < dim; ++i) {
                const std::size_t s = states[i];
                for (std::size_t t = 0; t < n; ++t) {
                    const double w = p(s, t);
                    if (w == 0.0) continue;
                    const std::size_t next =
                        bit_of[t] < 0 ? mask : mask | (std::size_t{1} << bit_of[t]);
                    if (next == mask) {
                        a(i, pos[t]) -= w;
                    } else {
                        rhs[i] += w * table[next][t];
                    }
                }
                a(i, i) += 1.0;
            }
            const std::vector<double> sol = solve_linear(std::move(a), rhs);
            table[mask].assign(n, 0.0);
            for (std::size_t i = 0; i < dim; ++i) table[mask][states[i]] = sol[i];
        }
    }

    std::vector<double> from_start(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t init = bit_of[s] < 0 ? 0 : std::size_t{1} << bit_of[s];
        from_start[s] = table[init][s];
    }
    return from_start;
}

CoverTimeEstimate exact_cover_expectation(const MarkovChain& chain,
                                          const std::vector<std::size_t>& subset,
                                          std::size_t start, std::size_t cap) {
    if (start >= chain.n) throw std::invalid_argument("start state out of range");
    const auto all = exact_cover_all_starts(chain, subset, cap);
    CoverTimeEstimate est;
    est.value = all[start];
    est.method = CoverTimeEstimate::Method::ExactDp;
    return est;
}

CoverTimeEstimate mc_cover_time(const MarkovChain& chain, const std::vector<std::size_t>& subset_in,
                                std::size_t start, std::uint64_t trials, std::uint64_t seed) {
    validate_markov_chain(chain);
    const auto subset = checked_subset(chain, subset_in);
    if (start >= chain.n) throw std::invalid_argument("start state out of range");
    if (trials == 0) throw std::invalid_argument("need at least one trial");

    const ChainSampler sampler(chain);
    std::vector<std::uint64_t> stamp(chain.n, 0);
    std::vector<bool> in_subset(chain.n, false);
    for (std::size_t s : subset) in_subset[s] = true;

    RunningStats stats;
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng(trial_seed(seed, t));
        const std::uint64_t tag = t + 1;
        std::size_t state = start;
        std::size_t remaining = subset.size();
        if (in_subset[state]) {
            stamp[state] = tag;
            --remaining;
        }
        std::uint64_t steps = 0;
        while (remaining > 0) {
            state = sampler.step(state, rng);
            ++steps;
            if (in_subset[state] && stamp[state] != tag) {
                stamp[state] = tag;
                --remaining;
            }
        }
        stats.add(static_cast<double>(steps));
    }

    CoverTimeEstimate est;
    est.value = stats.mean;
    est.method = CoverTimeEstimate::Method::MonteCarlo;
    est.ci_halfwidth = stats.ci3();
    est.trials = trials;
    est.seed = seed;
    return est;
}

namespace {

std::vector<double> cover_from_each_member(const MarkovChain& chain,
                                           const std::vector<std::size_t>& subset,
                                           const CoverOptions& options) {
    try {
        const auto all = exact_cover_all_starts(chain, subset, options.exact_cap);
        std::vector<double> out;
        out.reserve(subset.size());
        for (std::size_t s : subset) out.push_back(all[s]);
        return out;
    } catch (const CapacityError&) {
        std::vector<double> out;
        out.reserve(subset.size());
        for (std::size_t s : subset) {
            out.push_back(
                mc_cover_time(chain, subset, s, options.trials, mix64(options.seed + s)).value);
        }
        return out;
    }
}

} // namespace

double cov_minus(const MarkovChain& chain, const std::vector<std::size_t>& subset,
                 const CoverOptions& options) {
    const auto values = cover_from_each_member(chain, checked_subset(chain, subset), options);
    return *std::min_element(values.begin(), values.end());
}

double cov_plus(const MarkovChain& chain, const std::vector<std::size_t>& subset,
                const CoverOptions& options) {
    const auto values = cover_from_each_member(chain, checked_subset(chain, subset), options);
    return *std::max_element(values.begin(), values.end());
}

std::pair<double, double> matthews_bounds(const HittingMatrix& hitting,
                                          const std::vector<std::size_t>& subset) {
    if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
    if (subset.size() == 1) return {0.0, 0.0};
    double lo = kInf, hi = 0.0;
    for (std::size_t x : subset) {
        for (std::size_t y : subset) {
            if (x == y) continue;
            const double h = hitting.expected_steps(x, y);
            lo = std::min(lo, h);
            hi = std::max(hi, h);
        }
    }
    const double logm = std::log(static_cast<double>(subset.size()));
    return {logm * lo, (1.0 + logm) * hi};
}

double matthews_harmonic_lower(const HittingMatrix& hitting,
                               const std::vector<std::size_t>& subset) {
    if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
    if (subset.size() == 1) return 0.0;
    double a = kInf;
    for (std::size_t x : subset) {
        for (std::size_t y : subset) {
            if (x != y) a = std::min(a, hitting.expected_steps(x, y));
        }
    }
    double harmonic = 0.0;
    for (std::size_t k = 1; k < subset.size(); ++k) harmonic += 1.0 / static_cast<double>(k);
    return a * harmonic;
}

BoundReport matthews_refined_lower(const MarkovChain& chain,
                                   const std::vector<std::vector<std::size_t>>& groups,
                                   double separation, const CoverOptions& options) {
    if (groups.empty()) throw std::invalid_argument("need at least one group");
    if (!(separation > 0.0)) throw std::invalid_argument("separation must be positive");

    std::vector<std::size_t> all;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("groups must be nonempty");
        all.insert(all.end(), g.begin(), g.end());
    }
    const auto united = checked_subset(chain, all);
    if (united.size() != all.size()) throw std::invalid_argument("groups must be disjoint");

    const HittingMatrix h = expected_hitting_times(chain);
    const double eps = 1e-9 * std::max(1.0, h.expected_steps.max_abs());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = 0; j < groups.size(); ++j) {
            if (i == j) continue;
            for (std::size_t x : groups[i]) {
                for (std::size_t y : groups[j]) {
                    if (h.expected_steps(x, y) + eps < separation) {
                        throw PreconditionError(
                            "separation fails: hitting time " +
                            format_sig17(h.expected_steps(x, y)) + " from state " +
                            std::to_string(x) + " to state " + std::to_string(y) +
                            " is below " + format_sig17(separation));
                    }
                }
            }
        }
    }

    double min_group_cover = kInf;
    for (const auto& g : groups) min_group_cover = std::min(min_group_cover, cov_minus(chain, g, options));
    const double lhs = separation * std::log(static_cast<double>(groups.size())) + min_group_cover;
    const double rhs = cov_minus(chain, united, options);
    return make_report("matthews-refined", lhs, rhs, lhs <= rhs + 1e-6,
                       "groups " + std::to_string(groups.size()) + "; separation " +
                           format_sig17(separation));
}

namespace {

// One simulation from z until its k-th return, reporting whether the subset
// was fully covered by then and how many steps the k-th return took. With
// stop_at_cover the walk ends as soon as it covers (t_k then unset).
struct CoverReturnTrial {
    bool covered = false;
    std::uint64_t t_k = 0;
};

CoverReturnTrial run_cover_return_trial(const ChainSampler& sampler,
                                        const std::vector<bool>& in_subset,
                                        std::size_t subset_size, std::size_t z, std::uint64_t k,
                                        bool stop_at_cover, SplitMix64& rng,
                                        std::vector<std::uint64_t>& stamp, std::uint64_t tag) {
    CoverReturnTrial out;
    std::size_t state = z;
    std::size_t remaining = subset_size;
    if (in_subset[z]) {
        stamp[z] = tag;
        --remaining;
    }
    std::uint64_t returns = 0;
    std::uint64_t t = 0;
    bool covered = remaining == 0;
    // An arrival can complete the cover or count a return, never both: z is
    // either outside the subset or already marked at time zero.
    while (true) {
        if (covered && stop_at_cover) {
            out.covered = true;
            return out;
        }
        if (returns == k) break;
        state = sampler.step(state, rng);
        ++t;
        if (state == z) ++returns;
        if (!covered && in_subset[state] && stamp[state] != tag) {
            stamp[state] = tag;
            if (--remaining == 0) covered = true;
        }
    }
    out.covered = covered;
    out.t_k = t;
    return out;
}

} // namespace

BoundReport bdnp_restart_check(const MarkovChain& chain, const std::vector<std::size_t>& subset_in,
                               std::size_t z, std::uint64_t k, std::uint64_t trials,
                               std::uint64_t seed) {
    validate_markov_chain(chain);
    const auto subset = checked_subset(chain, subset_in);
    if (z >= chain.n) throw std::invalid_argument("start state out of range");
    if (k == 0) throw std::invalid_argument("need k >= 1");
    if (trials == 0) throw std::invalid_argument("need at least one trial");

    const auto pi = stationary_distribution(chain);
    const double pi_z = pi.pi[z];
    const double exact_cover = exact_cover_all_starts(chain, subset)[z];

    const ChainSampler sampler(chain);
    std::vector<bool> in_subset(chain.n, false);
    for (std::size_t s : subset) in_subset[s] = true;
    std::vector<std::uint64_t> stamp(chain.n, 0);

    std::uint64_t covered_count = 0;
    RunningStats return_stats;
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng(trial_seed(seed, t));
        const auto trial = run_cover_return_trial(sampler, in_subset, subset.size(), z, k,
                                                  /*stop_at_cover=*/false, rng, stamp, t + 1);
        covered_count += trial.covered ? 1 : 0;
        return_stats.add(static_cast<double>(trial.t_k));
    }

    const double p_hat = static_cast<double>(covered_count) / static_cast<double>(trials);
    const double p_up = std::min(1.0, p_hat + 3.0 * binom_sigma(p_hat, trials));
    const double rhs = p_up > 0.0 ? static_cast<double>(k) / (pi_z * p_up) : kInf;

    const double wald_target = static_cast<double>(k) / pi_z;
    const double wald_gap = std::fabs(return_stats.mean - wald_target);
    const double wald_tol = return_stats.ci3() + 1e-9 * std::max(1.0, wald_target);
    const bool wald_ok = wald_gap <= wald_tol;

    const bool passed = exact_cover <= rhs + 1e-6 * std::max(1.0, rhs == kInf ? 0.0 : rhs) && wald_ok;
    std::string context = "k=" + std::to_string(k) + "; p_hat=" + format_sig17(p_hat) +
                          "; mean k-th return " + format_sig17(return_stats.mean) +
                          " vs " + format_sig17(wald_target);
    if (p_hat == 0.0) context += "; inconclusive (no covering trial)";
    if (trials < 30) context += "; low-confidence";
    return make_report("bdnp-restart", exact_cover, rhs, passed, context);
}

BoundReport excursion_visit_law(const MarkovChain& chain, std::size_t x, std::size_t y,
                                std::uint64_t trials, std::uint64_t seed, std::size_t r_max) {
    validate_markov_chain(chain);
    const std::size_t n = chain.n;
    if (x >= n || y >= n) throw std::invalid_argument("state out of range");
    if (x == y) throw std::invalid_argument("states must differ");
    if (trials == 0) throw std::invalid_argument("need at least one trial");

    const double p_xy = escape_probability(chain, x, y);
    const double p_yx = escape_probability(chain, y, x);
    const Matrix& p = chain.transition;

    // Absorbing solve with a visit counter: B_c(z) is the chance, from z
    // before returning to x, that y is reached at least r - c more times.
    // The system matrix never changes, only the counter coupling.
    std::vector<std::size_t> others;
    others.reserve(n - 1);
    for (std::size_t s = 0; s < n; ++s) {
        if (s != x) others.push_back(s);
    }
    const std::size_t dim = others.size();
    std::vector<std::size_t> pos(n, n);
    for (std::size_t i = 0; i < dim; ++i) pos[others[i]] = i;
    Matrix a(dim, dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if (others[j] == y) continue; // handled through the counter
            a(i, j) = -p(others[i], others[j]);
        }
        a(i, i) += 1.0;
    }
    const LuDecomposition lu(std::move(a));

    auto exact_tail = [&](std::size_t r) {
        // P_x(at least r visits to y before the first return to x), r >= 1.
        std::vector<double> level(dim, 0.0);
        double t_next = 1.0; // value of arriving at y at counter level r - 1
        double t_level1 = 1.0;
        for (std::size_t c = r; c-- > 0;) {
            std::vector<double> rhs(dim);
            for (std::size_t i = 0; i < dim; ++i) rhs[i] = p(others[i], y) * t_next;
            level = lu.solve(rhs);
            t_next = level[pos[y]];
            if (c == 1) t_level1 = t_next; // B_1(y), the arrival value at level 0
        }
        const double arrive_y = r <= 1 ? 1.0 : t_level1;
        double tail = p(x, y) * arrive_y;
        for (std::size_t i = 0; i < dim; ++i) {
            if (others[i] != y) tail += p(x, others[i]) * level[i];
        }
        return tail;
    };

    double worst_gap = 0.0;
    for (std::size_t r = 0; r <= r_max; ++r) {
        const double closed_form = p_xy * std::pow(1.0 - p_yx, static_cast<double>(r));
        worst_gap = std::max(worst_gap, std::fabs(exact_tail(r + 1) - closed_form));
    }

    // Smoke test of the first tail value by simulating whole excursions.
    const ChainSampler sampler(chain);
    std::uint64_t visited = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng(trial_seed(seed, t));
        std::size_t state = sampler.step(x, rng);
        bool saw_y = false;
        while (state != x) {
            if (state == y) saw_y = true;
            state = sampler.step(state, rng);
        }
        visited += saw_y ? 1 : 0;
    }
    const double freq = static_cast<double>(visited) / static_cast<double>(trials);
    const double smoke_tol = 4.0 * binom_sigma(freq, trials) + 1e-9;
    const bool smoke_ok = std::fabs(freq - p_xy) <= smoke_tol;

    const bool passed = worst_gap <= 1e-9 && smoke_ok;
    return make_report("excursion-law", worst_gap, 1e-9, passed,
                       "p_xy=" + format_sig17(p_xy) + "; p_yx=" + format_sig17(p_yx) +
                           "; r up to " + std::to_string(r_max) + "; smoke freq " +
                           format_sig17(freq) + (smoke_ok ? "" : " (smoke miss)"));
}

namespace {

// Visits to y strictly before the k-th return to x, starting at x.
std::uint64_t visits_before_kth_return(const ChainSampler& sampler, std::size_t x, std::size_t y,
                                       std::uint64_t k, SplitMix64& rng) {
    std::size_t state = x;
    std::uint64_t returns = 0;
    std::uint64_t visits = 0;
    while (returns < k) {
        state = sampler.step(state, rng);
        if (state == x) ++returns;
        else if (state == y) ++visits;
    }
    return visits;
}

} // namespace

BoundReport kklv_tail_check(const MarkovChain& chain, std::size_t x, std::size_t y,
                            std::uint64_t k, double eps, std::uint64_t trials,
                            std::uint64_t seed) {
    validate_markov_chain(chain);
    if (x >= chain.n || y >= chain.n) throw std::invalid_argument("state out of range");
    if (x == y) throw std::invalid_argument("states must differ");
    if (k == 0) throw std::invalid_argument("need k >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (trials == 0) throw std::invalid_argument("need at least one trial");

    const auto pi = stationary_distribution(chain);
    const auto h = expected_hitting_times(chain);
    const double d_xy = h.expected_steps(x, y) + h.expected_steps(y, x);
    const double threshold = (1.0 - eps) * static_cast<double>(k) * pi.pi[y] / pi.pi[x];
    const double bound =
        std::exp(-eps * eps * static_cast<double>(k) / (4.0 * pi.pi[x] * d_xy));

    const ChainSampler sampler(chain);
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng(trial_seed(seed, t));
        const std::uint64_t visits = visits_before_kth_return(sampler, x, y, k, rng);
        hits += static_cast<double>(visits) <= threshold ? 1 : 0;
    }
    const double freq = static_cast<double>(hits) / static_cast<double>(trials);
    const double rhs = bound + 3.0 * binom_sigma(freq, trials) + 1e-9;
    return make_report("kklv-tail", freq, rhs, freq <= rhs,
                       "k=" + std::to_string(k) + "; eps=" + format_sig17(eps) +
                           "; threshold=" + format_sig17(threshold) +
                           "; analytic=" + format_sig17(bound));
}

BoundReport key_estimate_check(const MarkovChain& chain, std::size_t z, std::size_t x,
                               std::size_t y, std::uint64_t k, std::uint64_t l,
                               std::uint64_t trials, std::uint64_t seed) {
    validate_markov_chain(chain);
    if (z >= chain.n || x >= chain.n || y >= chain.n) {
        throw std::invalid_argument("state out of range");
    }
    if (x == y) throw std::invalid_argument("race states must differ");
    if (k == 0 || l == 0) throw std::invalid_argument("need k, l >= 1");
    if (trials == 0) throw std::invalid_argument("need at least one trial");

    const auto pi = stationary_distribution(chain);
    const auto h = expected_hitting_times(chain);
    const double d_xy = h.expected_steps(x, y) + h.expected_steps(y, x);
    const double u = static_cast<double>(k - 1) / pi.pi[x];
    const double v = static_cast<double>(l - 1) / pi.pi[y];
    if (!(v < u)) {
        throw std::invalid_argument("need (l-1)/pi(y) < (k-1)/pi(x); got " + format_sig17(v) +
                                    " vs " + format_sig17(u));
    }
    const double bound = std::exp(-(u - v) * (u - v) / (4.0 * d_xy * u));

    const ChainSampler sampler(chain);
    std::uint64_t x_first = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng(trial_seed(seed, t));
        std::size_t state = z;
        std::uint64_t cx = 0, cy = 0;
        while (true) {
            state = sampler.step(state, rng);
            if (state == x) {
                if (++cx == k) {
                    ++x_first;
                    break;
                }
            } else if (state == y) {
                if (++cy == l) break;
            }
        }
    }
    const double freq = static_cast<double>(x_first) / static_cast<double>(trials);
    const double rhs = bound + 3.0 * binom_sigma(freq, trials) + 1e-9;
    return make_report("majoration-hitting", freq, rhs, freq <= rhs,
                       "k=" + std::to_string(k) + "; l=" + std::to_string(l) +
                           "; analytic=" + format_sig17(bound));
}

BoundReport chaining_cover_certificate(const MarkovChain& chain,
                                       const std::vector<std::size_t>& subset_in, std::size_t z,
                                       const AdmissibleSequence& seq, std::uint64_t trials,
                                       std::uint64_t seed) {
    validate_markov_chain(chain);
    const auto subset = checked_subset(chain, subset_in);
    if (std::find(subset.begin(), subset.end(), z) == subset.end()) {
        throw std::invalid_argument("certificate start must belong to the subset");
    }
    if (trials == 0) throw std::invalid_argument("need at least one trial");
    const std::size_t m = subset.size();
    validate_admissible_sequence(seq, m);

    const auto pi = stationary_distribution(chain);
    const auto h = expected_hitting_times(chain);
    const FiniteMetric d = commute_distance(h);

    Matrix sub(m, m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) sub(i, j) = d.distance(subset[i], subset[j]);
    }

    // r0 = sup over points of sum_n 2^(n/2) sqrt(diam of its level-n block).
    std::vector<double> acc(m, 0.0);
    for (std::size_t level = 0; level < seq.levels.size(); ++level) {
        const double w = std::exp2(static_cast<double>(level) / 2.0);
        for (const PartitionBlock& block : seq.levels[level]) {
            const double diam = set_diameter(sub, block);
            if (diam == 0.0) continue;
            for (std::size_t p : block) acc[p] += w * std::sqrt(diam);
        }
    }
    const double r0 = *std::max_element(acc.begin(), acc.end());
    const double pi_z = pi.pi[z];
    const std::uint64_t k0 = static_cast<std::uint64_t>(std::floor(34.0 * pi_z * r0 * r0)) + 1;

    const ChainSampler sampler(chain);
    std::vector<bool> in_subset(chain.n, false);
    for (std::size_t s : subset) in_subset[s] = true;
    std::vector<std::uint64_t> stamp(chain.n, 0);
    std::uint64_t covered_count = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng(trial_seed(seed, t));
        const auto trial = run_cover_return_trial(sampler, in_subset, m, z, k0,
                                                  /*stop_at_cover=*/true, rng, stamp, t + 1);
        covered_count += trial.covered ? 1 : 0;
    }
    const double p_hat = static_cast<double>(covered_count) / static_cast<double>(trials);
    const bool mc_ok = p_hat >= 7.0 / 8.0 - 3.0 * binom_sigma(p_hat, trials) - 1e-9;

    const double exact_cover = exact_cover_all_starts(chain, subset)[z];
    const double restart_bound = (8.0 / 7.0) * static_cast<double>(k0) / pi_z;
    const double functional_bound = 40.0 * r0 * r0;
    const double rhs = std::min(restart_bound, functional_bound);
    const double tol = 1e-6 * std::max(1.0, rhs);
    const bool passed = mc_ok && exact_cover <= restart_bound + tol &&
                        exact_cover <= functional_bound + tol;
    return make_report("chaining-certificate", exact_cover, rhs, passed,
                       "r0=" + format_sig17(r0) + "; k0=" + std::to_string(k0) +
                           "; p_hat=" + format_sig17(p_hat) + " target 7/8");
}

TrajectoryStats simulate_trajectory(const MarkovChain& chain, std::size_t start,
                                    std::uint64_t horizon, std::uint64_t seed) {
    validate_markov_chain(chain);
    if (start >= chain.n) throw std::invalid_argument("start state out of range");
    if (horizon == 0) throw std::invalid_argument("horizon must be positive");
    const ChainSampler sampler(chain);
    SplitMix64 rng(seed);
    TrajectoryStats stats;
    stats.horizon = horizon;
    stats.visit_counts.assign(chain.n, 0);
    std::size_t state = start;
    stats.visit_counts[state] += 1;
    for (std::uint64_t t = 1; t < horizon; ++t) {
        state = sampler.step(state, rng);
        stats.visit_counts[state] += 1;
        if (state == start) stats.return_times.push_back(t);
    }
    return stats;
}

} // namespace covchain
