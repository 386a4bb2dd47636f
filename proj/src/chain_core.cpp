#include "covchain/chain_core.hpp"

#include "covchain/errors.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace covchain {

namespace {

// Reachable set of `start` along edges with positive probability,
// transposed when `backward`.
std::vector<bool> reachable(const Matrix& p, std::size_t start, bool backward) {
    const std::size_t n = p.rows();
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v = 0; v < n; ++v) {
            const double w = backward ? p(v, u) : p(u, v);
            if (w > 0.0 && !seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    return seen;
}

} // namespace

MarkovChain make_markov_chain(Matrix transition, std::vector<std::string> labels) {
    MarkovChain chain;
    chain.n = transition.rows();
    chain.transition = std::move(transition);
    chain.labels = std::move(labels);
    validate_markov_chain(chain);
    return chain;
}

void validate_markov_chain(const MarkovChain& chain) {
    const Matrix& p = chain.transition;
    const std::size_t n = chain.n;
    if (n == 0) throw ValidationError("chain: empty state space");
    if (p.rows() != n || p.cols() != n) throw ValidationError("chain: transition matrix is not n by n");
    if (!chain.labels.empty() && chain.labels.size() != n) {
        throw ValidationError("chain: label count does not match state count");
    }
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = p(i, j);
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ValidationError("chain: entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") outside [0,1]");
            }
            sum += v;
        }
        if (std::fabs(sum - 1.0) > 1e-12) {
            throw ValidationError("chain: row " + std::to_string(i) +
                                  " sums to " + format_sig17(sum));
        }
    }
    const auto fwd = reachable(p, 0, false);
    for (std::size_t v = 0; v < n; ++v) {
        if (!fwd[v]) {
            throw ValidationError("chain: not irreducible, state " + std::to_string(v) +
                                  " unreachable from state 0");
        }
    }
    const auto bwd = reachable(p, 0, true);
    for (std::size_t v = 0; v < n; ++v) {
        if (!bwd[v]) {
            throw ValidationError("chain: not irreducible, state 0 unreachable from state " +
                                  std::to_string(v));
        }
    }
}

void validate_metric(const FiniteMetric& metric, double tol) {
    const Matrix& d = metric.distance;
    const std::size_t n = d.rows();
    if (d.cols() != n) throw ValidationError("metric: matrix is not square");
    const double scale = std::max(1.0, d.max_abs());
    const double eps = tol * scale;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(d(i, i)) > eps) throw ValidationError("metric: nonzero diagonal at " + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && !(d(i, j) > 0.0)) {
                throw ValidationError("metric: nonpositive distance at (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
            }
            if (std::fabs(d(i, j) - d(j, i)) > eps) {
                throw ValidationError("metric: asymmetric at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double dik = d(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                if (dik > d(i, j) + d(j, k) + eps) {
                    throw ValidationError("metric: triangle inequality fails at (" +
                                          std::to_string(i) + "," + std::to_string(j) + "," +
                                          std::to_string(k) + ")");
                }
            }
        }
    }
}

StationaryDistribution stationary_distribution(const MarkovChain& chain) {
    validate_markov_chain(chain);
    const std::size_t n = chain.n;
    // pi P = pi with sum(pi) = 1: transpose system with the last balance
    // equation replaced by the normalization row.
    Matrix a(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = chain.transition(j, i);
        a(i, i) -= 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
    std::vector<double> rhs(n, 0.0);
    rhs[n - 1] = 1.0;
    std::vector<double> pi = solve_linear(std::move(a), rhs);

    for (std::size_t i = 0; i < n; ++i) {
        if (!(pi[i] > 0.0)) {
            throw NumericalError("stationary: nonpositive mass at state " + std::to_string(i));
        }
    }
    // Residual check against the balance equations.
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += pi[i] * chain.transition(i, j);
        if (std::fabs(s - pi[j]) > 1e-9) {
            throw NumericalError("stationary: residual " + format_sig17(s - pi[j]) +
                                 " at state " + std::to_string(j));
        }
    }
    return StationaryDistribution{std::move(pi)};
}

HittingMatrix expected_hitting_times(const MarkovChain& chain, std::size_t max_states) {
    validate_markov_chain(chain);
    const std::size_t n = chain.n;
    if (n > max_states) {
        throw CapacityError("hitting times: " + std::to_string(n) + " states exceeds cap " +
                            std::to_string(max_states));
    }
    Matrix h(n, n, 0.0);
    const Matrix& p = chain.transition;
    std::vector<std::size_t> others(n > 0 ? n - 1 : 0);
    for (std::size_t y = 0; y < n; ++y) {
        std::size_t m = 0;
        for (std::size_t x = 0; x < n; ++x) {
            if (x != y) others[m++] = x;
        }
        // (I - P restricted away from y) h(., y) = 1.
        Matrix a(m, m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) a(i, j) = -p(others[i], others[j]);
            a(i, i) += 1.0;
        }
        const std::vector<double> rhs(m, 1.0);
        const std::vector<double> sol = solve_linear(std::move(a), rhs);
        for (std::size_t i = 0; i < m; ++i) h(others[i], y) = sol[i];

        // Residual of the one-step recurrence, scaled by magnitude.
        const double scale = [&] {
            double s = 1.0;
            for (std::size_t i = 0; i < m; ++i) s = std::max(s, sol[i]);
            return s;
        }();
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t x = others[i];
            double expect = 1.0;
            for (std::size_t z = 0; z < n; ++z) {
                if (z != y) expect += p(x, z) * h(z, y);
            }
            if (std::fabs(expect - h(x, y)) > 1e-9 * scale) {
                throw NumericalError("hitting times: residual at (" + std::to_string(x) + "," +
                                     std::to_string(y) + ")");
            }
        }
    }
    return HittingMatrix{std::move(h)};
}

FiniteMetric commute_distance(const HittingMatrix& hitting) {
    const Matrix& h = hitting.expected_steps;
    const std::size_t n = h.rows();
    Matrix d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) d(i, j) = h(i, j) + h(j, i);
    }
    FiniteMetric metric{std::move(d)};
    validate_metric(metric);
    return metric;
}

FiniteMetric sqrt_metric(const FiniteMetric& metric) {
    const Matrix& d = metric.distance;
    const std::size_t n = d.rows();
    Matrix s(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) s(i, j) = std::sqrt(d(i, j));
    }
    FiniteMetric out{std::move(s)};
    validate_metric(out);
    return out;
}

bool is_reversible(const MarkovChain& chain, const StationaryDistribution& pi, double tol) {
    const std::size_t n = chain.n;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            scale = std::max(scale, pi.pi[i] * chain.transition(i, j));
        }
    }
    const double eps = tol * std::max(1.0, scale);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = pi.pi[i] * chain.transition(i, j);
            const double b = pi.pi[j] * chain.transition(j, i);
            if (std::fabs(a - b) > eps) return false;
        }
    }
    return true;
}

double escape_probability(const MarkovChain& chain, std::size_t from, std::size_t target) {
    validate_markov_chain(chain);
    const std::size_t n = chain.n;
    if (from >= n || target >= n) throw std::invalid_argument("escape probability: state out of range");
    if (from == target) throw std::invalid_argument("escape probability: states must differ");
    const Matrix& p = chain.transition;

    // u(z) = chance of visiting target before `from`, absorbing at both.
    std::vector<std::size_t> interior;
    interior.reserve(n - 2);
    for (std::size_t z = 0; z < n; ++z) {
        if (z != from && z != target) interior.push_back(z);
    }
    const std::size_t m = interior.size();
    std::vector<double> u(n, 0.0);
    u[target] = 1.0;
    if (m > 0) {
        Matrix a(m, m, 0.0);
        std::vector<double> rhs(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) a(i, j) = -p(interior[i], interior[j]);
            a(i, i) += 1.0;
            rhs[i] = p(interior[i], target);
        }
        const std::vector<double> sol = solve_linear(std::move(a), rhs);
        for (std::size_t i = 0; i < m; ++i) u[interior[i]] = sol[i];
    }
    double out = 0.0;
    for (std::size_t z = 0; z < n; ++z) out += p(from, z) * u[z];
    return out;
}

double expected_first_return(const MarkovChain& chain, const HittingMatrix& hitting,
                             std::size_t state) {
    const std::size_t n = chain.n;
    if (state >= n) throw std::invalid_argument("first return: state out of range");
    double e = 1.0;
    for (std::size_t z = 0; z < n; ++z) {
        if (z != state) e += chain.transition(state, z) * hitting.expected_steps(z, state);
    }
    return e;
}

BoundReport return_time_identity_check(const MarkovChain& chain, double tol) {
    const auto pi = stationary_distribution(chain);
    const auto h = expected_hitting_times(chain);
    const auto d = commute_distance(h);
    const std::size_t n = chain.n;

    double worst_identity = 0.0;
    double max_return = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        const double ret = expected_first_return(chain, h, x);
        max_return = std::max(max_return, ret);
        worst_identity = std::max(worst_identity, std::fabs(pi.pi[x] * ret - 1.0));
    }
    const double eps = tol * std::max(1.0, max_return);

    // 1/pi(x) = E_x[first return] never exceeds the commute distance to any
    // other state; track the minimum slack over all pairs.
    double min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y) continue;
            min_slack = std::min(min_slack, d.distance(x, y) - 1.0 / pi.pi[x]);
        }
    }
    if (n == 1) min_slack = 0.0;

    const bool passed = worst_identity <= eps && min_slack >= -eps;
    return make_report("return-time-identity", worst_identity, eps, passed,
                       "max |pi(x) E_x[T1(x)] - 1|; min commute slack " +
                           format_sig17(min_slack) + "; states " + std::to_string(n));
}

ChainSampler::ChainSampler(const MarkovChain& chain) {
    rows_.reserve(chain.n);
    std::vector<double> row(chain.n);
    for (std::size_t i = 0; i < chain.n; ++i) {
        for (std::size_t j = 0; j < chain.n; ++j) row[j] = chain.transition(i, j);
        rows_.emplace_back(row);
    }
}

} // namespace covchain
