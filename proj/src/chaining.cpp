#include "covchain/chaining.hpp"

#include "covchain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace covchain {

std::uint64_t partition_cardinality_cap(std::size_t level) {
    if (level == 0) return 1;
    if (level >= 6) return std::numeric_limits<std::uint64_t>::max();
    return std::uint64_t{1} << (std::uint64_t{1} << level);
}

namespace {

// block id per point, or throws if the level is not a partition.
std::vector<std::size_t> block_ids(const Partition& partition, std::size_t point_count,
                                   std::size_t level) {
    std::vector<std::size_t> id(point_count, point_count);
    for (std::size_t b = 0; b < partition.size(); ++b) {
        if (partition[b].empty()) {
            throw ValidationError("partition level " + std::to_string(level) + ": empty block");
        }
        for (std::size_t p : partition[b]) {
            if (p >= point_count) {
                throw ValidationError("partition level " + std::to_string(level) +
                                      ": point out of range");
            }
            if (id[p] != point_count) {
                throw ValidationError("partition level " + std::to_string(level) +
                                      ": point " + std::to_string(p) + " appears twice");
            }
            id[p] = b;
        }
    }
    for (std::size_t p = 0; p < point_count; ++p) {
        if (id[p] == point_count) {
            throw ValidationError("partition level " + std::to_string(level) + ": point " +
                                  std::to_string(p) + " missing");
        }
    }
    return id;
}

} // namespace

void validate_admissible_sequence(const AdmissibleSequence& seq, std::size_t point_count) {
    if (point_count == 0) throw ValidationError("admissible sequence: empty point set");
    if (seq.levels.empty()) throw ValidationError("admissible sequence: no levels");
    if (seq.levels.front().size() != 1) {
        throw ValidationError("admissible sequence: level 0 must be the whole set");
    }
    std::vector<std::size_t> prev;
    for (std::size_t k = 0; k < seq.levels.size(); ++k) {
        const Partition& level = seq.levels[k];
        if (static_cast<std::uint64_t>(level.size()) > partition_cardinality_cap(k)) {
            throw ValidationError("admissible sequence: level " + std::to_string(k) + " has " +
                                  std::to_string(level.size()) + " blocks, cap " +
                                  std::to_string(partition_cardinality_cap(k)));
        }
        auto ids = block_ids(level, point_count, k);
        if (k > 0) {
            // Refinement: a block may not straddle two previous blocks.
            for (const PartitionBlock& block : level) {
                for (std::size_t p : block) {
                    if (prev[p] != prev[block.front()]) {
                        throw ValidationError("admissible sequence: level " + std::to_string(k) +
                                              " does not refine level " + std::to_string(k - 1));
                    }
                }
            }
        }
        prev = std::move(ids);
    }
    for (const PartitionBlock& block : seq.levels.back()) {
        if (block.size() != 1) {
            throw ValidationError("admissible sequence: final level must be singletons");
        }
    }
}

void validate_net_sequence(const NetSequence& nets, std::size_t point_count) {
    for (std::size_t i = 0; i < nets.nets.size(); ++i) {
        if (nets.nets[i].empty()) {
            throw ValidationError("net sequence: level " + std::to_string(i) + " is empty");
        }
        if (static_cast<std::uint64_t>(nets.nets[i].size()) > partition_cardinality_cap(i)) {
            throw ValidationError("net sequence: level " + std::to_string(i) + " has " +
                                  std::to_string(nets.nets[i].size()) + " points, cap " +
                                  std::to_string(partition_cardinality_cap(i)));
        }
        for (std::size_t p : nets.nets[i]) {
            if (p >= point_count) throw ValidationError("net sequence: point out of range");
        }
    }
}

double set_diameter(const Matrix& d, const PartitionBlock& block) {
    double diam = 0.0;
    for (std::size_t i = 0; i < block.size(); ++i) {
        for (std::size_t j = i + 1; j < block.size(); ++j) {
            diam = std::max(diam, d(block[i], block[j]));
        }
    }
    return diam;
}

namespace {

double level_weight(std::size_t level, int alpha) {
    return std::exp2(static_cast<double>(level) / alpha);
}

void check_alpha(int alpha) {
    if (alpha != 1 && alpha != 2) throw std::invalid_argument("alpha must be 1 or 2");
}

} // namespace

double functional_value(const FiniteMetric& metric, const AdmissibleSequence& seq, int alpha) {
    check_alpha(alpha);
    const std::size_t n = metric.distance.rows();
    validate_admissible_sequence(seq, n);
    std::vector<double> acc(n, 0.0);
    for (std::size_t k = 0; k < seq.levels.size(); ++k) {
        const double w = level_weight(k, alpha);
        for (const PartitionBlock& block : seq.levels[k]) {
            const double diam = set_diameter(metric.distance, block);
            if (diam == 0.0) continue;
            for (std::size_t p : block) acc[p] += w * diam;
        }
    }
    return *std::max_element(acc.begin(), acc.end());
}

double net_functional_value(const FiniteMetric& metric, const NetSequence& nets) {
    const std::size_t n = metric.distance.rows();
    if (n == 0) throw ValidationError("net functional: empty point set");
    validate_net_sequence(nets, n);
    double worst = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        double acc = 0.0;
        for (std::size_t i = 0; i < nets.nets.size(); ++i) {
            double dist = std::numeric_limits<double>::infinity();
            for (std::size_t m : nets.nets[i]) dist = std::min(dist, metric.distance(x, m));
            acc += std::ldexp(1.0, static_cast<int>(i)) * dist;
        }
        worst = std::max(worst, acc);
    }
    return worst;
}

std::vector<std::size_t> farthest_point_order(const FiniteMetric& metric) {
    const std::size_t n = metric.distance.rows();
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<bool> chosen(n, false);
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::size_t current = 0;
    for (std::size_t step = 0; step < n; ++step) {
        order.push_back(current);
        chosen[current] = true;
        for (std::size_t p = 0; p < n; ++p) {
            dist[p] = std::min(dist[p], metric.distance(p, current));
        }
        std::size_t next = n;
        double best = -1.0;
        for (std::size_t p = 0; p < n; ++p) {
            if (!chosen[p] && dist[p] > best) {
                best = dist[p];
                next = p;
            }
        }
        current = next;
    }
    return order;
}

namespace {

// Voronoi cells of the given centers; assignment ties go to the lowest
// center index. Blocks come out keyed by ascending center.
Partition voronoi_partition(const FiniteMetric& metric, std::vector<std::size_t> centers) {
    std::sort(centers.begin(), centers.end());
    const std::size_t n = metric.distance.rows();
    Partition cells(centers.size());
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < centers.size(); ++c) {
            if (metric.distance(p, centers[c]) < metric.distance(p, centers[best])) best = c;
        }
        cells[best].push_back(p);
    }
    cells.erase(std::remove_if(cells.begin(), cells.end(),
                               [](const PartitionBlock& b) { return b.empty(); }),
                cells.end());
    return cells;
}

Partition common_refinement(const Partition& a, const Partition& b, std::size_t n) {
    std::vector<std::size_t> ida(n), idb(n);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t p : a[i]) ida[p] = i;
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t p : b[i]) idb[p] = i;
    }
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed(n);
    for (std::size_t p = 0; p < n; ++p) {
        keyed[p] = {(static_cast<std::uint64_t>(ida[p]) << 32) | idb[p], p};
    }
    std::sort(keyed.begin(), keyed.end());
    Partition out;
    for (std::size_t p = 0; p < n; ++p) {
        if (p == 0 || keyed[p].first != keyed[p - 1].first) out.emplace_back();
        out.back().push_back(keyed[p].second);
    }
    return out;
}

bool all_singletons(const Partition& partition) {
    return std::all_of(partition.begin(), partition.end(),
                       [](const PartitionBlock& b) { return b.size() == 1; });
}

} // namespace

GammaEstimate greedy_gamma_upper(const FiniteMetric& metric, int alpha) {
    check_alpha(alpha);
    const std::size_t n = metric.distance.rows();
    if (n == 0) throw ValidationError("greedy functional: empty point set");

    AdmissibleSequence seq;
    PartitionBlock everything(n);
    for (std::size_t p = 0; p < n; ++p) everything[p] = p;

    if (n == 1) {
        seq.levels.push_back({everything});
    } else {
        const std::vector<std::size_t> order = farthest_point_order(metric);
        // Running refinements of the Voronoi partitions, entered two levels
        // late: |refinement of V_0..V_j| <= prod N_k <= cap(j + 2).
        seq.levels.push_back({everything});
        seq.levels.push_back({everything});
        Partition running{everything};
        for (std::size_t j = 0;; ++j) {
            const std::uint64_t cap = partition_cardinality_cap(j);
            const std::size_t net_size =
                cap >= n ? n : static_cast<std::size_t>(cap);
            std::vector<std::size_t> net(order.begin(), order.begin() + net_size);
            running = common_refinement(running, voronoi_partition(metric, std::move(net)), n);
            seq.levels.push_back(running);
            if (all_singletons(running)) break;
        }
    }
    validate_admissible_sequence(seq, n);

    GammaEstimate est;
    est.alpha = alpha;
    est.kind = GammaEstimate::Kind::UpperGreedy;
    est.value = functional_value(metric, seq, alpha);
    est.witness = std::move(seq);
    return est;
}

namespace {

// Achievable covering radius plus whether it is exactly optimal.
std::pair<double, bool> covering_radius_impl(const FiniteMetric& metric, std::size_t level) {
    const std::size_t n = metric.distance.rows();
    const std::uint64_t cap = partition_cardinality_cap(level);
    if (cap >= n) return {0.0, true};
    const std::size_t k = static_cast<std::size_t>(cap);
    const Matrix& d = metric.distance;

    auto radius_of = [&](const std::vector<std::size_t>& centers) {
        double radius = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            double dist = std::numeric_limits<double>::infinity();
            for (std::size_t c : centers) dist = std::min(dist, d(p, c));
            radius = std::max(radius, dist);
        }
        return radius;
    };

    if (k == 1) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < n; ++c) best = std::min(best, radius_of({c}));
        return {best, true};
    }
    if (n <= 12 && k <= 4) {
        double best = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> centers(k);
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t picked) {
            if (picked == k) {
                best = std::min(best, radius_of(centers));
                return;
            }
            for (std::size_t c = start; c + (k - picked) <= n; ++c) {
                centers[picked] = c;
                rec(c + 1, picked + 1);
            }
        };
        rec(0, 0);
        return {best, true};
    }
    const std::vector<std::size_t> order = farthest_point_order(metric);
    return {radius_of({order.begin(), order.begin() + k}), false};
}

} // namespace

double covering_radius(const FiniteMetric& metric, std::size_t level) {
    if (metric.distance.rows() == 0) throw ValidationError("covering radius: empty point set");
    return covering_radius_impl(metric, level).first;
}

GammaEstimate dudley_bound(const FiniteMetric& metric, int alpha) {
    check_alpha(alpha);
    const std::size_t n = metric.distance.rows();
    if (n == 0) throw ValidationError("entropy sum: empty point set");
    GammaEstimate est;
    est.alpha = alpha;
    est.kind = GammaEstimate::Kind::Dudley;
    for (std::size_t level = 0; partition_cardinality_cap(level) < n; ++level) {
        est.value += level_weight(level, alpha) * covering_radius_impl(metric, level).first;
    }
    return est;
}

GammaEstimate gamma_lower_packing(const FiniteMetric& metric, int alpha) {
    check_alpha(alpha);
    const std::size_t n = metric.distance.rows();
    if (n == 0) throw ValidationError("packing bound: empty point set");
    GammaEstimate est;
    est.alpha = alpha;
    est.kind = GammaEstimate::Kind::LowerPacking;
    for (std::size_t level = 0; partition_cardinality_cap(level) < n; ++level) {
        const auto [radius, exact] = covering_radius_impl(metric, level);
        const double certified = exact ? radius : radius / 2.0; // greedy is a 2-approximation
        est.value = std::max(est.value, level_weight(level, alpha) * certified);
    }
    return est;
}

namespace {

// All set partitions of `items` with at most max_blocks blocks, in
// restricted-growth order (blocks keyed by first occurrence).
void enumerate_partitions(const std::vector<std::size_t>& items, std::size_t max_blocks,
                          const std::function<void(const Partition&)>& emit) {
    const std::size_t m = items.size();
    Partition current;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == m) {
            emit(current);
            return;
        }
        for (std::size_t b = 0; b < current.size(); ++b) {
            current[b].push_back(items[i]);
            rec(i + 1);
            current[b].pop_back();
        }
        if (current.size() < max_blocks) {
            current.push_back({items[i]});
            rec(i + 1);
            current.pop_back();
        }
    };
    rec(0);
}

// All refinements of `coarse` (cartesian product of per-block partitions).
void enumerate_refinements(const Partition& coarse, std::size_t max_blocks,
                           const std::function<void(const Partition&)>& emit) {
    std::vector<std::vector<Partition>> choices;
    for (const PartitionBlock& block : coarse) {
        choices.emplace_back();
        enumerate_partitions(block, block.size(),
                             [&](const Partition& p) { choices.back().push_back(p); });
    }
    Partition assembled;
    std::function<void(std::size_t)> rec = [&](std::size_t b) {
        if (assembled.size() > max_blocks) return;
        if (b == choices.size()) {
            emit(assembled);
            return;
        }
        for (const Partition& option : choices[b]) {
            const std::size_t before = assembled.size();
            if (before + option.size() > max_blocks) continue;
            for (const PartitionBlock& blk : option) assembled.push_back(blk);
            rec(b + 1);
            assembled.resize(before);
        }
    };
    rec(0);
}

} // namespace

GammaEstimate exact_gamma(const FiniteMetric& metric, int alpha) {
    check_alpha(alpha);
    const std::size_t n = metric.distance.rows();
    if (n == 0) throw ValidationError("exact functional: empty point set");
    if (n > 6) {
        throw CapacityError("exact functional: " + std::to_string(n) +
                            " points exceeds the enumeration cap of 6");
    }

    PartitionBlock everything(n);
    for (std::size_t p = 0; p < n; ++p) everything[p] = p;
    Partition singletons;
    for (std::size_t p = 0; p < n; ++p) singletons.push_back({p});

    GammaEstimate est;
    est.alpha = alpha;
    est.kind = GammaEstimate::Kind::ExactOracle;

    if (n == 1) {
        est.value = 0.0;
        est.witness = AdmissibleSequence{{{everything}}};
        return est;
    }

    // Levels 3+ may as well be singletons (every term is nonnegative and
    // the caps already admit them), so only levels 1 and 2 are free.
    double best = std::numeric_limits<double>::infinity();
    AdmissibleSequence best_seq;
    auto consider = [&](const AdmissibleSequence& seq) {
        const double v = functional_value(metric, seq, alpha);
        if (v < best) {
            best = v;
            best_seq = seq;
        }
    };

    enumerate_partitions(everything, std::min<std::size_t>(n, 4), [&](const Partition& level1) {
        AdmissibleSequence seq;
        seq.levels.push_back({everything});
        seq.levels.push_back(level1);
        if (all_singletons(level1)) {
            consider(seq);
            return;
        }
        enumerate_refinements(level1, 16, [&](const Partition& level2) {
            AdmissibleSequence chain = seq;
            chain.levels.push_back(level2);
            if (!all_singletons(level2)) chain.levels.push_back(singletons);
            consider(chain);
        });
    });

    est.value = best;
    est.witness = std::move(best_seq);
    return est;
}

BoundReport loglog_comparison(const FiniteMetric& metric) {
    const std::size_t n = metric.distance.rows();
    if (n < 3) throw std::invalid_argument("loglog comparison: need at least 3 points");
    const FiniteMetric root = sqrt_metric(metric);

    const bool tiny = n <= 6;
    const GammaEstimate upper2 = tiny ? exact_gamma(root, 2) : greedy_gamma_upper(root, 2);
    const GammaEstimate lower1 = tiny ? exact_gamma(metric, 1) : gamma_lower_packing(metric, 1);
    const double upper_sq = upper2.value * upper2.value;
    const double eps = 1e-9 * std::max(1.0, upper_sq);

    const double ratio = upper_sq / (lower1.value * std::log(std::log(static_cast<double>(n))));
    return make_report("loglog-comparison", lower1.value, upper_sq, lower1.value <= upper_sq + eps,
                       std::string("lower gamma1 vs squared upper gamma2 of the root metric (") +
                           (tiny ? "exact" : "packing/greedy") + "); loglog ratio " +
                           format_sig17(ratio) + "; points " + std::to_string(n));
}

} // namespace covchain
