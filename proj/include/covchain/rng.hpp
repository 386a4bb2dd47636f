#pragma once

#include <cstdint>
#include <vector>

namespace covchain {

inline constexpr std::uint64_t kSeedStride = 0x9e3779b97f4a7c15ull;

// splitmix64 output stage; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Per-trial seed derived from the master seed and a trial counter only, so
// replay does not depend on scheduling or trial order.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial_index) {
    return mix64(master + (trial_index + 1) * kSeedStride);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += kSeedStride);
        return mix64(z);
    }

    // Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in {0, ..., n-1}; n must be nonzero. Lemire reduction on the
    // high word keeps the bias below 2^-64.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

private:
    std::uint64_t state_;
};

// Walker alias table over a fixed discrete distribution.
class AliasTable {
public:
    AliasTable() = default;
    explicit AliasTable(const std::vector<double>& weights);

    std::size_t size() const { return prob_.size(); }

    std::uint32_t sample(SplitMix64& rng) const {
        const std::uint64_t idx = rng.below(prob_.size());
        return rng.unit() < prob_[idx] ? static_cast<std::uint32_t>(idx) : alias_[idx];
    }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

} // namespace covchain
