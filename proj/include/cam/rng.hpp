#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace cam {

// Deterministic random source. The engine (mt19937_64) is fully specified by
// the standard; the distribution code below is ours, so identical seeds give
// bit-identical streams on every platform and compiler. The standard library
// distributions are implementation-defined and must not be used anywhere
// results have to reproduce.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t uniform_below(std::uint64_t n);

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller; the spare value is cached.
    double normal();

    // Exponential with the given mean.
    double exponential(double mean) {
        return -mean * std::log1p(-uniform01());
    }

    // k distinct indices from {0,...,n-1} via partial Fisher-Yates,
    // returned in draw order.
    std::vector<int> sample_without_replacement(int n, int k);

    void shuffle(std::vector<int>& values);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Purpose-tagged child seed derivation: hashes (parent, tag, index) through
// splitmix64 so independent pipeline stages never share a stream. Used for the
// master-seed -> child-seed split everywhere (restarts, trials, folds, noise).
std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag, std::uint64_t index = 0);

} // namespace cam
