#include "cam/rng.hpp"

#include <numbers>
#include <stdexcept>

namespace cam {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t Rng::uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(theta);
    have_spare_ = true;
    return radius * std::cos(theta);
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::vector<int> out(k);
    for (int i = 0; i < k; ++i) {
        const auto j = i + static_cast<int>(uniform_below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
        out[i] = pool[i];
    }
    return out;
}

void Rng::shuffle(std::vector<int>& values) {
    for (int i = static_cast<int>(values.size()) - 1; i > 0; --i) {
        const auto j = static_cast<int>(uniform_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(values[i], values[j]);
    }
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag, std::uint64_t index) {
    // FNV-1a over the tag, then two splitmix64 rounds mixing in parent and index.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::uint64_t state = parent ^ h;
    std::uint64_t mixed = splitmix64(state);
    state ^= index + 0x632be59bd9b4e019ULL;
    mixed ^= splitmix64(state);
    return mixed;
}

} // namespace cam
