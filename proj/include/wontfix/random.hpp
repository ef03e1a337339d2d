#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace wontfix {

// mt19937_64 output is fixed by the standard; the distributions in <random>
// are not, so sampling goes through the helpers below to keep seeded runs
// identical across standard libraries.
using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 42;

// Uniform integer in [0, n). n must be > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);

// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(Rng& rng);

// Fisher-Yates shuffle driven by uniform_index.
template <typename T>
void seeded_shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = uniform_index(rng, i);
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace wontfix
