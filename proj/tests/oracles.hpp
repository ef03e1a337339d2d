#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace wontfix::test {

// Null distribution of the Mann-Whitney U by walking every n1-subset of the
// n1 + n2 ranks (no ties). Needs n1 + n2 < 64.
inline std::vector<double> enumerate_null(std::size_t n1, std::size_t n2) {
    const std::size_t n = n1 + n2;
    std::vector<double> counts(n1 * n2 + 1, 0.0);
    const std::uint64_t limit = std::uint64_t{1} << n;
    std::uint64_t mask = (std::uint64_t{1} << n1) - 1;
    while (mask < limit) {
        std::size_t rank_sum = 0;
        for (std::uint64_t m = mask; m; m &= m - 1) rank_sum += std::countr_zero(m) + 1;
        counts[rank_sum - n1 * (n1 + 1) / 2] += 1.0;
        // Next mask with the same popcount.
        const std::uint64_t low = mask & (~mask + 1);
        const std::uint64_t ripple = mask + low;
        mask = ripple | (((mask ^ ripple) >> 2) / low);
    }
    return counts;
}

// U_x by pairwise comparison, ties counted as one half.
inline double u_statistic(const std::vector<double>& x, const std::vector<double>& y) {
    double u = 0.0;
    for (const double a : x)
        for (const double b : y) u += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
    return u;
}

// Two-sided p from an enumerated null: min(1, 2 * smaller tail).
inline double enumerated_p(const std::vector<double>& counts, double u) {
    double total = 0.0, lower = 0.0, upper = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        total += counts[k];
        if (static_cast<double>(k) <= u) lower += counts[k];
        if (static_cast<double>(k) >= u) upper += counts[k];
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

}  // namespace wontfix::test
