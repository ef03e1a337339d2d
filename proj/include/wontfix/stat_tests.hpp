#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wontfix/error.hpp"

namespace wontfix {

class SampleSizeError : public DataError {
public:
    using DataError::DataError;
};

class DegenerateVarianceError : public DataError {
public:
    using DataError::DataError;
};

enum class TestMethod { exact, normal_approx, shapiro_wilk };

std::string_view to_string(TestMethod m);

struct StatTestResult {
    double statistic = 0.0;       // U_x for Mann-Whitney, W for Shapiro-Wilk
    std::optional<double> z;      // set for the normal approximation
    double p_value = 1.0;         // two-sided for Mann-Whitney
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    TestMethod method = TestMethod::exact;
    bool degenerate = false;      // every pooled value identical; p reported as 1
};

// Samples no larger than this on both sides, without ties, use the exact
// null distribution.
inline constexpr std::size_t kMannWhitneyExactLimit = 8;

enum class MannWhitneyMethod { automatic, exact, normal_approx };

// U_x = R_x - n1 (n1 + 1) / 2 from midranks. Exact two-sided p counts the
// null distribution of U over all C(n1 + n2, n1) labelings; the normal
// approximation uses the tie-corrected variance and a 0.5 continuity
// correction. p = min(1, 2 * smaller tail). Forcing `exact` with ties throws
// std::invalid_argument. Throws SampleSizeError for an empty sample.
StatTestResult mann_whitney(std::span<const double> x, std::span<const double> y,
                            MannWhitneyMethod method = MannWhitneyMethod::automatic);

// Number of labelings with U = u for every u in [0, n1 * n2].
std::vector<double> mann_whitney_null_counts(std::size_t n1, std::size_t n2);

// Royston's AS R94 approximation. Throws SampleSizeError unless
// 3 <= n <= 5000 and DegenerateVarianceError for a constant sample.
StatTestResult shapiro_wilk(std::span<const double> x);

}  // namespace wontfix
