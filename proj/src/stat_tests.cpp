#include "wontfix/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/normal.hpp>

namespace wontfix {

std::string_view to_string(TestMethod m) {
    switch (m) {
        case TestMethod::exact: return "exact";
        case TestMethod::normal_approx: return "normal_approx";
        case TestMethod::shapiro_wilk: return "shapiro_wilk";
    }
    return "";
}

namespace {

const boost::math::normal_distribution<double> kStdNormal;

double normal_sf(double z) { return boost::math::cdf(boost::math::complement(kStdNormal, z)); }
double normal_quantile(double p) { return boost::math::quantile(kStdNormal, p); }

}  // namespace

// --- Mann-Whitney -------------------------------------------------------------

std::vector<double> mann_whitney_null_counts(std::size_t n1, std::size_t n2) {
    // f[i][j][u]: labelings of i x-values and j y-values with U = u. Placing
    // the largest value last: if it is an x it beats all j y-values.
    const std::size_t max_u = n1 * n2;
    std::vector<std::vector<std::vector<double>>> f(
        n1 + 1, std::vector<std::vector<double>>(n2 + 1, std::vector<double>(max_u + 1, 0.0)));
    for (std::size_t i = 0; i <= n1; ++i)
        for (std::size_t j = 0; j <= n2; ++j) {
            if (i == 0 || j == 0) {
                f[i][j][0] = 1.0;
                continue;
            }
            for (std::size_t u = 0; u <= i * j; ++u) {
                double count = f[i][j - 1][u];
                if (u >= j) count += f[i - 1][j][u - j];
                f[i][j][u] = count;
            }
        }
    return f[n1][n2];
}

StatTestResult mann_whitney(std::span<const double> x, std::span<const double> y, MannWhitneyMethod method) {
    const std::size_t n1 = x.size(), n2 = y.size();
    if (n1 == 0 || n2 == 0) throw SampleSizeError("Mann-Whitney needs two nonempty samples");
    for (const double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("Mann-Whitney samples must be finite");
    for (const double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("Mann-Whitney samples must be finite");

    struct Item {
        double value;
        bool from_x;
    };
    std::vector<Item> pooled;
    pooled.reserve(n1 + n2);
    for (const double v : x) pooled.push_back({v, true});
    for (const double v : y) pooled.push_back({v, false});
    std::sort(pooled.begin(), pooled.end(), [](const Item& a, const Item& b) { return a.value < b.value; });

    const std::size_t n = n1 + n2;
    double rank_sum_x = 0.0;
    double tie_term = 0.0;  // sum of t^3 - t over tie groups
    bool has_ties = false;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].value == pooled[i].value) ++j;
        const double t = static_cast<double>(j - i);
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (pooled[k].from_x) rank_sum_x += midrank;
        if (j - i > 1) {
            has_ties = true;
            tie_term += t * t * t - t;
        }
        i = j;
    }

    StatTestResult r;
    r.n1 = n1;
    r.n2 = n2;
    const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2);
    r.statistic = rank_sum_x - dn1 * (dn1 + 1.0) / 2.0;

    if (pooled.front().value == pooled.back().value) {
        r.degenerate = true;
        r.p_value = 1.0;
        r.method = TestMethod::normal_approx;
        return r;
    }

    bool use_exact = !has_ties && n1 <= kMannWhitneyExactLimit && n2 <= kMannWhitneyExactLimit;
    if (method == MannWhitneyMethod::exact) {
        if (has_ties) throw std::invalid_argument("the exact Mann-Whitney path requires tie-free samples");
        use_exact = true;
    } else if (method == MannWhitneyMethod::normal_approx) {
        use_exact = false;
    }

    if (use_exact) {
        r.method = TestMethod::exact;
        const auto counts = mann_whitney_null_counts(n1, n2);
        const auto u = static_cast<std::size_t>(std::llround(r.statistic));
        double total = 0.0, lower = 0.0, upper = 0.0;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            total += counts[k];
            if (k <= u) lower += counts[k];
            if (k >= u) upper += counts[k];
        }
        r.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / total);
        return r;
    }

    r.method = TestMethod::normal_approx;
    const double mean = dn1 * dn2 / 2.0;
    const double dn = static_cast<double>(n);
    const double variance = dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    const double sd = std::sqrt(variance);
    const double diff = r.statistic - mean;
    // Continuity-corrected z toward the centre; the two-sided p uses |diff|.
    const double corrected = std::max(0.0, std::abs(diff) - 0.5);
    r.z = (diff < 0 ? -corrected : corrected) / sd;
    r.p_value = std::min(1.0, 2.0 * normal_sf(corrected / sd));
    return r;
}

// --- Shapiro-Wilk -------------------------------------------------------------

namespace {

double poly(std::span<const double> c, double x) {
    double result = c.back();
    for (std::size_t i = c.size() - 1; i-- > 0;) result = result * x + c[i];
    return result;
}

constexpr double kC1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
constexpr double kC2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr double kC3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
constexpr double kC4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
constexpr double kC5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr double kC6[] = {-0.4803, -0.082676, 0.0030302};
constexpr double kG[] = {-2.273, 0.459};

// Coefficients a_1..a_{n/2} for the lower half of the ordered sample, as
// positive numbers; the full vector is antisymmetric.
std::vector<double> sw_coefficients(std::size_t n) {
    const std::size_t half = n / 2;
    std::vector<double> a(half);
    if (n == 3) {
        a[0] = std::sqrt(0.5);
        return a;
    }
    const double an = static_cast<double>(n);
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
        summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(kC1, rsn) - m[0] / ssumm2;
    std::size_t first_plain;
    double fac;
    if (n > 5) {
        const double a2 = -m[1] / ssumm2 + poly(kC2, rsn);
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
        a[1] = a2;
        first_plain = 2;
    } else {
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
        first_plain = 1;
    }
    a[0] = a1;
    for (std::size_t i = first_plain; i < half; ++i) a[i] = -m[i] / fac;
    return a;
}

}  // namespace

StatTestResult shapiro_wilk(std::span<const double> sample) {
    const std::size_t n = sample.size();
    if (n < 3 || n > 5000)
        throw SampleSizeError("Shapiro-Wilk needs 3 <= n <= 5000 (got " + std::to_string(n) + ")");
    std::vector<double> x(sample.begin(), sample.end());
    for (const double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("Shapiro-Wilk samples must be finite");
    std::sort(x.begin(), x.end());
    const double range = x.back() - x.front();
    if (!(range > 0.0)) throw DegenerateVarianceError("Shapiro-Wilk needs a non-constant sample");

    const auto a = sw_coefficients(n);
    // Centre and scale by the range so W does not depend on location or scale
    // beyond rounding.
    double mean = 0.0;
    for (const double v : x) mean += v / range;
    mean /= static_cast<double>(n);
    double ssa = 0.0, ssx = 0.0, sax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = n - 1 - i;
        double coef = 0.0;
        if (i < j)
            coef = -a[i];
        else if (i > j)
            coef = a[j];
        const double xc = x[i] / range - mean;
        ssa += coef * coef;
        ssx += xc * xc;
        sax += coef * xc;
    }
    double w = sax * sax / (ssa * ssx);
    w = std::min(w, 1.0);

    StatTestResult r;
    r.n1 = n;
    r.method = TestMethod::shapiro_wilk;
    r.statistic = w;

    if (n == 3) {
        const double pi6 = 6.0 / std::numbers::pi;
        const double stqr = std::asin(std::sqrt(0.75));
        r.p_value = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
        return r;
    }
    if (w >= 1.0) {
        r.p_value = 1.0;
        return r;
    }
    const double an = static_cast<double>(n);
    double y = std::log1p(-w);
    double m, s;
    if (n <= 11) {
        const double gamma = poly(kG, an);
        if (y >= gamma) {
            r.p_value = 1e-99;
            return r;
        }
        y = -std::log(gamma - y);
        m = poly(kC3, an);
        s = std::exp(poly(kC4, an));
    } else {
        const double xx = std::log(an);
        m = poly(kC5, xx);
        s = std::exp(poly(kC6, xx));
    }
    r.p_value = std::clamp(normal_sf((y - m) / s), 0.0, 1.0);
    return r;
}

}  // namespace wontfix
