#include <doctest.h>

#include <cmath>
#include <map>

#include <json.hpp>

#include "oracles.hpp"
#include "support.hpp"
#include "wontfix/random.hpp"
#include "wontfix/stat_tests.hpp"

using namespace wontfix;
using test::enumerate_null;
using test::enumerated_p;
using test::u_statistic;

namespace {

// Distinct values, so no ties.
std::vector<double> distinct_sample(Rng& rng, std::size_t n, std::map<double, int>& used) {
    std::vector<double> out;
    while (out.size() < n) {
        const double v = std::round(uniform_unit(rng) * 1e6) / 1e3;
        if (used.emplace(v, 0).second) out.push_back(v);
    }
    return out;
}

std::vector<double> normal_sample(Rng& rng, std::size_t n) {
    std::vector<double> out(n);
    for (auto& v : out) {
        const double u1 = 1.0 - uniform_unit(rng), u2 = uniform_unit(rng);
        v = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    return out;
}

}  // namespace

TEST_CASE("enumeration helper agrees with known small distributions") {
    // n1 = n2 = 2: U in {0..4} with counts 1,1,2,1,1.
    CHECK(enumerate_null(2, 2) == std::vector<double>{1, 1, 2, 1, 1});
    CHECK(enumerate_null(1, 3) == std::vector<double>{1, 1, 1, 1});
}

TEST_CASE("Mann-Whitney null counts match enumeration") {
    for (std::size_t n1 = 1; n1 <= 9; ++n1)
        for (std::size_t n2 = 1; n2 <= 9; ++n2) {
            CAPTURE(n1);
            CAPTURE(n2);
            CHECK(mann_whitney_null_counts(n1, n2) == enumerate_null(n1, n2));
        }
}

TEST_CASE("Mann-Whitney exact path against brute force") {
    Rng rng(20240611);
    std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> cache;
    for (int instance = 0; instance < 200; ++instance) {
        const std::size_t n1 = 2 + uniform_index(rng, 6), n2 = 2 + uniform_index(rng, 6);
        std::map<double, int> used;
        const auto x = distinct_sample(rng, n1, used);
        const auto y = distinct_sample(rng, n2, used);
        auto& counts = cache[{n1, n2}];
        if (counts.empty()) counts = enumerate_null(n1, n2);

        const auto r = mann_whitney(x, y);
        CAPTURE(instance);
        CHECK(r.method == TestMethod::exact);
        CHECK(r.statistic == u_statistic(x, y));
        CHECK(std::abs(r.p_value - enumerated_p(counts, u_statistic(x, y))) <= 1e-12);
        CHECK(r.n1 == n1);
        CHECK(r.n2 == n2);

        // Swapping the samples reflects U and keeps p.
        const auto s = mann_whitney(y, x);
        CHECK(s.statistic == static_cast<double>(n1 * n2) - r.statistic);
        CHECK(std::abs(s.p_value - r.p_value) <= 1e-12);
    }
}

TEST_CASE("Mann-Whitney normal approximation near enumeration") {
    Rng rng(77);
    double worst = 0.0;
    for (std::size_t n1 = 8; n1 <= 12; ++n1)
        for (std::size_t n2 = 8; n2 <= 12; ++n2) {
            const auto counts = enumerate_null(n1, n2);
            for (int instance = 0; instance < 8; ++instance) {
                std::map<double, int> used;
                auto x = distinct_sample(rng, n1, used);
                const auto y = distinct_sample(rng, n2, used);
                // Shift some instances so small p values are covered too.
                if (instance % 2) for (auto& v : x) v += 300.0 * uniform_unit(rng);
                const auto r = mann_whitney(x, y, MannWhitneyMethod::normal_approx);
                CHECK(r.method == TestMethod::normal_approx);
                REQUIRE(r.z.has_value());
                const double diff = std::abs(r.p_value - enumerated_p(counts, u_statistic(x, y)));
                worst = std::max(worst, diff);
                CHECK(diff <= 0.02);
            }
        }
    MESSAGE("largest normal-approximation gap: " << worst);
}

TEST_CASE("Mann-Whitney ties and edge cases") {
    const std::vector<double> empty;
    const std::vector<double> one = {1.0};
    CHECK_THROWS_AS(mann_whitney(empty, one), SampleSizeError);

    const std::vector<double> same = {2.0, 2.0, 2.0};
    const auto d = mann_whitney(same, same);
    CHECK(d.degenerate);
    CHECK(d.p_value == 1.0);

    const std::vector<double> x = {1, 2, 2, 3}, y = {2, 4, 5};
    CHECK_THROWS_AS(mann_whitney(x, y, MannWhitneyMethod::exact), std::invalid_argument);
    const auto r = mann_whitney(x, y);
    CHECK(r.method == TestMethod::normal_approx);
    // Midranks: U counts ties as one half.
    CHECK(r.statistic == u_statistic(x, y));
    CHECK(r.p_value > 0.0);
    CHECK(r.p_value <= 1.0);

    // Large samples leave the exact path.
    std::vector<double> a(20), b(20);
    for (int i = 0; i < 20; ++i) a[i] = i, b[i] = i + 0.5;
    CHECK(mann_whitney(a, b).method == TestMethod::normal_approx);
}

TEST_CASE("Shapiro-Wilk on three symmetric points") {
    const std::vector<double> x = {-1.0, 0.0, 1.0};
    const auto r = shapiro_wilk(x);
    CHECK(r.statistic == 1.0);
    CHECK(r.method == TestMethod::shapiro_wilk);
    CHECK(r.p_value == doctest::Approx(1.0));
}

TEST_CASE("Shapiro-Wilk affine invariance") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = normal_sample(rng, 3 + uniform_index(rng, 200));
        const double a = (0.5 + 19.5 * uniform_unit(rng)) * (uniform_index(rng, 2) ? 1.0 : -1.0);
        const double b = 100.0 * uniform_unit(rng) - 50.0;
        std::vector<double> y = x;
        for (auto& v : y) v = a * v + b;
        const auto rx = shapiro_wilk(x), ry = shapiro_wilk(y);
        CAPTURE(trial);
        CHECK(std::abs(rx.statistic - ry.statistic) <= 1e-12);
        CHECK(rx.statistic > 0.0);
        CHECK(rx.statistic <= 1.0);
        CHECK(rx.p_value >= 0.0);
        CHECK(rx.p_value <= 1.0);
    }
}

TEST_CASE("Shapiro-Wilk reference values") {
    const auto refs = nlohmann::json::parse(test::read_text(test::data_path("shapiro_wilk_reference.json")));
    REQUIRE(refs.size() >= 10);
    for (const auto& ref : refs) {
        const auto x = ref.at("x").get<std::vector<double>>();
        const auto r = shapiro_wilk(x);
        CAPTURE(ref.at("name").get<std::string>());
        CHECK(std::abs(r.statistic - ref.at("w").get<double>()) <= 1e-4);
        CHECK(std::abs(r.p_value - ref.at("p").get<double>()) <= 1e-4);
        // Input order is irrelevant.
        std::vector<double> rev(x.rbegin(), x.rend());
        CHECK(shapiro_wilk(rev).statistic == doctest::Approx(r.statistic).epsilon(1e-14));
    }
}

TEST_CASE("Shapiro-Wilk input checks") {
    const std::vector<double> two = {1.0, 2.0};
    CHECK_THROWS_AS(shapiro_wilk(two), SampleSizeError);
    const std::vector<double> flat(10, 3.0);
    CHECK_THROWS_AS(shapiro_wilk(flat), DegenerateVarianceError);
    const std::vector<double> big(5001, 1.0);
    CHECK_THROWS_AS(shapiro_wilk(big), SampleSizeError);
}
