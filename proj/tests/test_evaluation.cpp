#include <doctest.h>

#include <set>
#include <sstream>

#include "support.hpp"
#include "wontfix/evaluation.hpp"
#include "wontfix/random.hpp"
#include "wontfix/synthetic.hpp"

using namespace wontfix;

namespace {

struct Expected {
    ConfusionMatrix cm;
    double p, r, f;
};

// Published per-model confusion matrices with their weighted scores.
const Expected kPublished[] = {
    {{702, 233, 94, 2136}, 0.896, 0.897, 0.894},
    {{610, 325, 632, 1598}, 0.731, 0.698, 0.708},
    {{482, 453, 282, 1948}, 0.758, 0.768, 0.760},
};

double f1(double p, double r) { return p + r == 0.0 ? 0.0 : 2 * p * r / (p + r); }

std::vector<IssueClass> shuffled_classes(std::size_t w, std::size_t o, std::uint64_t seed) {
    std::vector<IssueClass> c(w, IssueClass::wontfix);
    c.insert(c.end(), o, IssueClass::non_wontfix);
    Rng rng(seed);
    seeded_shuffle(std::span<IssueClass>(c), rng);
    return c;
}

}  // namespace

TEST_CASE("weighted metrics against an independent computation") {
    for (const auto& e : kPublished) {
        const auto& cm = e.cm;
        const double tp = cm.tp, fn = cm.fn, fp = cm.fp, tn = cm.tn;
        const double pw = tp / (tp + fp), rw = tp / (tp + fn);
        const double pn = tn / (tn + fn), rn = tn / (tn + fp);
        const double sw = tp + fn, sn = fp + tn, n = sw + sn;

        const auto m = metrics_from_confusion(cm);
        CHECK(m.wontfix.precision == doctest::Approx(pw).epsilon(1e-12));
        CHECK(m.wontfix.recall == doctest::Approx(rw).epsilon(1e-12));
        CHECK(m.non_wontfix.precision == doctest::Approx(pn).epsilon(1e-12));
        CHECK(m.non_wontfix.recall == doctest::Approx(rn).epsilon(1e-12));
        CHECK(m.precision == doctest::Approx((sw * pw + sn * pn) / n).epsilon(1e-12));
        CHECK(m.recall == doctest::Approx((sw * rw + sn * rn) / n).epsilon(1e-12));
        CHECK(m.f_measure == doctest::Approx((sw * f1(pw, rw) + sn * f1(pn, rn)) / n).epsilon(1e-12));
        CHECK(m.accuracy == doctest::Approx((tp + tn) / n).epsilon(1e-12));
        // Weighted recall equals accuracy.
        CHECK(m.recall == doctest::Approx(m.accuracy).epsilon(1e-12));

        CHECK(std::abs(m.precision - e.p) <= 0.0005);
        CHECK(std::abs(m.recall - e.r) <= 0.0005);
        CHECK(std::abs(m.f_measure - e.f) <= 0.0005);
    }
}

TEST_CASE("metric edge cases") {
    CHECK_THROWS_AS(metrics_from_confusion({}), EmptyEvaluationError);

    // Nothing predicted wontfix: precision 0/0 is reported as 0 and flagged.
    const auto m = metrics_from_confusion({0, 5, 0, 5});
    CHECK(m.wontfix.precision == 0.0);
    CHECK(m.wontfix.precision_undefined);
    CHECK(m.wontfix.f_measure == 0.0);
    CHECK(m.non_wontfix.recall == 1.0);

    const auto perfect = metrics_from_confusion({3, 0, 0, 7});
    CHECK(perfect.f_measure == 1.0);
    CHECK(perfect.accuracy == 1.0);

    ConfusionMatrix cm;
    cm.add(IssueClass::wontfix, IssueClass::wontfix);
    cm.add(IssueClass::wontfix, IssueClass::non_wontfix);
    cm.add(IssueClass::non_wontfix, IssueClass::wontfix);
    cm.add(IssueClass::non_wontfix, IssueClass::non_wontfix);
    cm.add(IssueClass::non_wontfix, IssueClass::non_wontfix);
    CHECK(cm == ConfusionMatrix{1, 1, 1, 2});
    cm += cm;
    CHECK(cm == ConfusionMatrix{2, 2, 2, 4});
}

TEST_CASE("metrics stay in range on random matrices") {
    Rng rng(8);
    for (int trial = 0; trial < 500; ++trial) {
        ConfusionMatrix cm{uniform_index(rng, 50), uniform_index(rng, 50), uniform_index(rng, 50),
                           uniform_index(rng, 50)};
        if (cm.total() == 0) continue;
        const auto m = metrics_from_confusion(cm);
        for (const double v : {m.precision, m.recall, m.f_measure, m.accuracy, m.wontfix.f_measure,
                               m.non_wontfix.f_measure}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(m.wontfix.support + m.non_wontfix.support == cm.total());
    }
}

TEST_CASE("stratified folds") {
    SUBCASE("ten folds over study-sized classes") {
        const auto classes = shuffled_classes(1844, 4486, 3);
        const auto folds = stratified_folds(classes, 10, kDefaultSeed);
        REQUIRE(folds.size() == classes.size());
        std::vector<std::array<std::size_t, 2>> per_fold(10, {0, 0});
        for (std::size_t i = 0; i < folds.size(); ++i) {
            REQUIRE(folds[i] < 10);
            ++per_fold[folds[i]][static_cast<int>(classes[i])];
        }
        for (const auto& f : per_fold) {
            CHECK(std::abs(static_cast<double>(f[0]) - 184.4) <= 1.0);
            CHECK(std::abs(static_cast<double>(f[1]) - 448.6) <= 1.0);
        }
    }
    SUBCASE("random sizes") {
        Rng rng(21);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t k = 2 + uniform_index(rng, 9);
            const std::size_t w = k + uniform_index(rng, 50), o = k + uniform_index(rng, 80);
            const auto classes = shuffled_classes(w, o, trial);
            const auto seed = uniform_index(rng, 1000);
            const auto folds = stratified_folds(classes, k, seed);
            CHECK(folds == stratified_folds(classes, k, seed));
            std::vector<std::array<std::size_t, 2>> per_fold(k, {0, 0});
            for (std::size_t i = 0; i < folds.size(); ++i) ++per_fold[folds[i]][static_cast<int>(classes[i])];
            std::size_t total = 0;
            for (const auto& f : per_fold) {
                CHECK(std::abs(static_cast<double>(f[0]) * k - static_cast<double>(w)) <= static_cast<double>(k));
                CHECK(std::abs(static_cast<double>(f[1]) * k - static_cast<double>(o)) <= static_cast<double>(k));
                CHECK(f[0] + f[1] > 0);
                total += f[0] + f[1];
            }
            CHECK(total == classes.size());
        }
    }
    SUBCASE("too few instances") {
        CHECK_THROWS_AS(stratified_folds(shuffled_classes(9, 40, 1), 10, 1), TooFewInstancesError);
        CHECK_THROWS_AS(stratified_folds(shuffled_classes(5, 5, 1), 1, 1), std::invalid_argument);
        CHECK_NOTHROW(stratified_folds(shuffled_classes(10, 10, 1), 10, 1));
    }
}

TEST_CASE("holdout evaluation on the fixture corpus") {
    const auto corpus = load_corpus(test::data_path("fixture_corpus.jsonl"));
    const auto parts = stratified_split(corpus, 0.5, kDefaultSeed);
    for (const auto kind : {ModelKind::naive_bayes, ModelKind::smo, ModelKind::j48}) {
        EvaluationConfig cfg;
        cfg.kind = kind;
        const auto r = evaluate_holdout(parts.train, parts.test, cfg);
        CHECK(r.matrix.total() == parts.test.size());
        CHECK(r.matrix.tp + r.matrix.fn == parts.test.counts().wontfix);
        CHECK(r.config.mode == "holdout");
        CHECK(r.folds.empty());
        CHECK(r.metrics.f_measure == metrics_from_confusion(r.matrix).f_measure);

        const auto again = evaluate_holdout(parts.train, parts.test, cfg);
        CHECK(again.matrix == r.matrix);

        const auto j = report_to_json(r);
        CHECK(j.at("matrix").at("tp") == r.matrix.tp);
        CHECK(j.at("config").at("model") == to_string(kind));
        CHECK(j.at("weighted").at("f_measure") == r.metrics.f_measure);

        std::ostringstream tsv;
        write_report_tsv(tsv, r);
        CHECK(tsv.str().rfind("model\tclass\tprecision\trecall\tf_measure\tsupport\n", 0) == 0);
        CHECK(tsv.str().find("\n" + std::string(to_string(kind)) + "\tweighted\t") != std::string::npos);
        CHECK(format_report(r).find("weighted") != std::string::npos);
    }
    CHECK_THROWS_AS(evaluate_holdout(parts.train, LabeledCorpus{}, {}), EmptyEvaluationError);
}

TEST_CASE("cross-validation pools fold matrices") {
    SyntheticOptions so;
    so.n_issues = 120;
    so.seed = 4;
    const auto corpus = make_synthetic_corpus(so);
    for (const auto fit : {VocabularyFit::train_only, VocabularyFit::full_corpus}) {
        EvaluationConfig cfg;
        cfg.kind = ModelKind::naive_bayes;
        cfg.vocabulary_fit = fit;
        const auto r = cross_validate(corpus, 5, cfg);
        CHECK(r.config.mode == "cross_validation");
        CHECK(r.config.folds == 5);
        REQUIRE(r.folds.size() == 5);
        ConfusionMatrix pooled;
        for (const auto& f : r.folds) pooled += f.matrix;
        CHECK(pooled == r.matrix);
        CHECK(r.matrix.total() == corpus.size());
        CHECK(r.matrix.tp + r.matrix.fn == corpus.counts().wontfix);
        REQUIRE(r.mean_fold_metrics.has_value());
        double mean = 0.0;
        for (const auto& f : r.folds) mean += f.metrics.f_measure / 5.0;
        CHECK(r.mean_fold_metrics->f_measure == doctest::Approx(mean).epsilon(1e-12));
        CHECK(report_to_json(r).at("folds").size() == 5);
    }
    const auto fixture = load_corpus(test::data_path("fixture_corpus.jsonl"));
    CHECK_THROWS_AS(cross_validate(fixture, 13, {}), TooFewInstancesError);
}
