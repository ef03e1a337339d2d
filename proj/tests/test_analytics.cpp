#include <doctest.h>

#include <map>
#include <sstream>

#include "support.hpp"
#include "wontfix/analytics.hpp"
#include "wontfix/random.hpp"
#include "wontfix/taxonomy.hpp"

using namespace wontfix;

namespace {

const Timestamp kStart = parse_timestamp("2021-03-01T00:00:00Z");

IssueRecord issue_with_comments(const std::string& author, const std::vector<std::string>& commenters) {
    IssueRecord r;
    r.id = "o/r#1";
    r.repo = "o/r";
    r.author = author;
    r.body = "body";
    r.created_at = kStart;
    r.closed_at = kStart + std::chrono::hours(48);
    for (std::size_t i = 0; i < commenters.size(); ++i)
        r.comments.push_back({commenters[i], kStart + std::chrono::hours(i + 1), "c"});
    return r;
}

IssueRecord random_issue(Rng& rng, std::size_t number) {
    static const std::vector<std::string> bodies = {"", "short", "a longer comment body", "é ü ß", "日本語",
                                                    "emoji 🙂", std::string("\xff\xfe", 2)};
    IssueRecord r;
    r.id = "o/r#" + std::to_string(number);
    r.repo = "o/r";
    r.author = "u" + std::to_string(uniform_index(rng, 6));
    r.body = bodies[uniform_index(rng, bodies.size())];
    r.created_at = kStart + std::chrono::seconds(uniform_index(rng, 1000000));
    const std::size_t n = uniform_index(rng, 12);
    Timestamp t = r.created_at;
    for (std::size_t i = 0; i < n; ++i) {
        t += std::chrono::seconds(uniform_index(rng, 200000));
        r.comments.push_back({"u" + std::to_string(uniform_index(rng, 6)), t, bodies[uniform_index(rng, bodies.size())]});
    }
    if (uniform_index(rng, 5) == 0) {
        r.state = IssueState::open;
    } else {
        r.closed_at = t + std::chrono::seconds(uniform_index(rng, 100000));
    }
    return r;
}

LabeledCorpus fixture() { return load_corpus(test::data_path("fixture_corpus.jsonl")); }

}  // namespace

TEST_CASE("participant metrics on hand fixtures") {
    SUBCASE("A,A,A,B,C") {
        const auto d = compute_metrics(issue_with_comments("A", {"A", "A", "A", "B", "C"}));
        CHECK(d.n_actors == 3);
        CHECK(d.max_author_percentage == 0.6);
        CHECK(d.major_authors == 1);
        CHECK(d.minor_authors == 2);
        CHECK(d.n_comments == 5);
    }
    SUBCASE("exactly one third each") {
        const auto d = compute_metrics(issue_with_comments("A", {"A", "B", "C"}));
        CHECK(d.n_actors == 3);
        CHECK(d.major_authors == 0);
        CHECK(d.minor_authors == 0);
        CHECK(d.max_author_percentage == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("opening post as a message") {
        MetricOptions opt;
        opt.count_opening_post = true;
        // A opens and comments twice, B once: 3 of 4 messages.
        const auto d = compute_metrics(issue_with_comments("A", {"A", "B", "A"}), opt);
        CHECK(d.n_actors == 2);
        CHECK(d.max_author_percentage == 0.75);
        CHECK(d.major_authors == 1);
        CHECK(d.minor_authors == 1);
        CHECK(compute_metrics(issue_with_comments("Z", {}), opt).n_actors == 1);
    }
    SUBCASE("no comments") {
        const auto d = compute_metrics(issue_with_comments("A", {}));
        CHECK(d.n_actors == 0);
        CHECK(d.max_author_percentage == 0.0);
        CHECK(d.mean_comment_size == 0.0);
        CHECK(d.time_to_discuss == 0.0);
        CHECK(d.time_to_close() == 2.0);
    }
}

TEST_CASE("time and size metrics") {
    auto issue = issue_with_comments("A", {"B", "C"});
    issue.body = "héllo";
    issue.comments[0].body = "abc";
    issue.comments[1].body = "日本";
    const auto d = compute_metrics(issue);
    CHECK(d.description_length == 5);
    CHECK(d.mean_comment_size == 2.5);
    CHECK(d.time_to_discuss == doctest::Approx(2.0 / 24.0));
    CHECK(d.time_to_close() == 2.0);

    issue.state = IssueState::open;
    issue.closed_at.reset();
    const auto open = compute_metrics(issue);
    CHECK_FALSE(open.time_to_close_days.has_value());
    CHECK_THROWS_AS(open.time_to_close(), MissingCloseTimeError);
    CHECK_FALSE(metric_value(open, Metric::time_to_close).has_value());

    CHECK(utf8_length("") == 0);
    CHECK(utf8_length("abc") == 3);
    CHECK(utf8_length("🙂") == 1);
    CHECK(utf8_length(std::string("\xe6\x97", 2)) == 2);
}

TEST_CASE("metric invariants over random issues") {
    Rng rng(1000);
    for (std::size_t k = 0; k < 1000; ++k) {
        const auto issue = random_issue(rng, k + 1);
        for (const bool opening : {false, true}) {
            MetricOptions opt;
            opt.count_opening_post = opening;
            const auto d = compute_metrics(issue, opt);

            std::map<std::string, std::size_t> counts;
            if (opening) ++counts[issue.author];
            for (const auto& c : issue.comments) ++counts[c.author];
            std::size_t messages = issue.comments.size() + (opening ? 1 : 0), top = 0, size = 0;
            for (const auto& [a, n] : counts) top = std::max(top, n);
            for (const auto& c : issue.comments) size += utf8_length(c.body);

            CHECK(d.n_comments == issue.comments.size());
            CHECK(d.n_actors == counts.size());
            CHECK(d.n_actors <= messages);
            CHECK(d.major_authors <= 2);
            CHECK(d.major_authors + d.minor_authors <= d.n_actors);
            if (messages > 0) {
                CHECK(d.max_author_percentage == static_cast<double>(top) / static_cast<double>(messages));
                CHECK(d.max_author_percentage * static_cast<double>(d.n_actors) >= 1.0 - 1e-12);
                CHECK(d.max_author_percentage <= 1.0);
                if (d.n_actors == 1) CHECK(d.major_authors == 1);
            } else {
                CHECK(d.max_author_percentage == 0.0);
            }
            CHECK(d.mean_comment_size * static_cast<double>(issue.comments.size()) ==
                  doctest::Approx(static_cast<double>(size)));
            CHECK(d.time_to_discuss >= 0.0);
            if (issue.closed_at) {
                CHECK(d.time_to_close() >= 0.0);
                CHECK(d.time_to_close() >= d.time_to_discuss);
            }
            // The text of the title never matters.
            IssueRecord retitled = issue;
            retitled.title = "changed";
            CHECK(compute_metrics(retitled, opt).max_author_percentage == d.max_author_percentage);
        }
    }
}

TEST_CASE("metric names round trip") {
    for (const Metric m : kAllMetrics) CHECK(parse_metric(metric_name(m)) == m);
    CHECK(metric_name(Metric::time_to_close) == "timeToCloseIssue");
    CHECK_THROWS_AS(parse_metric("timeToClose"), std::invalid_argument);
    for (const Category c : kCategories) {
        CHECK(parse_category(category_name(c)) == c);
        CHECK(parse_category(category_short(c)) == c);
    }
    CHECK(parse_category("fr") == Category::feature_request);
}

TEST_CASE("p-value bands") {
    CHECK(band_of(0.01) == PBand::significant);
    CHECK(band_of(0.0499) == PBand::significant);
    CHECK(band_of(0.05) == PBand::marginal);
    CHECK(band_of(0.1) == PBand::marginal);
    CHECK(band_of(0.1001) == PBand::not_significant);
}

TEST_CASE("category comparison table") {
    const auto corpus = fixture();
    const auto table = compare_categories(corpus);
    CHECK(table.metrics.size() == 9);
    REQUIRE(table.pairs.size() == 10);
    CHECK(table.pairs.front() == std::pair{Category::all, Category::bug});
    CHECK(table.pairs.back() == std::pair{Category::feature_request, Category::change});
    CHECK(table.cells.size() == 90);

    for (std::size_t row = 0; row < table.metrics.size(); ++row)
        for (std::size_t col = 0; col < table.pairs.size(); ++col) {
            const auto& cell = table.cell(row, col);
            const auto a = metric_values(corpus, cell.metric, cell.first);
            const auto b = metric_values(corpus, cell.metric, cell.second);
            CHECK(cell.n_first == a.size());
            CHECK(cell.n_second == b.size());
            if (a.empty() || b.empty()) {
                CHECK_FALSE(cell.result.has_value());
                continue;
            }
            REQUIRE(cell.result.has_value());
            const auto direct = mann_whitney(a, b);
            CHECK(cell.result->p_value == direct.p_value);
            CHECK(cell.result->statistic == direct.statistic);
        }
    // "All" covers every annotated issue.
    CHECK(metric_values(corpus, Metric::n_comments, Category::all).size() == corpus.annotations().size());
    CHECK(metric_values(corpus, Metric::n_comments, std::nullopt).size() == corpus.size());

    const auto j = comparison_to_json(table);
    CHECK(j.is_object());
    std::ostringstream tsv;
    write_comparison_tsv(tsv, table);
    std::size_t lines = 0;
    for (const char c : tsv.str()) lines += c == '\n';
    CHECK(lines >= 10);

    const auto plain = LabeledCorpus::from_issues(corpus.issues());
    CHECK_THROWS_AS(compare_categories(plain), MissingAnnotationsError);
    CHECK_THROWS_AS(bucket_by_actors(plain, Metric::time_to_close, Category::bug), MissingAnnotationsError);
}

TEST_CASE("actor buckets") {
    CHECK(actor_bucket(0) == ActorBucket::at_most_two);
    CHECK(actor_bucket(2) == ActorBucket::at_most_two);
    CHECK(actor_bucket(3) == ActorBucket::three_to_four);
    CHECK(actor_bucket(4) == ActorBucket::three_to_four);
    CHECK(actor_bucket(5) == ActorBucket::five_or_more);
    CHECK(bucket_name(ActorBucket::three_to_four) == "3<=x<=4");

    const auto corpus = fixture();
    const auto b = bucket_by_actors(corpus);
    std::size_t total = 0;
    for (const auto& v : b.values) total += v.size();
    CHECK(total == corpus.size());
    const std::array<std::pair<int, int>, 3> bucket_pairs = {{{0, 1}, {0, 2}, {1, 2}}};
    for (std::size_t k = 0; k < 3; ++k) {
        const auto [i, j] = bucket_pairs[k];
        CHECK(b.tests[k].has_value() == (!b.values[i].empty() && !b.values[j].empty()));
    }
    CHECK(buckets_to_json(b).is_object());

    const auto bug = bucket_by_actors(corpus, Metric::time_to_close, Category::bug);
    std::size_t bug_total = 0;
    for (const auto& v : bug.values) bug_total += v.size();
    CHECK(bug_total == metric_values(corpus, Metric::time_to_close, Category::bug).size());
}

TEST_CASE("co-occurrence") {
    const auto corpus = fixture();
    const auto c = cooccurrence(corpus);
    REQUIRE(c.counts.size() == c.opening.size());
    const auto& tax = Taxonomy::builtin();
    for (std::size_t r = 0; r < c.opening.size(); ++r) {
        CHECK(tax.find(TaxonomyKind::opening, c.opening[r]) != nullptr);
        std::size_t carrying = 0;
        for (const auto& [id, a] : corpus.annotations()) carrying += a.opening.count(c.opening[r]);
        CHECK(c.opening_totals[r] == carrying);
        for (std::size_t col = 0; col < c.closing.size(); ++col) {
            std::size_t both = 0;
            for (const auto& [id, a] : corpus.annotations())
                both += a.opening.count(c.opening[r]) && a.closing.count(c.closing[col]);
            CHECK(c.counts[r][col] == both);
            CHECK(c.row_share(r, col) == doctest::Approx(static_cast<double>(both) / static_cast<double>(carrying)));
        }
    }
    CHECK(cooccurrence_to_json(c).is_object());
}

TEST_CASE("distribution summary") {
    const std::vector<double> v = {1, 2, 3, 4};
    CHECK(quantile_sorted(v, 0.0) == 1.0);
    CHECK(quantile_sorted(v, 0.5) == 2.5);
    CHECK(quantile_sorted(v, 0.25) == 1.75);
    CHECK(quantile_sorted(v, 1.0) == 4.0);
    const std::vector<double> unsorted = {4, 1, 3, 2};
    const auto s = summarize(unsorted);
    CHECK(s.n == 4);
    CHECK(s.min == 1.0);
    CHECK(s.max == 4.0);
    CHECK(s.median == 2.5);
    CHECK(s.mean == 2.5);
    CHECK(s.q3 == 3.25);
    CHECK_THROWS_AS(summarize(std::vector<double>{}), std::invalid_argument);
    CHECK(summary_to_json(s).at("median") == 2.5);
}
