#include "wontfix/analytics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "wontfix/features.hpp"
#include "wontfix/taxonomy.hpp"

namespace wontfix {

using nlohmann::json;

std::string_view category_name(Category c) {
    switch (c) {
        case Category::all: return "All";
        case Category::bug: return "Bug";
        case Category::not_a_bug: return "Not a bug";
        case Category::feature_request: return "Feature request/enhancement";
        case Category::change: return "Change";
    }
    return "";
}

std::string_view category_short(Category c) {
    switch (c) {
        case Category::all: return "A";
        case Category::bug: return "B";
        case Category::not_a_bug: return "NB";
        case Category::feature_request: return "FR";
        case Category::change: return "C";
    }
    return "";
}

Category parse_category(std::string_view s) {
    std::string upper;
    for (const char c : s) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    for (const Category c : kCategories)
        if (category_name(c) == s || category_short(c) == upper) return c;
    throw std::invalid_argument("unknown category '" + std::string(s) + "'");
}

bool in_category(const TaxonomyAnnotation& annotation, Category c) {
    if (c == Category::all) return true;
    std::string_view group;
    switch (c) {
        case Category::bug: group = closing_group::bug; break;
        case Category::not_a_bug: group = closing_group::not_a_bug; break;
        case Category::feature_request: group = closing_group::feature_request; break;
        case Category::change: group = closing_group::change; break;
        case Category::all: break;
    }
    const Taxonomy& tax = Taxonomy::builtin();
    return std::any_of(annotation.closing.begin(), annotation.closing.end(), [&](const std::string& id) {
        const Motivation* m = tax.find(TaxonomyKind::closing, id);
        return m && m->group == group;
    });
}

std::vector<std::pair<Category, Category>> category_pairs() {
    std::vector<std::pair<Category, Category>> pairs;
    for (std::size_t i = 0; i < kCategories.size(); ++i)
        for (std::size_t j = i + 1; j < kCategories.size(); ++j) pairs.emplace_back(kCategories[i], kCategories[j]);
    return pairs;
}

PBand band_of(double p) {
    if (p < 0.05) return PBand::significant;
    if (p <= 0.1) return PBand::marginal;
    return PBand::not_significant;
}

std::string_view band_label(PBand b) {
    switch (b) {
        case PBand::significant: return "p<0.05";
        case PBand::marginal: return "0.05<=p<=0.1";
        case PBand::not_significant: return "p>0.1";
    }
    return "";
}

namespace {

std::vector<DiscussionMetrics> all_metrics(const LabeledCorpus& corpus, const MetricOptions& options) {
    std::vector<DiscussionMetrics> out;
    out.reserve(corpus.size());
    for (const auto& issue : corpus.issues()) out.push_back(compute_metrics(issue, options));
    return out;
}

bool issue_in(const LabeledCorpus& corpus, std::size_t i, std::optional<Category> category) {
    if (!category) return true;
    const TaxonomyAnnotation* a = corpus.annotation(corpus.issue(i).id);
    return a && in_category(*a, *category);
}

std::vector<double> collect(const LabeledCorpus& corpus, const std::vector<DiscussionMetrics>& metrics, Metric metric,
                            std::optional<Category> category) {
    std::vector<double> values;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (!issue_in(corpus, i, category)) continue;
        if (const auto v = metric_value(metrics[i], metric)) values.push_back(*v);
    }
    return values;
}

void require_annotations(const LabeledCorpus& corpus) {
    if (!corpus.has_annotations())
        throw MissingAnnotationsError(
            "this analysis needs closing-motivation annotations (an \"annotations\" object on each issue record)");
}

std::optional<StatTestResult> test_or_empty(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return std::nullopt;
    return mann_whitney(a, b);
}

}  // namespace

std::vector<double> metric_values(const LabeledCorpus& corpus, Metric metric, std::optional<Category> category,
                                  const MetricOptions& options) {
    if (category) require_annotations(corpus);
    return collect(corpus, all_metrics(corpus, options), metric, category);
}

ComparisonTable compare_categories(const LabeledCorpus& corpus, const MetricOptions& options,
                                   std::span<const Metric> metrics) {
    require_annotations(corpus);
    const auto per_issue = all_metrics(corpus, options);
    ComparisonTable t;
    t.metrics.assign(metrics.begin(), metrics.end());
    t.pairs = category_pairs();
    for (const Metric m : t.metrics) {
        std::array<std::vector<double>, kCategories.size()> values;
        for (std::size_t c = 0; c < kCategories.size(); ++c) values[c] = collect(corpus, per_issue, m, kCategories[c]);
        for (const auto& [a, b] : t.pairs) {
            const auto& va = values[static_cast<std::size_t>(a)];
            const auto& vb = values[static_cast<std::size_t>(b)];
            t.cells.push_back({m, a, b, va.size(), vb.size(), test_or_empty(va, vb)});
        }
    }
    return t;
}

ActorBucket actor_bucket(std::size_t n_actors) {
    if (n_actors <= 2) return ActorBucket::at_most_two;
    if (n_actors <= 4) return ActorBucket::three_to_four;
    return ActorBucket::five_or_more;
}

std::string_view bucket_name(ActorBucket b) {
    switch (b) {
        case ActorBucket::at_most_two: return "x<=2";
        case ActorBucket::three_to_four: return "3<=x<=4";
        case ActorBucket::five_or_more: return "x>=5";
    }
    return "";
}

BucketAnalysis bucket_by_actors(const LabeledCorpus& corpus, Metric metric, std::optional<Category> category,
                                const MetricOptions& options) {
    if (category) require_annotations(corpus);
    const auto per_issue = all_metrics(corpus, options);
    BucketAnalysis b;
    b.metric = metric;
    b.category = category;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (!issue_in(corpus, i, category)) continue;
        if (const auto v = metric_value(per_issue[i], metric))
            b.values[static_cast<std::size_t>(actor_bucket(per_issue[i].n_actors))].push_back(*v);
    }
    b.tests[0] = test_or_empty(b.values[0], b.values[1]);
    b.tests[1] = test_or_empty(b.values[0], b.values[2]);
    b.tests[2] = test_or_empty(b.values[1], b.values[2]);
    return b;
}

double Cooccurrence::row_share(std::size_t row, std::size_t col) const {
    const std::size_t total = opening_totals.at(row);
    return total == 0 ? 0.0 : static_cast<double>(counts.at(row).at(col)) / static_cast<double>(total);
}

Cooccurrence cooccurrence(const LabeledCorpus& corpus) {
    Cooccurrence c;
    const Taxonomy& tax = Taxonomy::builtin();
    std::vector<std::string> opening_present, closing_present;
    for (const auto& m : tax.motivations(TaxonomyKind::opening)) {
        const bool used = std::any_of(corpus.annotations().begin(), corpus.annotations().end(),
                                      [&](const auto& kv) { return kv.second.opening.contains(m.id); });
        if (used) c.opening.push_back(m.id);
    }
    for (const auto& m : tax.motivations(TaxonomyKind::closing)) {
        const bool used = std::any_of(corpus.annotations().begin(), corpus.annotations().end(),
                                      [&](const auto& kv) { return kv.second.closing.contains(m.id); });
        if (used) c.closing.push_back(m.id);
    }
    c.counts.assign(c.opening.size(), std::vector<std::size_t>(c.closing.size(), 0));
    c.opening_totals.assign(c.opening.size(), 0);
    for (const auto& [id, a] : corpus.annotations()) {
        for (std::size_t r = 0; r < c.opening.size(); ++r) {
            if (!a.opening.contains(c.opening[r])) continue;
            ++c.opening_totals[r];
            for (std::size_t k = 0; k < c.closing.size(); ++k)
                if (a.closing.contains(c.closing[k])) ++c.counts[r][k];
        }
    }
    return c;
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

DistributionSummary summarize(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("cannot summarize an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    DistributionSummary s;
    s.n = sorted.size();
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);
    double sum = 0.0;
    for (const double v : sorted) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    return s;
}

// --- output -------------------------------------------------------------------

namespace {

json test_to_json(const std::optional<StatTestResult>& r) {
    if (!r) return nullptr;
    json j = {{"statistic", r->statistic},
              {"p_value", r->p_value},
              {"band", band_label(band_of(r->p_value))},
              {"method", to_string(r->method)},
              {"n1", r->n1},
              {"n2", r->n2}};
    if (r->z) j["z"] = *r->z;
    if (r->degenerate) j["degenerate"] = true;
    return j;
}

std::string pair_label(Category a, Category b) {
    return std::string(category_short(a)) + "-" + std::string(category_short(b));
}

}  // namespace

json comparison_to_json(const ComparisonTable& t) {
    json pairs = json::array();
    for (const auto& [a, b] : t.pairs) pairs.push_back(pair_label(a, b));
    json rows = json::array();
    for (std::size_t m = 0; m < t.metrics.size(); ++m) {
        json cells = json::array();
        for (std::size_t p = 0; p < t.pairs.size(); ++p) {
            const auto& c = t.cell(m, p);
            json jc = test_to_json(c.result);
            if (jc.is_null()) jc = json::object({{"p_value", nullptr}});
            jc["pair"] = pair_label(c.first, c.second);
            cells.push_back(std::move(jc));
        }
        rows.push_back({{"metric", metric_name(t.metrics[m])}, {"cells", std::move(cells)}});
    }
    return {{"alpha", kSignificanceLevel}, {"pairs", std::move(pairs)}, {"rows", std::move(rows)}};
}

void write_comparison_tsv(std::ostream& out, const ComparisonTable& t) {
    out << "metric";
    for (const auto& [a, b] : t.pairs) out << '\t' << pair_label(a, b);
    out << '\n';
    for (std::size_t m = 0; m < t.metrics.size(); ++m) {
        out << metric_name(t.metrics[m]);
        for (std::size_t p = 0; p < t.pairs.size(); ++p) {
            const auto& c = t.cell(m, p);
            out << '\t' << (c.result ? format_double(c.result->p_value) : "NA");
        }
        out << '\n';
    }
}

json buckets_to_json(const BucketAnalysis& b) {
    json buckets = json::array();
    for (std::size_t k = 0; k < 3; ++k) {
        json jb = {{"bucket", bucket_name(kActorBuckets[k])}, {"n", b.values[k].size()}};
        if (!b.values[k].empty()) jb["summary"] = summary_to_json(summarize(b.values[k]));
        buckets.push_back(std::move(jb));
    }
    static constexpr std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
    json tests = json::array();
    for (std::size_t k = 0; k < 3; ++k) {
        json jt = test_to_json(b.tests[k]);
        if (jt.is_null()) jt = json::object({{"p_value", nullptr}});
        jt["pair"] = std::string(bucket_name(kActorBuckets[pairs[k].first])) + " vs " +
                     std::string(bucket_name(kActorBuckets[pairs[k].second]));
        tests.push_back(std::move(jt));
    }
    return {{"metric", metric_name(b.metric)},
            {"category", b.category ? json(category_name(*b.category)) : json("corpus")},
            {"buckets", std::move(buckets)},
            {"tests", std::move(tests)}};
}

void write_buckets_tsv(std::ostream& out, const BucketAnalysis& b) {
    static constexpr std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
    out << "category\tfirst\tsecond\tn_first\tn_second\tp_value\n";
    const std::string cat = b.category ? std::string(category_name(*b.category)) : "corpus";
    for (std::size_t k = 0; k < 3; ++k) {
        out << cat << '\t' << bucket_name(kActorBuckets[pairs[k].first]) << '\t'
            << bucket_name(kActorBuckets[pairs[k].second]) << '\t' << b.values[pairs[k].first].size() << '\t'
            << b.values[pairs[k].second].size() << '\t' << (b.tests[k] ? format_double(b.tests[k]->p_value) : "NA")
            << '\n';
    }
}

json cooccurrence_to_json(const Cooccurrence& c) {
    json rows = json::array();
    for (std::size_t r = 0; r < c.opening.size(); ++r) {
        json cells = json::object();
        for (std::size_t k = 0; k < c.closing.size(); ++k)
            if (c.counts[r][k]) cells[c.closing[k]] = {{"count", c.counts[r][k]}, {"row_share", c.row_share(r, k)}};
        rows.push_back({{"opening", c.opening[r]}, {"issues", c.opening_totals[r]}, {"closing", std::move(cells)}});
    }
    return {{"rows", std::move(rows)}};
}

void write_cooccurrence_tsv(std::ostream& out, const Cooccurrence& c) {
    out << "opening\tclosing\tcount\trow_share\n";
    for (std::size_t r = 0; r < c.opening.size(); ++r)
        for (std::size_t k = 0; k < c.closing.size(); ++k)
            if (c.counts[r][k])
                out << c.opening[r] << '\t' << c.closing[k] << '\t' << c.counts[r][k] << '\t'
                    << format_double(c.row_share(r, k)) << '\n';
}

json summary_to_json(const DistributionSummary& s) {
    return {{"n", s.n},     {"min", s.min}, {"q1", s.q1},  {"median", s.median},
            {"mean", s.mean}, {"q3", s.q3}, {"max", s.max}};
}

}  // namespace wontfix
