#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wontfix/corpus.hpp"
#include "wontfix/discussion_metrics.hpp"
#include "wontfix/stat_tests.hpp"

namespace wontfix {

class MissingAnnotationsError : public DataError {
public:
    using DataError::DataError;
};

// Closing-motivation categories compared in the hypothesis-test table.
enum class Category { all, bug, not_a_bug, feature_request, change };

inline constexpr std::array<Category, 5> kCategories = {Category::all, Category::bug, Category::not_a_bug,
                                                        Category::feature_request, Category::change};

std::string_view category_name(Category c);   // "All", "Bug", ...
std::string_view category_short(Category c);  // "A", "B", "NB", "FR", "C"
Category parse_category(std::string_view s); // accepts either form, case-insensitive short form

// All is every annotated issue; the others require a closing motivation from
// the matching taxonomy group.
bool in_category(const TaxonomyAnnotation& annotation, Category c);

// A-B, A-NB, A-FR, A-C, B-NB, B-FR, B-C, NB-FR, NB-C, FR-C.
std::vector<std::pair<Category, Category>> category_pairs();

enum class PBand { significant, marginal, not_significant };  // <0.05, [0.05, 0.1], >0.1
PBand band_of(double p);
std::string_view band_label(PBand b);

inline constexpr double kSignificanceLevel = 0.05;

struct ComparisonCell {
    Metric metric;
    Category first;
    Category second;
    std::size_t n_first = 0;
    std::size_t n_second = 0;
    std::optional<StatTestResult> result;  // empty when a category has no values
};

struct ComparisonTable {
    std::vector<Metric> metrics;
    std::vector<std::pair<Category, Category>> pairs;
    std::vector<ComparisonCell> cells;  // metric-major

    const ComparisonCell& cell(std::size_t metric_row, std::size_t pair_col) const {
        return cells.at(metric_row * pairs.size() + pair_col);
    }
};

// Mann-Whitney for every metric and category pair. Throws
// MissingAnnotationsError when the corpus carries no annotations.
ComparisonTable compare_categories(const LabeledCorpus& corpus, const MetricOptions& options = {},
                                   std::span<const Metric> metrics = kAllMetrics);

enum class ActorBucket { at_most_two, three_to_four, five_or_more };

inline constexpr std::array<ActorBucket, 3> kActorBuckets = {ActorBucket::at_most_two, ActorBucket::three_to_four,
                                                             ActorBucket::five_or_more};

ActorBucket actor_bucket(std::size_t n_actors);
std::string_view bucket_name(ActorBucket b);  // "x<=2", "3<=x<=4", "x>=5"

struct BucketAnalysis {
    Metric metric = Metric::time_to_close;
    std::optional<Category> category;  // nullopt: every issue of the corpus
    std::array<std::vector<double>, 3> values;
    // (x<=2, 3-4), (x<=2, >=5), (3-4, >=5)
    std::array<std::optional<StatTestResult>, 3> tests;
};

// Issues without a value for the metric (never closed) are skipped.
// Selecting a category requires annotations.
BucketAnalysis bucket_by_actors(const LabeledCorpus& corpus, Metric metric = Metric::time_to_close,
                                std::optional<Category> category = std::nullopt, const MetricOptions& options = {});

struct Cooccurrence {
    std::vector<std::string> opening;  // row ids, taxonomy order, only those present
    std::vector<std::string> closing;  // column ids, taxonomy order, only those present
    std::vector<std::vector<std::size_t>> counts;
    std::vector<std::size_t> opening_totals;  // annotated issues carrying each opening motivation

    // counts[row][col] / opening_totals[row].
    double row_share(std::size_t row, std::size_t col) const;
};

Cooccurrence cooccurrence(const LabeledCorpus& corpus);

struct DistributionSummary {
    std::size_t n = 0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

// Linear-interpolation quantile (type 7) of already sorted values.
double quantile_sorted(std::span<const double> sorted, double p);
// Throws std::invalid_argument for an empty sample.
DistributionSummary summarize(std::span<const double> values);

// Values of one metric over the issues of a category (or the whole corpus).
std::vector<double> metric_values(const LabeledCorpus& corpus, Metric metric, std::optional<Category> category,
                                  const MetricOptions& options = {});

nlohmann::json comparison_to_json(const ComparisonTable& t);
void write_comparison_tsv(std::ostream& out, const ComparisonTable& t);
nlohmann::json buckets_to_json(const BucketAnalysis& b);
void write_buckets_tsv(std::ostream& out, const BucketAnalysis& b);
nlohmann::json cooccurrence_to_json(const Cooccurrence& c);
void write_cooccurrence_tsv(std::ostream& out, const Cooccurrence& c);
nlohmann::json summary_to_json(const DistributionSummary& s);

}  // namespace wontfix
