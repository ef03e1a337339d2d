#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wontfix/classifiers.hpp"
#include "wontfix/corpus.hpp"
#include "wontfix/features.hpp"

namespace wontfix {

class EmptyEvaluationError : public DataError {
public:
    using DataError::DataError;
};

class TooFewInstancesError : public DataError {
public:
    using DataError::DataError;
};

// Rows are the actual class: (tp, fn) for wontfix, (fp, tn) for non_wontfix.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fn = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + fn + fp + tn; }
    void add(IssueClass actual, IssueClass predicted);
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
    bool operator==(const ConfusionMatrix&) const = default;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    std::size_t support = 0;
    // Set when a 0/0 ratio was reported as 0.
    bool precision_undefined = false;
    bool recall_undefined = false;
};

struct Metrics {
    ClassMetrics wontfix;
    ClassMetrics non_wontfix;
    // Support-weighted averages of the per-class values.
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    double accuracy = 0.0;
};

// Throws EmptyEvaluationError when the matrix is all zeros.
Metrics metrics_from_confusion(const ConfusionMatrix& cm);

struct EvaluationConfig {
    ModelKind kind = ModelKind::naive_bayes;
    Hyperparameters hyperparameters;
    Weighting weighting = Weighting::raw;
    VocabularyFit vocabulary_fit = VocabularyFit::train_only;
    std::size_t min_df = 1;
    std::uint64_t seed = kDefaultSeed;
    // Filled in by the evaluation entry points.
    std::string mode;
    std::size_t folds = 0;
    double split_fraction = 0.0;
};

struct FoldResult {
    std::size_t fold = 0;
    ConfusionMatrix matrix;
    Metrics metrics;
    bool converged = true;
};

struct EvaluationReport {
    EvaluationConfig config;
    ConfusionMatrix matrix;
    Metrics metrics;
    std::vector<FoldResult> folds;          // empty for holdout
    std::optional<Metrics> mean_fold_metrics;  // unweighted mean over folds
    std::vector<std::string> warnings;
    bool converged = true;
};

// Fold id in [0, k) for every instance: per class, a seeded shuffle dealt
// round-robin, continuing the deal from one class to the next. Throws
// TooFewInstancesError if a class has fewer than k members.
std::vector<std::size_t> stratified_folds(std::span<const IssueClass> classes, std::size_t k, std::uint64_t seed);

// Trains on `train`, predicts `test`. The vocabulary is fitted on train, or
// on train + test for VocabularyFit::full_corpus. Throws EmptyEvaluationError
// when test is empty.
EvaluationReport evaluate_holdout(const LabeledCorpus& train, const LabeledCorpus& test, EvaluationConfig config);

// Stratified k-fold cross-validation with pooled confusion matrix.
EvaluationReport cross_validate(const LabeledCorpus& corpus, std::size_t k, EvaluationConfig config);

nlohmann::json metrics_to_json(const Metrics& m);
nlohmann::json config_to_json(const EvaluationConfig& c);
// {matrix, per_class, weighted, config} plus folds and warnings when present.
nlohmann::json report_to_json(const EvaluationReport& r);
// class, precision, recall, f_measure, support rows with a weighted row.
void write_report_tsv(std::ostream& out, const EvaluationReport& r);
// Human-readable table with 3-decimal rounding.
std::string format_report(const EvaluationReport& r);

}  // namespace wontfix
