#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "wontfix/corpus.hpp"
#include "wontfix/error.hpp"
#include "wontfix/random.hpp"

namespace wontfix {

// score is oriented so that higher means more wontfix.
struct Prediction {
    IssueClass label = IssueClass::non_wontfix;
    double score = 0.0;
};

class SingleClassError : public DataError {
public:
    using DataError::DataError;
};

enum class ModelKind { naive_bayes, smo, j48 };

std::string_view to_string(ModelKind k);
ModelKind parse_model_kind(std::string_view s);

struct Hyperparameters {
    double nb_alpha = 1.0;

    double svm_c = 1.0;
    double svm_tol = 1e-3;
    double svm_step_epsilon = 1e-12;
    std::size_t svm_max_passes = 10000;

    double j48_confidence = 0.25;
    std::size_t j48_min_leaf = 2;
    bool j48_prune = true;

    std::uint64_t seed = kDefaultSeed;
};

// Throws SingleClassError unless both classes occur in `labels`.
void require_both_classes(std::span<const IssueClass> labels);

}  // namespace wontfix
