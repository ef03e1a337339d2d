#pragma once

#include <array>
#include <vector>

#include "wontfix/classifiers.hpp"
#include "wontfix/features.hpp"

namespace wontfix {

// Multinomial event model over tf-idf mass. Arrays are indexed by
// static_cast<int>(IssueClass).
struct NaiveBayesModel {
    double alpha = 1.0;
    std::array<double, 2> log_prior{};
    std::array<std::vector<double>, 2> log_likelihood;

    // log prior + sum of v_t * log likelihood for class c.
    double log_score(IssueClass c, const SparseVector& v) const;

    // score = log_score(wontfix) - log_score(non_wontfix). A zero gap goes to
    // the class with the larger prior, then to non_wontfix.
    Prediction predict(const SparseVector& v) const;
};

// Throws SingleClassError, std::invalid_argument for alpha <= 0.
NaiveBayesModel train_naive_bayes(const TermDocumentMatrix& matrix, double alpha = 1.0);

}  // namespace wontfix
