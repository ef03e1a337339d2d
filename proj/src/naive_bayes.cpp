#include "wontfix/naive_bayes.hpp"

#include <cmath>
#include <stdexcept>

namespace wontfix {

std::string_view to_string(ModelKind k) {
    switch (k) {
        case ModelKind::naive_bayes: return "naive_bayes";
        case ModelKind::smo: return "smo";
        case ModelKind::j48: return "j48";
    }
    return "naive_bayes";
}

ModelKind parse_model_kind(std::string_view s) {
    if (s == "naive_bayes" || s == "nb") return ModelKind::naive_bayes;
    if (s == "smo" || s == "svm") return ModelKind::smo;
    if (s == "j48" || s == "tree") return ModelKind::j48;
    throw std::invalid_argument("unknown model kind '" + std::string(s) + "'");
}

void require_both_classes(std::span<const IssueClass> labels) {
    bool seen[2] = {false, false};
    for (const IssueClass c : labels) seen[static_cast<int>(c)] = true;
    if (!seen[0] || !seen[1]) throw SingleClassError("training data must contain both classes");
}

double NaiveBayesModel::log_score(IssueClass c, const SparseVector& v) const {
    const int k = static_cast<int>(c);
    double s = log_prior[k];
    for (const auto& e : v)
        if (e.index < log_likelihood[k].size()) s += e.weight * log_likelihood[k][e.index];
    return s;
}

Prediction NaiveBayesModel::predict(const SparseVector& v) const {
    const double gap = log_score(IssueClass::wontfix, v) - log_score(IssueClass::non_wontfix, v);
    Prediction p;
    p.score = gap;
    if (gap > 0.0)
        p.label = IssueClass::wontfix;
    else if (gap < 0.0)
        p.label = IssueClass::non_wontfix;
    else
        p.label = log_prior[0] > log_prior[1] ? IssueClass::wontfix : IssueClass::non_wontfix;
    return p;
}

NaiveBayesModel train_naive_bayes(const TermDocumentMatrix& matrix, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("Naive Bayes smoothing alpha must be positive");
    require_both_classes(matrix.labels);
    const std::size_t n_terms = matrix.n_terms();

    std::array<std::vector<double>, 2> mass = {std::vector<double>(n_terms, 0.0), std::vector<double>(n_terms, 0.0)};
    std::array<double, 2> total_mass{0.0, 0.0};
    std::array<std::size_t, 2> n_docs{0, 0};
    for (std::size_t d = 0; d < matrix.n_docs(); ++d) {
        const int k = static_cast<int>(matrix.labels[d]);
        ++n_docs[k];
        for (const auto& e : matrix.rows[d]) {
            mass[k][e.index] += e.weight;
            total_mass[k] += e.weight;
        }
    }

    NaiveBayesModel m;
    m.alpha = alpha;
    const double n = static_cast<double>(matrix.n_docs());
    for (int k = 0; k < 2; ++k) {
        m.log_prior[k] = std::log(static_cast<double>(n_docs[k]) / n);
        const double log_denominator = std::log(alpha * static_cast<double>(n_terms) + total_mass[k]);
        m.log_likelihood[k].resize(n_terms);
        for (std::size_t t = 0; t < n_terms; ++t) m.log_likelihood[k][t] = std::log(alpha + mass[k][t]) - log_denominator;
    }
    return m;
}

}  // namespace wontfix
