#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <variant>

#include <json.hpp>

#include "wontfix/classifiers.hpp"
#include "wontfix/decision_tree.hpp"
#include "wontfix/features.hpp"
#include "wontfix/naive_bayes.hpp"
#include "wontfix/svm.hpp"

namespace wontfix {

class FormatError : public DataError {
public:
    using DataError::DataError;
};

class VersionError : public FormatError {
public:
    using FormatError::FormatError;
};

inline constexpr int kModelFormatVersion = 1;

// A trained classifier together with everything needed to vectorize new
// issues the same way.
struct TrainedModel {
    ModelKind kind = ModelKind::naive_bayes;
    Hyperparameters hyperparameters;
    Weighting weighting = Weighting::raw;
    VocabularyFit vocabulary_fit = VocabularyFit::train_only;
    std::shared_ptr<const Vocabulary> vocabulary;
    std::variant<NaiveBayesModel, LinearSvmModel, DecisionTreeModel> body;
    // Free-form record of the command that produced the model.
    nlohmann::json run_config = nlohmann::json::object();

    Prediction predict(const SparseVector& v) const;
    Prediction predict_issue(std::string_view title, std::string_view body_text) const;

    // False only for an SVM that ran out of passes.
    bool converged() const;
};

TrainedModel train_model(ModelKind kind, const TermDocumentMatrix& matrix, const Hyperparameters& hyper);

void save_model(std::ostream& out, const TrainedModel& model);
void save_model(const std::filesystem::path& path, const TrainedModel& model);

// Throws FormatError for malformed files and VersionError for files written
// by another format version.
TrainedModel load_model(std::istream& in);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace wontfix
