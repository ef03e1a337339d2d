#include "wontfix/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace wontfix {

using nlohmann::json;

Prediction TrainedModel::predict(const SparseVector& v) const {
    return std::visit([&](const auto& m) { return m.predict(v); }, body);
}

Prediction TrainedModel::predict_issue(std::string_view title, std::string_view body_text) const {
    return predict(vectorize(preprocess(title, body_text), *vocabulary, weighting));
}

bool TrainedModel::converged() const {
    if (const auto* svm = std::get_if<LinearSvmModel>(&body)) return svm->converged;
    return true;
}

TrainedModel train_model(ModelKind kind, const TermDocumentMatrix& matrix, const Hyperparameters& hyper) {
    TrainedModel model;
    model.kind = kind;
    model.hyperparameters = hyper;
    model.weighting = matrix.weighting;
    model.vocabulary = matrix.vocabulary;
    switch (kind) {
        case ModelKind::naive_bayes:
            model.body = train_naive_bayes(matrix, hyper.nb_alpha);
            break;
        case ModelKind::smo: {
            SmoOptions opt;
            opt.c = hyper.svm_c;
            opt.tol = hyper.svm_tol;
            opt.step_epsilon = hyper.svm_step_epsilon;
            opt.max_passes = hyper.svm_max_passes;
            opt.seed = hyper.seed;
            model.body = train_smo(matrix, opt);
            break;
        }
        case ModelKind::j48:
            model.body = train_j48(matrix, {hyper.j48_confidence, hyper.j48_min_leaf, hyper.j48_prune});
            break;
    }
    return model;
}

// --- serialization ------------------------------------------------------------

namespace {

json hyper_to_json(const Hyperparameters& h) {
    return {{"nb_alpha", h.nb_alpha},
            {"svm_c", h.svm_c},
            {"svm_tol", h.svm_tol},
            {"svm_step_epsilon", h.svm_step_epsilon},
            {"svm_max_passes", h.svm_max_passes},
            {"j48_confidence", h.j48_confidence},
            {"j48_min_leaf", h.j48_min_leaf},
            {"j48_prune", h.j48_prune},
            {"seed", h.seed}};
}

Hyperparameters hyper_from_json(const json& j) {
    Hyperparameters h;
    h.nb_alpha = j.at("nb_alpha").get<double>();
    h.svm_c = j.at("svm_c").get<double>();
    h.svm_tol = j.at("svm_tol").get<double>();
    h.svm_step_epsilon = j.at("svm_step_epsilon").get<double>();
    h.svm_max_passes = j.at("svm_max_passes").get<std::size_t>();
    h.j48_confidence = j.at("j48_confidence").get<double>();
    h.j48_min_leaf = j.at("j48_min_leaf").get<std::size_t>();
    h.j48_prune = j.at("j48_prune").get<bool>();
    h.seed = j.at("seed").get<std::uint64_t>();
    return h;
}

json body_to_json(const NaiveBayesModel& m) {
    return {{"alpha", m.alpha},
            {"log_prior", m.log_prior},
            {"log_likelihood_wontfix", m.log_likelihood[0]},
            {"log_likelihood_non_wontfix", m.log_likelihood[1]}};
}

json body_to_json(const LinearSvmModel& m) {
    return {{"c", m.c}, {"tol", m.tol}, {"alpha", m.alpha}, {"w", m.w},
            {"b", m.b}, {"converged", m.converged}, {"passes", m.passes}};
}

json body_to_json(const DecisionTreeModel& m) {
    json nodes = json::array();
    for (const auto& n : m.nodes) {
        json jn = {{"counts", n.counts}};
        if (!n.is_leaf()) {
            jn["feature"] = n.feature;
            jn["threshold"] = n.threshold;
            jn["left"] = n.left;
            jn["right"] = n.right;
        }
        nodes.push_back(std::move(jn));
    }
    return {{"confidence", m.options.confidence},
            {"min_leaf", m.options.min_leaf},
            {"prune", m.options.prune},
            {"nodes", std::move(nodes)}};
}

NaiveBayesModel nb_from_json(const json& j, std::size_t n_terms) {
    NaiveBayesModel m;
    m.alpha = j.at("alpha").get<double>();
    m.log_prior = j.at("log_prior").get<std::array<double, 2>>();
    m.log_likelihood[0] = j.at("log_likelihood_wontfix").get<std::vector<double>>();
    m.log_likelihood[1] = j.at("log_likelihood_non_wontfix").get<std::vector<double>>();
    if (m.log_likelihood[0].size() != n_terms || m.log_likelihood[1].size() != n_terms)
        throw FormatError("Naive Bayes likelihood tables do not match the vocabulary");
    return m;
}

LinearSvmModel svm_from_json(const json& j, std::size_t n_terms) {
    LinearSvmModel m;
    m.c = j.at("c").get<double>();
    m.tol = j.at("tol").get<double>();
    m.alpha = j.at("alpha").get<std::vector<double>>();
    m.w = j.at("w").get<std::vector<double>>();
    m.b = j.at("b").get<double>();
    m.converged = j.at("converged").get<bool>();
    m.passes = j.at("passes").get<std::size_t>();
    if (m.w.size() != n_terms) throw FormatError("SVM weight vector does not match the vocabulary");
    return m;
}

DecisionTreeModel tree_from_json(const json& j, std::size_t n_terms) {
    DecisionTreeModel m;
    m.options.confidence = j.at("confidence").get<double>();
    m.options.min_leaf = j.at("min_leaf").get<std::size_t>();
    m.options.prune = j.at("prune").get<bool>();
    for (const auto& jn : j.at("nodes")) {
        TreeNode n;
        n.counts = jn.at("counts").get<std::array<std::size_t, 2>>();
        if (jn.contains("feature")) {
            n.feature = jn.at("feature").get<std::int64_t>();
            n.threshold = jn.at("threshold").get<double>();
            n.left = jn.at("left").get<std::size_t>();
            n.right = jn.at("right").get<std::size_t>();
        }
        m.nodes.push_back(n);
    }
    if (m.nodes.empty()) throw FormatError("decision tree has no nodes");
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        const auto& n = m.nodes[i];
        if (n.is_leaf()) continue;
        if (static_cast<std::size_t>(n.feature) >= n_terms || n.left <= i || n.right <= i || n.left >= m.nodes.size() ||
            n.right >= m.nodes.size())
            throw FormatError("decision tree node " + std::to_string(i) + " is malformed");
    }
    return m;
}

}  // namespace

void save_model(std::ostream& out, const TrainedModel& model) {
    json j;
    j["format"] = "wontfix-model";
    j["version"] = kModelFormatVersion;
    j["kind"] = to_string(model.kind);
    j["vocabulary_hash"] = format_hash(model.vocabulary->hash());
    j["weighting"] = to_string(model.weighting);
    j["vocabulary_fit"] = to_string(model.vocabulary_fit);
    j["hyperparameters"] = hyper_to_json(model.hyperparameters);
    j["vocabulary"] = {{"n_docs", model.vocabulary->n_docs()},
                       {"terms", model.vocabulary->terms()},
                       {"df", model.vocabulary->dfs()}};
    j["run_config"] = model.run_config;
    j["body"] = std::visit([](const auto& m) { return body_to_json(m); }, model.body);
    out << j.dump(1) << '\n';
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    save_model(out, model);
}

TrainedModel load_model(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || j.value("format", "") != "wontfix-model") throw FormatError("not a wontfix model file");
        const int version = j.at("version").get<int>();
        if (version != kModelFormatVersion)
            throw VersionError("model format version " + std::to_string(version) + " is not supported (expected " +
                               std::to_string(kModelFormatVersion) + ")");
        TrainedModel model;
        model.kind = parse_model_kind(j.at("kind").get<std::string>());
        model.weighting = parse_weighting(j.at("weighting").get<std::string>());
        model.vocabulary_fit = parse_vocabulary_fit(j.at("vocabulary_fit").get<std::string>());
        model.hyperparameters = hyper_from_json(j.at("hyperparameters"));
        model.run_config = j.value("run_config", json::object());
        const json& jv = j.at("vocabulary");
        auto vocab = std::make_shared<Vocabulary>(Vocabulary::from_parts(jv.at("terms").get<std::vector<std::string>>(),
                                                                         jv.at("df").get<std::vector<std::size_t>>(),
                                                                         jv.at("n_docs").get<std::size_t>()));
        if (format_hash(vocab->hash()) != j.at("vocabulary_hash").get<std::string>())
            throw FormatError("embedded vocabulary does not match its recorded hash");
        const json& body = j.at("body");
        switch (model.kind) {
            case ModelKind::naive_bayes: model.body = nb_from_json(body, vocab->size()); break;
            case ModelKind::smo: model.body = svm_from_json(body, vocab->size()); break;
            case ModelKind::j48: model.body = tree_from_json(body, vocab->size()); break;
        }
        model.vocabulary = std::move(vocab);
        return model;
    } catch (const FormatError&) {
        throw;
    } catch (const DataError& e) {
        throw FormatError(std::string("model file is inconsistent: ") + e.what());
    } catch (const json::exception& e) {
        throw FormatError(std::string("model file is missing or mistypes a field: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("model file has an invalid value: ") + e.what());
    }
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return load_model(in);
}

}  // namespace wontfix
