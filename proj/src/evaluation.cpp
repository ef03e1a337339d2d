#include "wontfix/evaluation.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "wontfix/model_io.hpp"

namespace wontfix {

using nlohmann::json;

void ConfusionMatrix::add(IssueClass actual, IssueClass predicted) {
    if (actual == IssueClass::wontfix)
        (predicted == IssueClass::wontfix ? tp : fn)++;
    else
        (predicted == IssueClass::wontfix ? fp : tn)++;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fn += o.fn;
    fp += o.fp;
    tn += o.tn;
    return *this;
}

namespace {

ClassMetrics class_metrics(std::size_t hit, std::size_t predicted, std::size_t actual) {
    ClassMetrics m;
    m.support = actual;
    if (predicted == 0)
        m.precision_undefined = true;
    else
        m.precision = static_cast<double>(hit) / static_cast<double>(predicted);
    if (actual == 0)
        m.recall_undefined = true;
    else
        m.recall = static_cast<double>(hit) / static_cast<double>(actual);
    const double denom = m.precision + m.recall;
    m.f_measure = denom > 0.0 ? 2.0 * m.precision * m.recall / denom : 0.0;
    return m;
}

}  // namespace

Metrics metrics_from_confusion(const ConfusionMatrix& cm) {
    const std::size_t total = cm.total();
    if (total == 0) throw EmptyEvaluationError("cannot compute metrics over zero instances");
    Metrics m;
    m.wontfix = class_metrics(cm.tp, cm.tp + cm.fp, cm.tp + cm.fn);
    m.non_wontfix = class_metrics(cm.tn, cm.tn + cm.fn, cm.tn + cm.fp);
    const double ww = static_cast<double>(m.wontfix.support) / static_cast<double>(total);
    const double wn = static_cast<double>(m.non_wontfix.support) / static_cast<double>(total);
    m.precision = ww * m.wontfix.precision + wn * m.non_wontfix.precision;
    m.recall = ww * m.wontfix.recall + wn * m.non_wontfix.recall;
    m.f_measure = ww * m.wontfix.f_measure + wn * m.non_wontfix.f_measure;
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total);
    return m;
}

std::vector<std::size_t> stratified_folds(std::span<const IssueClass> classes, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
    std::vector<std::size_t> members[2];
    for (std::size_t i = 0; i < classes.size(); ++i) members[static_cast<int>(classes[i])].push_back(i);
    for (int c = 0; c < 2; ++c)
        if (members[c].size() < k)
            throw TooFewInstancesError("class " + std::string(to_string(static_cast<IssueClass>(c))) + " has " +
                                       std::to_string(members[c].size()) + " instance(s); " + std::to_string(k) +
                                       "-fold cross-validation needs at least " + std::to_string(k));
    Rng rng(seed);
    std::vector<std::size_t> fold(classes.size());
    std::size_t next = 0;
    for (auto& list : members) {
        seeded_shuffle(std::span<std::size_t>(list), rng);
        for (const std::size_t i : list) {
            fold[i] = next;
            next = (next + 1) % k;
        }
    }
    return fold;
}

namespace {

struct Prepared {
    std::vector<std::string> ids;
    std::vector<IssueClass> labels;
    std::vector<TokenStream> docs;
};

Prepared prepare(const LabeledCorpus& corpus) {
    Prepared p;
    for (const auto& issue : corpus.issues()) p.ids.push_back(issue.id);
    p.labels.assign(corpus.classes().begin(), corpus.classes().end());
    p.docs = preprocess_corpus(corpus);
    return p;
}

template <typename T>
std::vector<T> pick(const std::vector<T>& all, const std::vector<std::size_t>& idx) {
    std::vector<T> out;
    out.reserve(idx.size());
    for (const auto i : idx) out.push_back(all[i]);
    return out;
}

// Fits a vocabulary on `fit_docs`, trains on `train_idx` and predicts
// `test_idx` of `data`.
FoldResult run_fold(const Prepared& data, const std::vector<std::size_t>& train_idx,
                    const std::vector<std::size_t>& test_idx, std::span<const TokenStream> fit_docs,
                    const EvaluationConfig& config) {
    auto vocab = std::make_shared<const Vocabulary>(Vocabulary::fit(fit_docs, config.min_df));
    const auto train_docs = pick(data.docs, train_idx);
    const auto train_ids = pick(data.ids, train_idx);
    const auto train_labels = pick(data.labels, train_idx);
    const TermDocumentMatrix train = build_matrix(train_ids, train_labels, train_docs, vocab, config.weighting);
    const TrainedModel model = train_model(config.kind, train, config.hyperparameters);

    FoldResult r;
    r.converged = model.converged();
    for (const auto i : test_idx) {
        const Prediction p = model.predict(vectorize(data.docs[i], *vocab, config.weighting));
        r.matrix.add(data.labels[i], p.label);
    }
    return r;
}

}  // namespace

EvaluationReport evaluate_holdout(const LabeledCorpus& train, const LabeledCorpus& test, EvaluationConfig config) {
    if (test.empty()) throw EmptyEvaluationError("the test set is empty");
    config.mode = "holdout";
    config.folds = 0;

    Prepared data = prepare(train);
    const std::size_t n_train = data.ids.size();
    Prepared t = prepare(test);
    data.ids.insert(data.ids.end(), t.ids.begin(), t.ids.end());
    data.labels.insert(data.labels.end(), t.labels.begin(), t.labels.end());
    data.docs.insert(data.docs.end(), std::make_move_iterator(t.docs.begin()), std::make_move_iterator(t.docs.end()));

    std::vector<std::size_t> train_idx(n_train), test_idx(data.ids.size() - n_train);
    for (std::size_t i = 0; i < train_idx.size(); ++i) train_idx[i] = i;
    for (std::size_t i = 0; i < test_idx.size(); ++i) test_idx[i] = n_train + i;
    const std::span<const TokenStream> fit_docs =
        config.vocabulary_fit == VocabularyFit::full_corpus ? std::span<const TokenStream>(data.docs)
                                                            : std::span<const TokenStream>(data.docs).first(n_train);

    FoldResult r = run_fold(data, train_idx, test_idx, fit_docs, config);
    EvaluationReport report;
    report.config = config;
    report.matrix = r.matrix;
    report.metrics = metrics_from_confusion(r.matrix);
    report.converged = r.converged;
    if (!r.converged) report.warnings.push_back("SMO did not converge within the pass budget");
    return report;
}

EvaluationReport cross_validate(const LabeledCorpus& corpus, std::size_t k, EvaluationConfig config) {
    config.mode = "cross_validation";
    config.folds = k;
    const auto fold_of = stratified_folds(corpus.classes(), k, config.seed);
    const Prepared data = prepare(corpus);

    EvaluationReport report;
    report.config = config;
    Metrics mean;
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < fold_of.size(); ++i) (fold_of[i] == f ? test_idx : train_idx).push_back(i);
        const auto train_docs = pick(data.docs, train_idx);
        const std::span<const TokenStream> fit_docs = config.vocabulary_fit == VocabularyFit::full_corpus
                                                          ? std::span<const TokenStream>(data.docs)
                                                          : std::span<const TokenStream>(train_docs);
        FoldResult r = run_fold(data, train_idx, test_idx, fit_docs, config);
        r.fold = f;
        r.metrics = metrics_from_confusion(r.matrix);
        report.matrix += r.matrix;
        mean.precision += r.metrics.precision / static_cast<double>(k);
        mean.recall += r.metrics.recall / static_cast<double>(k);
        mean.f_measure += r.metrics.f_measure / static_cast<double>(k);
        mean.accuracy += r.metrics.accuracy / static_cast<double>(k);
        if (!r.converged) {
            report.converged = false;
            report.warnings.push_back("SMO did not converge within the pass budget on fold " + std::to_string(f));
        }
        report.folds.push_back(std::move(r));
    }
    report.metrics = metrics_from_confusion(report.matrix);
    report.mean_fold_metrics = mean;
    return report;
}

// --- output -------------------------------------------------------------------

namespace {

json class_to_json(const ClassMetrics& c) {
    json j = {{"precision", c.precision}, {"recall", c.recall}, {"f_measure", c.f_measure}, {"support", c.support}};
    if (c.precision_undefined) j["precision_undefined"] = true;
    if (c.recall_undefined) j["recall_undefined"] = true;
    return j;
}

json matrix_to_json(const ConfusionMatrix& cm) {
    return {{"tp", cm.tp}, {"fn", cm.fn}, {"fp", cm.fp}, {"tn", cm.tn}};
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

json metrics_to_json(const Metrics& m) {
    return {{"per_class", {{"wontfix", class_to_json(m.wontfix)}, {"non_wontfix", class_to_json(m.non_wontfix)}}},
            {"weighted", {{"precision", m.precision}, {"recall", m.recall}, {"f_measure", m.f_measure}}},
            {"accuracy", m.accuracy}};
}

json config_to_json(const EvaluationConfig& c) {
    const Hyperparameters& h = c.hyperparameters;
    json hyper;
    switch (c.kind) {
        case ModelKind::naive_bayes: hyper = {{"alpha", h.nb_alpha}}; break;
        case ModelKind::smo:
            hyper = {{"c", h.svm_c}, {"tol", h.svm_tol}, {"step_epsilon", h.svm_step_epsilon},
                     {"max_passes", h.svm_max_passes}};
            break;
        case ModelKind::j48:
            hyper = {{"confidence", h.j48_confidence}, {"min_leaf", h.j48_min_leaf}, {"prune", h.j48_prune}};
            break;
    }
    json j = {{"model", to_string(c.kind)},
              {"hyperparameters", hyper},
              {"weighting", to_string(c.weighting)},
              {"vocabulary_fit", to_string(c.vocabulary_fit)},
              {"min_df", c.min_df},
              {"seed", c.seed},
              {"mode", c.mode}};
    if (c.folds) j["folds"] = c.folds;
    if (c.split_fraction > 0.0) j["split_fraction"] = c.split_fraction;
    return j;
}

json report_to_json(const EvaluationReport& r) {
    json j = metrics_to_json(r.metrics);
    j["matrix"] = matrix_to_json(r.matrix);
    j["config"] = config_to_json(r.config);
    j["converged"] = r.converged;
    if (!r.folds.empty()) {
        json folds = json::array();
        for (const auto& f : r.folds) {
            json jf = metrics_to_json(f.metrics);
            jf["fold"] = f.fold;
            jf["matrix"] = matrix_to_json(f.matrix);
            folds.push_back(std::move(jf));
        }
        j["folds"] = std::move(folds);
    }
    if (r.mean_fold_metrics)
        j["mean_fold_weighted"] = {{"precision", r.mean_fold_metrics->precision},
                                   {"recall", r.mean_fold_metrics->recall},
                                   {"f_measure", r.mean_fold_metrics->f_measure}};
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j;
}

void write_report_tsv(std::ostream& out, const EvaluationReport& r) {
    out << "model\tclass\tprecision\trecall\tf_measure\tsupport\n";
    const std::string model(to_string(r.config.kind));
    auto row = [&](std::string_view name, double p, double rec, double f, std::size_t support) {
        out << model << '\t' << name << '\t' << format_double(p) << '\t' << format_double(rec) << '\t'
            << format_double(f) << '\t' << support << '\n';
    };
    const Metrics& m = r.metrics;
    row("wontfix", m.wontfix.precision, m.wontfix.recall, m.wontfix.f_measure, m.wontfix.support);
    row("non_wontfix", m.non_wontfix.precision, m.non_wontfix.recall, m.non_wontfix.f_measure, m.non_wontfix.support);
    row("weighted", m.precision, m.recall, m.f_measure, r.matrix.total());
}

std::string format_report(const EvaluationReport& r) {
    std::ostringstream out;
    const Metrics& m = r.metrics;
    out << "model: " << to_string(r.config.kind) << "  mode: " << r.config.mode;
    if (r.config.folds) out << " (" << r.config.folds << " folds)";
    out << "  vocabulary: " << to_string(r.config.vocabulary_fit) << "  seed: " << r.config.seed << '\n';
    out << "class          precision  recall  f-measure  support\n";
    auto line = [&](const char* name, double p, double rec, double f, std::size_t s) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-13s  %9s  %6s  %9s  %7zu\n", name, fixed3(p).c_str(), fixed3(rec).c_str(),
                      fixed3(f).c_str(), s);
        out << buf;
    };
    line("wontfix", m.wontfix.precision, m.wontfix.recall, m.wontfix.f_measure, m.wontfix.support);
    line("non_wontfix", m.non_wontfix.precision, m.non_wontfix.recall, m.non_wontfix.f_measure, m.non_wontfix.support);
    line("weighted", m.precision, m.recall, m.f_measure, r.matrix.total());
    out << "confusion (rows actual, columns predicted wontfix / non_wontfix)\n";
    out << "  wontfix      " << r.matrix.tp << " / " << r.matrix.fn << '\n';
    out << "  non_wontfix  " << r.matrix.fp << " / " << r.matrix.tn << '\n';
    for (const auto& w : r.warnings) out << "warning: " << w << '\n';
    return out.str();
}

}  // namespace wontfix
