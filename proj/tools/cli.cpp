#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wontfix/analytics.hpp"
#include "wontfix/corpus.hpp"
#include "wontfix/evaluation.hpp"
#include "wontfix/features.hpp"
#include "wontfix/http_transport.hpp"
#include "wontfix/miner.hpp"
#include "wontfix/model_io.hpp"
#include "wontfix/synthetic.hpp"

namespace wontfix::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Writes to a file, or to the fallback stream when the path is empty or "-".
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : path_(path) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
        } else {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw Error("cannot open '" + path + "' for writing");
            stream_ = &file_;
        }
    }
    std::ostream& operator*() { return *stream_; }
    void close() {
        stream_->flush();
        if (!*stream_) throw Error("failed writing '" + (path_.empty() ? std::string("-") : path_) + "'");
    }

private:
    std::string path_;
    std::ofstream file_;
    std::ostream* stream_;
};

struct ModelFlags {
    std::string kind = "nb";
    Hyperparameters hyper;
    std::string weighting = "raw";
    std::size_t min_df = 1;
    bool paper_compat = false;
    bool strict = false;

    void attach(CLI::App& app) {
        app.add_option("--model,-m", kind, "Classifier: nb, smo or j48")->capture_default_str();
        app.add_option("--seed", hyper.seed, "Random seed")->capture_default_str();
        app.add_option("--weighting", weighting, "Term weighting: raw or sublinear")->capture_default_str();
        app.add_option("--min-df", min_df, "Minimum document frequency of a term")->capture_default_str();
        app.add_option("--nb-alpha", hyper.nb_alpha, "Naive Bayes smoothing")->capture_default_str();
        app.add_option("--svm-c", hyper.svm_c, "SVM complexity constant")->capture_default_str();
        app.add_option("--svm-tol", hyper.svm_tol, "SVM KKT tolerance")->capture_default_str();
        app.add_option("--svm-max-passes", hyper.svm_max_passes, "SVM pass limit")->capture_default_str();
        app.add_option("--j48-confidence", hyper.j48_confidence, "J48 pruning confidence")->capture_default_str();
        app.add_option("--j48-min-leaf", hyper.j48_min_leaf, "J48 minimum instances per leaf")->capture_default_str();
        app.add_flag("--no-prune", [this](std::int64_t) { hyper.j48_prune = false; }, "Disable J48 pruning");
        app.add_flag("--paper-compat", paper_compat, "Fit the vocabulary on the full corpus before splitting");
        app.add_flag("--strict", strict, "Exit with code 3 when the SVM does not converge");
    }

    ModelKind model_kind() const {
        try {
            return parse_model_kind(kind);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    Weighting term_weighting() const {
        try {
            return parse_weighting(weighting);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    VocabularyFit fit() const { return paper_compat ? VocabularyFit::full_corpus : VocabularyFit::train_only; }
};

json hyper_json(const Hyperparameters& h) {
    return {{"nb_alpha", h.nb_alpha},           {"svm_c", h.svm_c},
            {"svm_tol", h.svm_tol},             {"svm_max_passes", h.svm_max_passes},
            {"j48_confidence", h.j48_confidence}, {"j48_min_leaf", h.j48_min_leaf},
            {"j48_prune", h.j48_prune},         {"seed", h.seed}};
}

void echo_config(std::ostream& err, const json& config) { err << "# config: " << config.dump() << '\n'; }

// --- mine -------------------------------------------------------------------

struct MineArgs {
    std::string language = "C#";
    std::size_t top_n = 1000;
    std::string out;
    std::string checkpoint;
    std::string token_env = "GITHUB_TOKEN";
    bool legacy = false;
    std::vector<std::string> repos;
    bool no_second_pass = false;
    long long max_wait = 3600;
    long long page_delay = 0;
    long long repo_delay = 1;
    long quota_threshold = 0;
    std::size_t max_retries = 5;
    std::string base_url = "https://api.github.com";
    std::string fixtures;
    std::string fixture_clock = "2024-01-01T00:00:00Z";
    std::string record;
};

int cmd_mine(const MineArgs& a, std::ostream& out, std::ostream& err) {
    if (a.top_n < 1) throw UsageError("--top-n must be at least 1");
    MinerConfig config;
    config.language = a.language;
    config.top_n = a.top_n;
    config.repos = a.repos;
    config.throttle.legacy = a.legacy;
    config.throttle.quota_threshold = a.quota_threshold;
    config.throttle.page_delay = std::chrono::seconds(a.page_delay);
    config.throttle.repo_delay = std::chrono::seconds(a.repo_delay);
    config.max_wait = std::chrono::seconds(a.max_wait);
    config.max_retries = a.max_retries;
    config.second_pass = !a.no_second_pass;
    if (const char* token = std::getenv(a.token_env.c_str()); token && *token) config.token = token;

    const std::string checkpoint = a.checkpoint.empty() ? a.out + ".checkpoint.json" : a.checkpoint;
    const json run_config = {{"command", "mine"},
                             {"language", a.language},
                             {"top_n", a.top_n},
                             {"repos", a.repos},
                             {"out", a.out},
                             {"checkpoint", checkpoint},
                             {"token_env", a.token_env},
                             {"authenticated", config.token.has_value()},
                             {"legacy_throttle", a.legacy},
                             {"second_pass", config.second_pass},
                             {"max_wait_s", a.max_wait},
                             {"page_delay_s", a.page_delay},
                             {"repo_delay_s", a.repo_delay},
                             {"quota_threshold", a.quota_threshold},
                             {"source", a.fixtures.empty() ? a.base_url : "fixtures:" + a.fixtures}};
    echo_config(err, run_config);

    std::unique_ptr<HttpTransport> base;
    std::unique_ptr<Clock> clock;
    if (!a.fixtures.empty()) {
        base = std::make_unique<FixtureTransport>(FixtureTransport::from_file(a.fixtures));
        Timestamp start;
        try {
            start = parse_timestamp(a.fixture_clock);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--fixture-clock: ") + e.what());
        }
        clock = std::make_unique<FakeClock>(start);
    } else {
        base = std::make_unique<HttplibTransport>(a.base_url);
        clock = std::make_unique<SystemClock>();
    }
    std::unique_ptr<RecordingTransport> recorder;
    HttpTransport* transport = base.get();
    if (!a.record.empty()) {
        recorder = std::make_unique<RecordingTransport>(*base);
        transport = recorder.get();
    }

    Miner miner(*transport, *clock, config);
    miner.set_run_config(run_config);
    MineSummary s;
    try {
        s = miner.run(a.out, checkpoint);
    } catch (...) {
        if (recorder) recorder->save(a.record);
        throw;
    }
    if (recorder) recorder->save(a.record);
    out << json{{"repos", s.repos},
                {"emitted", s.emitted},
                {"already_emitted", s.already_emitted},
                {"second_pass_added", s.second_pass_added},
                {"requests", s.requests}}
               .dump()
        << '\n';
    return kExitOk;
}

// --- prep / train -------------------------------------------------------------

struct PrepArgs {
    std::string corpus;
    std::string vocab_out;
    std::string matrix_out;
    std::string weighting = "raw";
    std::size_t min_df = 1;
};

int cmd_prep(const PrepArgs& a, std::ostream& out, std::ostream& err) {
    Weighting w;
    try {
        w = parse_weighting(a.weighting);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const json run_config = {{"command", "prep"}, {"corpus", a.corpus}, {"weighting", a.weighting}, {"min_df", a.min_df}};
    echo_config(err, run_config);
    const LabeledCorpus corpus = load_corpus(std::filesystem::path(a.corpus));
    const auto docs = preprocess_corpus(corpus);
    auto vocab = std::make_shared<const Vocabulary>(Vocabulary::fit(docs, a.min_df));
    std::vector<std::string> ids;
    for (const auto& issue : corpus.issues()) ids.push_back(issue.id);
    const TermDocumentMatrix matrix = build_matrix(ids, corpus.classes(), docs, vocab, w);
    if (!a.vocab_out.empty()) {
        Sink sink(a.vocab_out, out);
        write_vocabulary(*sink, *vocab);
        sink.close();
    }
    Sink sink(a.matrix_out, out);
    *sink << "# config: " << run_config.dump() << '\n';
    write_matrix(*sink, matrix);
    sink.close();
    return kExitOk;
}

struct TrainArgs {
    std::string corpus;
    std::string out;
    ModelFlags model;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
    const ModelKind kind = a.model.model_kind();
    const Weighting w = a.model.term_weighting();
    json run_config = {{"command", "train"},
                       {"corpus", a.corpus},
                       {"model", to_string(kind)},
                       {"weighting", to_string(w)},
                       {"min_df", a.model.min_df},
                       {"vocabulary_fit", to_string(a.model.fit())},
                       {"paper_compat", a.model.paper_compat},
                       {"hyperparameters", hyper_json(a.model.hyper)}};
    echo_config(err, run_config);

    const LabeledCorpus corpus = load_corpus(std::filesystem::path(a.corpus));
    const auto docs = preprocess_corpus(corpus);
    auto vocab = std::make_shared<const Vocabulary>(Vocabulary::fit(docs, a.model.min_df));
    std::vector<std::string> ids;
    for (const auto& issue : corpus.issues()) ids.push_back(issue.id);
    const TermDocumentMatrix matrix = build_matrix(ids, corpus.classes(), docs, vocab, w);
    TrainedModel model = train_model(kind, matrix, a.model.hyper);
    model.vocabulary_fit = a.model.fit();
    model.run_config = run_config;

    Sink sink(a.out, out);
    save_model(*sink, model);
    sink.close();
    if (!model.converged()) {
        err << "warning: SMO stopped at the pass limit before meeting the KKT tolerance\n";
        if (a.model.strict) return kExitNonconvergence;
    }
    return kExitOk;
}

// --- evaluate -------------------------------------------------------------------

struct EvaluateArgs {
    std::string corpus;
    std::string mode = "holdout";
    std::size_t folds = 10;
    double split = 0.5;
    std::string out;
    std::string tsv_out;
    std::string from_matrix;
    ModelFlags model;
};

ConfusionMatrix parse_confusion(const std::string& text) {
    std::vector<std::size_t> v;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::size_t pos = 0;
        unsigned long long x = 0;
        try {
            x = std::stoull(part, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != part.size() || part.find('-') != std::string::npos)
            throw UsageError("--from-matrix expects tp,fn,fp,tn as non-negative integers");
        v.push_back(x);
    }
    if (v.size() != 4) throw UsageError("--from-matrix expects exactly four counts: tp,fn,fp,tn");
    return {v[0], v[1], v[2], v[3]};
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
    if (!a.from_matrix.empty()) {
        const ConfusionMatrix cm = parse_confusion(a.from_matrix);
        const json run_config = {{"command", "evaluate"}, {"from_matrix", a.from_matrix}};
        echo_config(err, run_config);
        const Metrics m = metrics_from_confusion(cm);
        json j = {{"config", run_config},
                  {"matrix", {{"tp", cm.tp}, {"fn", cm.fn}, {"fp", cm.fp}, {"tn", cm.tn}}},
                  {"metrics", metrics_to_json(m)}};
        Sink sink(a.out, out);
        *sink << j.dump(2) << '\n';
        sink.close();
        return kExitOk;
    }
    if (a.corpus.empty()) throw UsageError("evaluate needs --corpus (or --from-matrix)");
    if (a.mode != "holdout" && a.mode != "cv") throw UsageError("--mode must be holdout or cv");

    EvaluationConfig config;
    config.kind = a.model.model_kind();
    config.hyperparameters = a.model.hyper;
    config.weighting = a.model.term_weighting();
    config.vocabulary_fit = a.model.fit();
    config.min_df = a.model.min_df;
    config.seed = a.model.hyper.seed;

    json run_config = {{"command", "evaluate"},
                       {"corpus", a.corpus},
                       {"mode", a.mode},
                       {"paper_compat", a.model.paper_compat},
                       {"evaluation", config_to_json(config)}};
    if (a.mode == "cv")
        run_config["folds"] = a.folds;
    else
        run_config["split"] = a.split;
    echo_config(err, run_config);

    const LabeledCorpus corpus = load_corpus(std::filesystem::path(a.corpus));
    EvaluationReport report;
    if (a.mode == "cv") {
        report = cross_validate(corpus, a.folds, config);
    } else {
        if (!(a.split > 0.0 && a.split < 1.0)) throw UsageError("--split must lie strictly between 0 and 1");
        const CorpusSplit parts = stratified_split(corpus, a.split, config.seed);
        report = evaluate_holdout(parts.train, parts.test, config);
        report.config.split_fraction = a.split;
    }

    json j = report_to_json(report);
    j["run_config"] = run_config;
    {
        Sink sink(a.out, out);
        *sink << j.dump(2) << '\n';
        sink.close();
    }
    if (!a.tsv_out.empty()) {
        Sink sink(a.tsv_out, out);
        *sink << "# config: " << run_config.dump() << '\n';
        write_report_tsv(*sink, report);
        sink.close();
    }
    err << format_report(report);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
    if (!report.converged && a.model.strict) return kExitNonconvergence;
    return kExitOk;
}

// --- predict ------------------------------------------------------------------

struct PredictArgs {
    std::string model;
    std::string issues;
    std::string out;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
    const TrainedModel model = load_model(std::filesystem::path(a.model));
    const json run_config = {{"command", "predict"},
                             {"model", a.model},
                             {"issues", a.issues},
                             {"kind", to_string(model.kind)},
                             {"vocabulary_hash", format_hash(model.vocabulary->hash())}};
    echo_config(err, run_config);
    // Open issues are allowed here: prediction happens before closing.
    const auto parsed = read_issues(std::filesystem::path(a.issues));
    Sink sink(a.out, out);
    *sink << "# config: " << run_config.dump() << '\n';
    *sink << "id\tclass\tscore\n";
    for (const auto& p : parsed) {
        const Prediction pred = model.predict_issue(p.issue.title, p.issue.body);
        *sink << p.issue.id << '\t' << to_string(pred.label) << '\t' << format_double(pred.score) << '\n';
    }
    sink.close();
    return kExitOk;
}

// --- stats --------------------------------------------------------------------

struct StatsArgs {
    std::string corpus;
    std::string analysis = "table4";
    std::string metric = "timeToCloseIssue";
    std::string category;
    std::string format = "json";
    std::string out;
    bool count_opening_post = false;
};

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
    if (a.format != "json" && a.format != "tsv") throw UsageError("--format must be json or tsv");
    MetricOptions options;
    options.count_opening_post = a.count_opening_post;
    Metric metric;
    std::optional<Category> category;
    try {
        metric = parse_metric(a.metric);
        if (!a.category.empty()) category = parse_category(a.category);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    json run_config = {{"command", "stats"},
                       {"corpus", a.corpus},
                       {"analysis", a.analysis},
                       {"count_opening_post", a.count_opening_post}};
    if (a.analysis == "buckets" || a.analysis == "summary") {
        run_config["metric"] = metric_name(metric);
        run_config["category"] = category ? json(category_name(*category)) : json(nullptr);
    }
    echo_config(err, run_config);

    const LabeledCorpus corpus = load_corpus(std::filesystem::path(a.corpus));
    json j;
    std::ostringstream tsv;
    if (a.analysis == "table4") {
        const ComparisonTable t = compare_categories(corpus, options);
        j = comparison_to_json(t);
        write_comparison_tsv(tsv, t);
    } else if (a.analysis == "buckets") {
        const BucketAnalysis b = bucket_by_actors(corpus, metric, category, options);
        j = buckets_to_json(b);
        write_buckets_tsv(tsv, b);
    } else if (a.analysis == "cooccurrence") {
        const Cooccurrence c = cooccurrence(corpus);
        j = cooccurrence_to_json(c);
        write_cooccurrence_tsv(tsv, c);
    } else if (a.analysis == "summary") {
        const auto values = metric_values(corpus, metric, category, options);
        if (values.empty()) throw DataError("no issue has a value for " + std::string(metric_name(metric)));
        const DistributionSummary s = summarize(values);
        j = summary_to_json(s);
        tsv << "n\tmin\tq1\tmedian\tmean\tq3\tmax\n"
            << s.n << '\t' << format_double(s.min) << '\t' << format_double(s.q1) << '\t' << format_double(s.median)
            << '\t' << format_double(s.mean) << '\t' << format_double(s.q3) << '\t' << format_double(s.max) << '\n';
    } else {
        throw UsageError("--analysis must be table4, buckets, cooccurrence or summary");
    }

    Sink sink(a.out, out);
    if (a.format == "json") {
        j["config"] = run_config;
        *sink << j.dump(2) << '\n';
    } else {
        *sink << "# config: " << run_config.dump() << '\n' << tsv.str();
    }
    sink.close();
    return kExitOk;
}

// --- synth --------------------------------------------------------------------

struct SynthArgs {
    SyntheticOptions options;
    std::string out;
};

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
    echo_config(err, {{"command", "synth"},
                      {"n_issues", a.options.n_issues},
                      {"wontfix_fraction", a.options.wontfix_fraction},
                      {"annotate", a.options.annotate},
                      {"seed", a.options.seed}});
    const LabeledCorpus corpus = make_synthetic_corpus(a.options);
    Sink sink(a.out, out);
    write_corpus(*sink, corpus);
    sink.close();
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mine GitHub issues, analyse their discussions and predict wontfix closures", "wontfix"};
    app.require_subcommand(1);

    MineArgs mine;
    auto* mine_cmd = app.add_subcommand("mine", "Collect closed issues and comments into corpus JSONL");
    mine_cmd->add_option("--language", mine.language, "Primary repository language")->capture_default_str();
    mine_cmd->add_option("--top-n", mine.top_n, "Number of top-starred repositories")->capture_default_str();
    mine_cmd->add_option("--out", mine.out, "Output corpus JSONL (appended on resume)")->required();
    mine_cmd->add_option("--checkpoint", mine.checkpoint, "Checkpoint file (default: <out>.checkpoint.json)");
    mine_cmd->add_option("--token-env", mine.token_env, "Environment variable holding the API token")
        ->capture_default_str();
    mine_cmd->add_flag("--legacy-throttle", mine.legacy, "Pause a fixed 40 s after every response");
    mine_cmd->add_option("--repo", mine.repos, "Mine this owner/name instead of discovering (repeatable)");
    mine_cmd->add_flag("--no-second-pass", mine.no_second_pass, "Skip the wontfix re-check pass");
    mine_cmd->add_option("--max-wait", mine.max_wait, "Longest acceptable rate-limit wait in seconds")
        ->capture_default_str();
    mine_cmd->add_option("--page-delay", mine.page_delay, "Seconds between pages")->capture_default_str();
    mine_cmd->add_option("--repo-delay", mine.repo_delay, "Seconds between repositories")->capture_default_str();
    mine_cmd->add_option("--quota-threshold", mine.quota_threshold, "Wait for the reset at or below this quota")
        ->capture_default_str();
    mine_cmd->add_option("--max-retries", mine.max_retries, "Retries on transport errors and 5xx")
        ->capture_default_str();
    mine_cmd->add_option("--base-url", mine.base_url, "API root")->capture_default_str();
    mine_cmd->add_option("--fixtures", mine.fixtures, "Replay recorded responses instead of the network");
    mine_cmd->add_option("--fixture-clock", mine.fixture_clock, "Start of the simulated clock in fixture mode")
        ->capture_default_str();
    mine_cmd->add_option("--record", mine.record, "Save every exchange as a fixture file");

    PrepArgs prep;
    auto* prep_cmd = app.add_subcommand("prep", "Preprocess a corpus into a vocabulary and tf-idf matrix");
    prep_cmd->add_option("--corpus", prep.corpus, "Corpus JSONL")->required();
    prep_cmd->add_option("--vocab-out", prep.vocab_out, "Vocabulary TSV");
    prep_cmd->add_option("--out", prep.matrix_out, "Matrix file (default: stdout)");
    prep_cmd->add_option("--weighting", prep.weighting, "raw or sublinear")->capture_default_str();
    prep_cmd->add_option("--min-df", prep.min_df, "Minimum document frequency")->capture_default_str();

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Train a classifier on a labeled corpus");
    train_cmd->add_option("--corpus", train.corpus, "Corpus JSONL")->required();
    train_cmd->add_option("--out", train.out, "Model file (default: stdout)");
    train.model.attach(*train_cmd);

    EvaluateArgs evaluate;
    auto* eval_cmd = app.add_subcommand("evaluate", "Holdout or cross-validated evaluation");
    eval_cmd->add_option("--corpus", evaluate.corpus, "Corpus JSONL");
    eval_cmd->add_option("--mode", evaluate.mode, "holdout or cv")->capture_default_str();
    eval_cmd->add_option("--folds,-k", evaluate.folds, "Folds for cv")->capture_default_str();
    eval_cmd->add_option("--split", evaluate.split, "Training share for holdout")->capture_default_str();
    eval_cmd->add_option("--out", evaluate.out, "JSON report (default: stdout)");
    eval_cmd->add_option("--tsv-out", evaluate.tsv_out, "TSV report");
    eval_cmd->add_option("--from-matrix", evaluate.from_matrix, "Metrics for a given confusion matrix tp,fn,fp,tn");
    evaluate.model.attach(*eval_cmd);

    PredictArgs predict;
    auto* predict_cmd = app.add_subcommand("predict", "Predict wontfix for issues from title and description");
    predict_cmd->add_option("--model", predict.model, "Model file")->required();
    predict_cmd->add_option("--issues", predict.issues, "Issues JSONL")->required();
    predict_cmd->add_option("--out", predict.out, "Predictions TSV (default: stdout)");

    StatsArgs stats;
    auto* stats_cmd = app.add_subcommand("stats", "Discussion-metric statistics over a corpus");
    stats_cmd->add_option("--corpus", stats.corpus, "Corpus JSONL")->required();
    stats_cmd->add_option("--analysis", stats.analysis, "table4, buckets, cooccurrence or summary")
        ->capture_default_str();
    stats_cmd->add_option("--metric", stats.metric, "Metric for buckets and summary")->capture_default_str();
    stats_cmd->add_option("--category", stats.category, "Closing category (All, B, NB, FR, C)");
    stats_cmd->add_option("--format", stats.format, "json or tsv")->capture_default_str();
    stats_cmd->add_option("--out", stats.out, "Output file (default: stdout)");
    stats_cmd->add_flag("--count-opening-post", stats.count_opening_post,
                        "Count the opening post as a message for participant metrics");

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Write a seeded synthetic corpus");
    synth_cmd->add_option("--out", synth.out, "Corpus JSONL (default: stdout)");
    synth_cmd->add_option("--n", synth.options.n_issues, "Number of issues")->capture_default_str();
    synth_cmd->add_option("--wontfix-fraction", synth.options.wontfix_fraction, "Share of wontfix issues")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.options.seed, "Random seed")->capture_default_str();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("wontfix");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*mine_cmd) return cmd_mine(mine, out, err);
        if (*prep_cmd) return cmd_prep(prep, out, err);
        if (*train_cmd) return cmd_train(train, out, err);
        if (*eval_cmd) return cmd_evaluate(evaluate, out, err);
        if (*predict_cmd) return cmd_predict(predict, out, err);
        if (*stats_cmd) return cmd_stats(stats, out, err);
        if (*synth_cmd) return cmd_synth(synth, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace wontfix::cli
