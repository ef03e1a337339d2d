#include "wontfix/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace wontfix {

std::string_view to_string(Weighting w) { return w == Weighting::raw ? "raw" : "sublinear"; }

std::string_view to_string(VocabularyFit f) { return f == VocabularyFit::train_only ? "train_only" : "full_corpus"; }

Weighting parse_weighting(std::string_view s) {
    if (s == "raw") return Weighting::raw;
    if (s == "sublinear") return Weighting::sublinear;
    throw std::invalid_argument("unknown weighting '" + std::string(s) + "'");
}

VocabularyFit parse_vocabulary_fit(std::string_view s) {
    if (s == "train_only") return VocabularyFit::train_only;
    if (s == "full_corpus") return VocabularyFit::full_corpus;
    throw std::invalid_argument("unknown vocabulary fit mode '" + std::string(s) + "'");
}

// --- vocabulary -------------------------------------------------------------

Vocabulary Vocabulary::fit(std::span<const TokenStream> docs, std::size_t min_df) {
    if (docs.empty()) throw EmptyCorpusError("cannot fit a vocabulary on zero documents");
    std::vector<std::string> order;
    std::unordered_map<std::string, std::size_t> df;
    std::unordered_set<std::string_view> seen_in_doc;
    for (const auto& doc : docs) {
        seen_in_doc.clear();
        for (const auto& term : doc) {
            if (!seen_in_doc.insert(term).second) continue;
            auto [it, inserted] = df.emplace(term, 0);
            if (inserted) order.push_back(term);
            ++it->second;
        }
    }
    Vocabulary v;
    v.n_docs_ = docs.size();
    for (auto& term : order) {
        const std::size_t count = df.at(term);
        if (count < min_df) continue;
        v.index_.emplace(term, v.terms_.size());
        v.terms_.push_back(std::move(term));
        v.df_.push_back(count);
    }
    return v;
}

Vocabulary Vocabulary::from_parts(std::vector<std::string> terms, std::vector<std::size_t> df, std::size_t n_docs) {
    if (terms.size() != df.size()) throw DataError("vocabulary terms and df lengths differ");
    Vocabulary v;
    v.n_docs_ = n_docs;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (df[i] < 1 || df[i] > n_docs)
            throw DataError("df of '" + terms[i] + "' outside [1, " + std::to_string(n_docs) + "]");
        if (!v.index_.emplace(terms[i], i).second) throw DataError("duplicate vocabulary term '" + terms[i] + "'");
    }
    v.terms_ = std::move(terms);
    v.df_ = std::move(df);
    return v;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view term) const {
    const auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_update(std::uint64_t& h, std::string_view bytes) {
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= kFnvPrime;
    }
}

}  // namespace

std::uint64_t Vocabulary::hash() const {
    std::uint64_t h = kFnvOffset;
    fnv_update(h, std::to_string(n_docs_));
    fnv_update(h, "\n");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        fnv_update(h, terms_[i]);
        fnv_update(h, "\t");
        fnv_update(h, std::to_string(df_[i]));
        fnv_update(h, "\n");
    }
    return h;
}

std::string format_hash(std::uint64_t hash) {
    char buf[17];
    auto [end, ec] = std::to_chars(buf, buf + 16, hash, 16);
    std::string digits(buf, end);
    return std::string(16 - digits.size(), '0') + digits;
}

// --- weighting --------------------------------------------------------------

double tfidf(double tf, std::size_t df, std::size_t n, Weighting weighting) {
    if (df < 1 || df > n)
        throw DomainError("tf-idf needs 1 <= df <= n (df=" + std::to_string(df) + ", n=" + std::to_string(n) + ")");
    if (!(tf > 0.0)) return 0.0;
    const double idf = std::log(static_cast<double>(n) / static_cast<double>(df));
    const double t = weighting == Weighting::raw ? tf : 1.0 + std::log(tf);
    return t * idf;
}

double dot(const SparseVector& a, const SparseVector& b) {
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].index == b[j].index)
            sum += a[i++].weight * b[j++].weight;
        else if (a[i].index < b[j].index)
            ++i;
        else
            ++j;
    }
    return sum;
}

double dot(const SparseVector& a, std::span<const double> dense) {
    double sum = 0.0;
    for (const auto& e : a)
        if (e.index < dense.size()) sum += e.weight * dense[e.index];
    return sum;
}

double squared_norm(const SparseVector& a) {
    double sum = 0.0;
    for (const auto& e : a) sum += e.weight * e.weight;
    return sum;
}

SparseVector vectorize(const TokenStream& tokens, const Vocabulary& vocab, Weighting weighting) {
    std::map<std::uint32_t, std::size_t> counts;
    for (const auto& t : tokens)
        if (const auto idx = vocab.index_of(t)) ++counts[static_cast<std::uint32_t>(*idx)];
    SparseVector v;
    v.reserve(counts.size());
    for (const auto& [idx, tf] : counts) {
        const double w = tfidf(static_cast<double>(tf), vocab.df(idx), vocab.n_docs(), weighting);
        if (w != 0.0) v.push_back({idx, w});
    }
    return v;
}

// --- matrices ---------------------------------------------------------------

std::vector<TokenStream> preprocess_corpus(const LabeledCorpus& corpus) {
    std::vector<TokenStream> docs;
    docs.reserve(corpus.size());
    for (const auto& issue : corpus.issues()) docs.push_back(preprocess(issue.title, issue.body));
    return docs;
}

TermDocumentMatrix build_matrix(std::span<const std::string> ids, std::span<const IssueClass> labels,
                                std::span<const TokenStream> docs, std::shared_ptr<const Vocabulary> vocab,
                                Weighting weighting) {
    if (ids.size() != docs.size() || labels.size() != docs.size())
        throw std::invalid_argument("ids, labels and documents must align");
    if (!vocab) throw std::invalid_argument("build_matrix needs a vocabulary");
    TermDocumentMatrix m;
    m.weighting = weighting;
    m.ids.assign(ids.begin(), ids.end());
    m.labels.assign(labels.begin(), labels.end());
    m.rows.reserve(docs.size());
    for (const auto& doc : docs) m.rows.push_back(vectorize(doc, *vocab, weighting));
    m.vocabulary = std::move(vocab);
    return m;
}

TermDocumentMatrix build_matrix(const LabeledCorpus& corpus, std::shared_ptr<const Vocabulary> vocab,
                                Weighting weighting) {
    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const auto& issue : corpus.issues()) ids.push_back(issue.id);
    const auto docs = preprocess_corpus(corpus);
    return build_matrix(ids, corpus.classes(), docs, std::move(vocab), weighting);
}

// --- persistence ------------------------------------------------------------

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

namespace {

template <typename T>
T parse_number(std::string_view text, const char* what) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw MatrixFormatError(std::string("malformed ") + what + " '" + std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t end = text.find(sep, pos);
        parts.push_back(text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
        if (end == std::string_view::npos) return parts;
        pos = end + 1;
    }
}

std::string_view header_value(std::string_view field, std::string_view key) {
    if (field.size() <= key.size() || field.substr(0, key.size()) != key || field[key.size()] != '=')
        throw MatrixFormatError("expected header field '" + std::string(key) + "='");
    return field.substr(key.size() + 1);
}

}  // namespace

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
    out << "# n_docs=" << vocab.n_docs() << '\n';
    for (std::size_t i = 0; i < vocab.size(); ++i) out << i << '\t' << vocab.term(i) << '\t' << vocab.df(i) << '\n';
}

Vocabulary read_vocabulary(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# n_docs=", 0) != 0)
        throw MatrixFormatError("vocabulary must start with '# n_docs=N'");
    const auto n_docs = parse_number<std::size_t>(std::string_view(line).substr(9), "n_docs");
    std::vector<std::string> terms;
    std::vector<std::size_t> df;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto parts = split(line, '\t');
        if (parts.size() != 3) throw MatrixFormatError("vocabulary rows need 3 tab-separated columns");
        if (parse_number<std::size_t>(parts[0], "index") != terms.size())
            throw MatrixFormatError("vocabulary indices must be 0, 1, 2, ...");
        terms.emplace_back(parts[1]);
        df.push_back(parse_number<std::size_t>(parts[2], "df"));
    }
    return Vocabulary::from_parts(std::move(terms), std::move(df), n_docs);
}

void write_matrix(std::ostream& out, const TermDocumentMatrix& m) {
    out << "# wontfix-matrix v1\n";
    out << "terms=" << m.n_terms() << " docs=" << m.n_docs() << " weighting=" << to_string(m.weighting)
        << " vocab_hash=" << format_hash(m.vocabulary ? m.vocabulary->hash() : 0) << '\n';
    for (std::size_t d = 0; d < m.rows.size(); ++d) {
        out << m.ids[d] << '\t' << to_string(m.labels[d]) << '\t';
        for (std::size_t k = 0; k < m.rows[d].size(); ++k) {
            if (k) out << ' ';
            out << m.rows[d][k].index << ':' << format_double(m.rows[d][k].weight);
        }
        out << '\n';
    }
}

TermDocumentMatrix read_matrix(std::istream& in, std::shared_ptr<const Vocabulary> vocab) {
    if (!vocab) throw std::invalid_argument("read_matrix needs a vocabulary");
    std::string line;
    // Leading "# config:" lines echo the command that wrote the file.
    while (std::getline(in, line) && line.rfind("# config:", 0) == 0) {
    }
    if (!in || line != "# wontfix-matrix v1") throw MatrixFormatError("missing matrix magic line");
    if (!std::getline(in, line)) throw MatrixFormatError("missing matrix header");
    const auto fields = split(line, ' ');
    if (fields.size() != 4) throw MatrixFormatError("matrix header needs 4 fields");
    const auto n_terms = parse_number<std::size_t>(header_value(fields[0], "terms"), "terms");
    const auto n_docs = parse_number<std::size_t>(header_value(fields[1], "docs"), "docs");
    TermDocumentMatrix m;
    try {
        m.weighting = parse_weighting(header_value(fields[2], "weighting"));
    } catch (const std::invalid_argument& e) {
        throw MatrixFormatError(e.what());
    }
    if (header_value(fields[3], "vocab_hash") != format_hash(vocab->hash()) || n_terms != vocab->size())
        throw MatrixFormatError("matrix was built with a different vocabulary");

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split(line, '\t');
        if (cols.size() != 3) throw MatrixFormatError("matrix rows need 3 tab-separated columns");
        m.ids.emplace_back(cols[0]);
        try {
            m.labels.push_back(parse_issue_class(cols[1]));
        } catch (const std::invalid_argument& e) {
            throw MatrixFormatError(e.what());
        }
        SparseVector row;
        if (!cols[2].empty()) {
            for (const auto entry : split(cols[2], ' ')) {
                const auto colon = entry.find(':');
                if (colon == std::string_view::npos) throw MatrixFormatError("matrix entries are index:weight");
                const auto idx = parse_number<std::uint32_t>(entry.substr(0, colon), "index");
                const auto w = parse_number<double>(entry.substr(colon + 1), "weight");
                if (idx >= n_terms || (!row.empty() && idx <= row.back().index) || !std::isfinite(w) || w <= 0.0)
                    throw MatrixFormatError("matrix row '" + std::string(cols[0]) + "' violates sparse invariants");
                row.push_back({idx, w});
            }
        }
        m.rows.push_back(std::move(row));
    }
    if (m.rows.size() != n_docs) throw MatrixFormatError("matrix row count differs from header");
    m.vocabulary = std::move(vocab);
    return m;
}

}  // namespace wontfix
