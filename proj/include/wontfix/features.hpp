#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wontfix/corpus.hpp"
#include "wontfix/error.hpp"
#include "wontfix/textprep.hpp"

namespace wontfix {

class EmptyCorpusError : public DataError {
public:
    using DataError::DataError;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class MatrixFormatError : public DataError {
public:
    using DataError::DataError;
};

// raw: tf * ln(n/df). sublinear: (1 + ln tf) * ln(n/df) for tf > 0.
enum class Weighting { raw, sublinear };

// Which documents the vocabulary (and therefore idf) is fitted on.
enum class VocabularyFit { train_only, full_corpus };

std::string_view to_string(Weighting w);
std::string_view to_string(VocabularyFit f);
Weighting parse_weighting(std::string_view s);
VocabularyFit parse_vocabulary_fit(std::string_view s);

class Vocabulary {
public:
    Vocabulary() = default;

    // Terms occurring in at least min_df documents, indexed in order of first
    // occurrence. Throws EmptyCorpusError when docs is empty.
    static Vocabulary fit(std::span<const TokenStream> docs, std::size_t min_df = 1);

    // Rebuilds a saved vocabulary. Throws DataError on duplicate terms or a
    // df outside [1, n_docs].
    static Vocabulary from_parts(std::vector<std::string> terms, std::vector<std::size_t> df, std::size_t n_docs);

    std::size_t size() const { return terms_.size(); }
    std::size_t n_docs() const { return n_docs_; }
    const std::string& term(std::size_t index) const { return terms_.at(index); }
    std::size_t df(std::size_t index) const { return df_.at(index); }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<std::size_t>& dfs() const { return df_; }
    std::optional<std::size_t> index_of(std::string_view term) const;

    // FNV-1a 64 over n_docs and the (term, df) sequence.
    std::uint64_t hash() const;

    bool operator==(const Vocabulary& other) const { return n_docs_ == other.n_docs_ && terms_ == other.terms_ && df_ == other.df_; }

private:
    std::vector<std::string> terms_;
    std::vector<std::size_t> df_;
    std::size_t n_docs_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
};

std::string format_hash(std::uint64_t hash);

// tf-idf weight with natural log. Throws DomainError unless 1 <= df <= n.
double tfidf(double tf, std::size_t df, std::size_t n, Weighting weighting = Weighting::raw);

struct SparseEntry {
    std::uint32_t index;
    double weight;

    bool operator==(const SparseEntry&) const = default;
};

// Strictly increasing indices, no explicit zeros.
using SparseVector = std::vector<SparseEntry>;

double dot(const SparseVector& a, const SparseVector& b);
double dot(const SparseVector& a, std::span<const double> dense);
double squared_norm(const SparseVector& a);

// Per-term counts through tfidf; out-of-vocabulary terms are dropped, as are
// terms whose weight is 0.
SparseVector vectorize(const TokenStream& tokens, const Vocabulary& vocab, Weighting weighting = Weighting::raw);

struct TermDocumentMatrix {
    std::shared_ptr<const Vocabulary> vocabulary;
    Weighting weighting = Weighting::raw;
    std::vector<std::string> ids;
    std::vector<IssueClass> labels;
    std::vector<SparseVector> rows;

    std::size_t n_docs() const { return rows.size(); }
    std::size_t n_terms() const { return vocabulary ? vocabulary->size() : 0; }
};

// preprocess(title, body) for every issue, in corpus order.
std::vector<TokenStream> preprocess_corpus(const LabeledCorpus& corpus);

TermDocumentMatrix build_matrix(const LabeledCorpus& corpus, std::shared_ptr<const Vocabulary> vocab,
                                Weighting weighting = Weighting::raw);

// Same as build_matrix for callers that already hold the token streams.
TermDocumentMatrix build_matrix(std::span<const std::string> ids, std::span<const IssueClass> labels,
                                std::span<const TokenStream> docs, std::shared_ptr<const Vocabulary> vocab,
                                Weighting weighting = Weighting::raw);

// Vocabulary TSV: "index\tterm\tdf" per line after a "# n_docs=N" header.
void write_vocabulary(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocabulary(std::istream& in);

// Matrix text format:
//   # wontfix-matrix v1
//   terms=<|V|> docs=<n> weighting=<raw|sublinear> vocab_hash=<16 hex digits>
//   <id>\t<class>\t<index>:<weight> <index>:<weight> ...
// Weights use the shortest representation that round-trips exactly.
void write_matrix(std::ostream& out, const TermDocumentMatrix& matrix);
TermDocumentMatrix read_matrix(std::istream& in, std::shared_ptr<const Vocabulary> vocab);

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace wontfix
