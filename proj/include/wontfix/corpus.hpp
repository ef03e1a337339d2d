#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wontfix/error.hpp"
#include "wontfix/timestamp.hpp"

namespace wontfix {

enum class IssueState { open, closed };
enum class AuthorRole { owner, member, contributor, collaborator, outsider };

// Binary target. wontfix is the positive class throughout.
enum class IssueClass { wontfix, non_wontfix };

inline IssueClass other_class(IssueClass c) {
    return c == IssueClass::wontfix ? IssueClass::non_wontfix : IssueClass::wontfix;
}

std::string_view to_string(IssueState s);
std::string_view to_string(AuthorRole r);
std::string_view to_string(IssueClass c);
IssueState parse_issue_state(std::string_view s);
AuthorRole parse_author_role(std::string_view s);
IssueClass parse_issue_class(std::string_view s);

struct CommentRecord {
    std::string author;
    Timestamp created_at{};
    std::string body;

    bool operator==(const CommentRecord&) const = default;
};

struct IssueRecord {
    std::string id;    // "owner/name#number"
    std::string repo;  // "owner/name"
    std::string url;
    std::string title;
    std::string body;  // empty when the issue has no description
    IssueState state = IssueState::closed;
    std::vector<std::string> raw_labels;
    Timestamp created_at{};
    std::optional<Timestamp> closed_at;
    std::string author;
    AuthorRole author_role = AuthorRole::outsider;
    std::vector<CommentRecord> comments;  // non-decreasing by created_at
    std::string provenance;               // free-form note, e.g. "locked"

    bool operator==(const IssueRecord&) const = default;
};

// Multi-valued motivation sets from the opening/closing taxonomies.
struct TaxonomyAnnotation {
    std::set<std::string> opening;
    std::set<std::string> closing;

    bool operator==(const TaxonomyAnnotation&) const = default;
};

// --- errors ---------------------------------------------------------------

class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class MissingFieldError : public ParseError {
public:
    MissingFieldError(std::size_t line, std::string field);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class DuplicateIdError : public DataError {
public:
    explicit DuplicateIdError(const std::string& id);
};

class OpenIssueError : public DataError {
public:
    explicit OpenIssueError(const std::string& id);
};

class DegenerateClassError : public DataError {
public:
    using DataError::DataError;
};

// --- wontfix labels ---------------------------------------------------------

// Lowercases ASCII and drops whitespace, apostrophes (' and U+2019), hyphens,
// underscores and colons. "Status: Won't-Fix" -> "statuswontfix".
std::string canonical_label_form(std::string_view raw);

// True when the canonical form is one of the known wontfix spellings.
bool normalize_wontfix_label(std::string_view raw);

// wontfix iff any raw label normalizes to a wontfix spelling.
// Throws OpenIssueError for issues that are not closed.
IssueClass assign_class(const IssueRecord& issue);

// --- corpus -------------------------------------------------------------------

struct ClassCounts {
    std::size_t wontfix = 0;
    std::size_t non_wontfix = 0;

    std::size_t total() const { return wontfix + non_wontfix; }
    std::size_t of(IssueClass c) const { return c == IssueClass::wontfix ? wontfix : non_wontfix; }
    bool operator==(const ClassCounts&) const = default;
};

// Immutable after construction; safe to share read-only across threads.
class LabeledCorpus {
public:
    LabeledCorpus() = default;

    // Classes are assigned with assign_class. Throws DuplicateIdError,
    // OpenIssueError.
    static LabeledCorpus from_issues(std::vector<IssueRecord> issues,
                                     std::map<std::string, TaxonomyAnnotation> annotations = {});

    std::size_t size() const { return issues_.size(); }
    bool empty() const { return issues_.empty(); }
    const std::vector<IssueRecord>& issues() const { return issues_; }
    const IssueRecord& issue(std::size_t i) const { return issues_.at(i); }
    IssueClass class_at(std::size_t i) const { return classes_.at(i); }
    std::span<const IssueClass> classes() const { return classes_; }

    // Throws std::out_of_range for unknown ids.
    IssueClass class_of(std::string_view id) const;
    std::optional<std::size_t> index_of(std::string_view id) const;

    const TaxonomyAnnotation* annotation(std::string_view id) const;
    const std::map<std::string, TaxonomyAnnotation>& annotations() const { return annotations_; }
    bool has_annotations() const { return !annotations_.empty(); }

    ClassCounts counts() const;

    // Issues at the given positions, in the given order, with their classes
    // and annotations.
    LabeledCorpus subset(std::span<const std::size_t> indices) const;

private:
    std::vector<IssueRecord> issues_;
    std::vector<IssueClass> classes_;
    std::unordered_map<std::string, std::size_t> index_;
    std::map<std::string, TaxonomyAnnotation> annotations_;
};

// --- JSON Lines -----------------------------------------------------------

struct ParsedIssue {
    IssueRecord issue;
    std::optional<TaxonomyAnnotation> annotation;
};

// Parses one JSONL record. `line` is used for error reporting only.
ParsedIssue parse_issue_line(std::string_view text, std::size_t line = 1);

// Serializes to a single line (no trailing newline).
std::string issue_to_jsonl(const IssueRecord& issue, const TaxonomyAnnotation* annotation = nullptr);

// Reads every record without assigning classes (open issues allowed).
// Blank lines are skipped. Throws ParseError / MissingFieldError /
// DuplicateIdError.
std::vector<ParsedIssue> read_issues(std::istream& in);
std::vector<ParsedIssue> read_issues(const std::filesystem::path& path);

// read_issues + class assignment.
LabeledCorpus load_corpus(std::istream& in);
LabeledCorpus load_corpus(const std::filesystem::path& path);

void write_corpus(std::ostream& out, const LabeledCorpus& corpus);
void write_corpus(const std::filesystem::path& path, const LabeledCorpus& corpus);

// --- splitting --------------------------------------------------------------

struct CorpusSplit {
    LabeledCorpus train;
    LabeledCorpus test;
};

// Per class, floor(fraction * class size) issues drawn by a seeded shuffle go
// to train and the rest to test. Both parts keep the original corpus order.
// Throws DegenerateClassError when a class has fewer than 2 members and
// std::invalid_argument unless 0 < fraction < 1.
CorpusSplit stratified_split(const LabeledCorpus& corpus, double fraction, std::uint64_t seed);

// Index form of stratified_split, for callers that keep parallel arrays.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_split_indices(std::span<const IssueClass> classes, double fraction, std::uint64_t seed);

}  // namespace wontfix
