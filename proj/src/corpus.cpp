#include "wontfix/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "wontfix/random.hpp"
#include "wontfix/taxonomy.hpp"

namespace wontfix {

using nlohmann::json;

std::string_view to_string(IssueState s) { return s == IssueState::open ? "open" : "closed"; }

std::string_view to_string(AuthorRole r) {
    switch (r) {
        case AuthorRole::owner: return "owner";
        case AuthorRole::member: return "member";
        case AuthorRole::contributor: return "contributor";
        case AuthorRole::collaborator: return "collaborator";
        case AuthorRole::outsider: return "outsider";
    }
    return "outsider";
}

std::string_view to_string(IssueClass c) { return c == IssueClass::wontfix ? "wontfix" : "non_wontfix"; }

IssueState parse_issue_state(std::string_view s) {
    if (s == "open") return IssueState::open;
    if (s == "closed") return IssueState::closed;
    throw std::invalid_argument("unknown issue state '" + std::string(s) + "'");
}

AuthorRole parse_author_role(std::string_view s) {
    if (s == "owner") return AuthorRole::owner;
    if (s == "member") return AuthorRole::member;
    if (s == "contributor") return AuthorRole::contributor;
    if (s == "collaborator") return AuthorRole::collaborator;
    if (s == "outsider") return AuthorRole::outsider;
    throw std::invalid_argument("unknown author role '" + std::string(s) + "'");
}

IssueClass parse_issue_class(std::string_view s) {
    if (s == "wontfix") return IssueClass::wontfix;
    if (s == "non_wontfix") return IssueClass::non_wontfix;
    throw std::invalid_argument("unknown class '" + std::string(s) + "'");
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

MissingFieldError::MissingFieldError(std::size_t line, std::string field)
    : ParseError(line, "missing field '" + field + "'"), field_(std::move(field)) {}

DuplicateIdError::DuplicateIdError(const std::string& id) : DataError("duplicate issue id '" + id + "'") {}

OpenIssueError::OpenIssueError(const std::string& id)
    : DataError("issue '" + id + "' is not closed; only closed issues can be classed") {}

// --- labels -------------------------------------------------------------------

std::string canonical_label_form(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(raw[i]);
        // U+2019 RIGHT SINGLE QUOTATION MARK is E2 80 99 in UTF-8.
        if (c == 0xE2 && i + 2 < raw.size() && static_cast<unsigned char>(raw[i + 1]) == 0x80 &&
            static_cast<unsigned char>(raw[i + 2]) == 0x99) {
            i += 2;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || c == '\'' || c == '-' ||
            c == '_' || c == ':')
            continue;
        out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c));
    }
    return out;
}

bool normalize_wontfix_label(std::string_view raw) {
    static constexpr std::array<std::string_view, 8> canonical = {
        "wontfix",   "statuswontfix", "resolutionwontfix", "resolvedwontfix",
        "closedwontfix", "notfixing", "statuswillnotfix", "cannotfix"};
    const std::string form = canonical_label_form(raw);
    return std::find(canonical.begin(), canonical.end(), form) != canonical.end();
}

IssueClass assign_class(const IssueRecord& issue) {
    if (issue.state != IssueState::closed) throw OpenIssueError(issue.id);
    const bool wontfix = std::any_of(issue.raw_labels.begin(), issue.raw_labels.end(),
                                     [](const std::string& l) { return normalize_wontfix_label(l); });
    return wontfix ? IssueClass::wontfix : IssueClass::non_wontfix;
}

// --- corpus -------------------------------------------------------------------

LabeledCorpus LabeledCorpus::from_issues(std::vector<IssueRecord> issues,
                                         std::map<std::string, TaxonomyAnnotation> annotations) {
    LabeledCorpus c;
    c.classes_.reserve(issues.size());
    c.index_.reserve(issues.size());
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (!c.index_.emplace(issues[i].id, i).second) throw DuplicateIdError(issues[i].id);
        c.classes_.push_back(assign_class(issues[i]));
    }
    for (const auto& [id, _] : annotations)
        if (!c.index_.contains(id))
            throw DataError("annotation for unknown issue id '" + id + "'");
    c.issues_ = std::move(issues);
    c.annotations_ = std::move(annotations);
    return c;
}

IssueClass LabeledCorpus::class_of(std::string_view id) const {
    const auto idx = index_of(id);
    if (!idx) throw std::out_of_range("unknown issue id '" + std::string(id) + "'");
    return classes_[*idx];
}

std::optional<std::size_t> LabeledCorpus::index_of(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const TaxonomyAnnotation* LabeledCorpus::annotation(std::string_view id) const {
    const auto it = annotations_.find(std::string(id));
    return it == annotations_.end() ? nullptr : &it->second;
}

ClassCounts LabeledCorpus::counts() const {
    ClassCounts counts;
    for (const IssueClass c : classes_) (c == IssueClass::wontfix ? counts.wontfix : counts.non_wontfix)++;
    return counts;
}

LabeledCorpus LabeledCorpus::subset(std::span<const std::size_t> indices) const {
    LabeledCorpus c;
    c.issues_.reserve(indices.size());
    c.classes_.reserve(indices.size());
    for (const std::size_t i : indices) {
        const IssueRecord& issue = issues_.at(i);
        if (!c.index_.emplace(issue.id, c.issues_.size()).second) throw DuplicateIdError(issue.id);
        c.issues_.push_back(issue);
        c.classes_.push_back(classes_[i]);
        if (const auto* a = annotation(issue.id)) c.annotations_.emplace(issue.id, *a);
    }
    return c;
}

// --- JSON Lines -----------------------------------------------------------

namespace {

const json& require(const json& obj, const char* field, std::size_t line) {
    const auto it = obj.find(field);
    if (it == obj.end()) throw MissingFieldError(line, field);
    return *it;
}

std::string require_string(const json& obj, const char* field, std::size_t line) {
    const json& v = require(obj, field, line);
    if (!v.is_string()) throw ParseError(line, std::string("field '") + field + "' must be a string");
    return v.get<std::string>();
}

// Absent or null reads as empty.
std::string optional_string(const json& obj, const char* field, std::size_t line) {
    const auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) return {};
    if (!it->is_string()) throw ParseError(line, std::string("field '") + field + "' must be a string or null");
    return it->get<std::string>();
}

Timestamp require_timestamp(const json& obj, const char* field, std::size_t line) {
    const std::string text = require_string(obj, field, line);
    try {
        return parse_timestamp(text);
    } catch (const std::invalid_argument& e) {
        throw ParseError(line, std::string("field '") + field + "': " + e.what());
    }
}

std::set<std::string> parse_motivations(const json& obj, const char* field, TaxonomyKind kind, std::size_t line) {
    const json& arr = require(obj, field, line);
    if (!arr.is_array()) throw ParseError(line, std::string("annotations.") + field + " must be an array");
    std::set<std::string> out;
    for (const json& v : arr) {
        if (!v.is_string()) throw ParseError(line, std::string("annotations.") + field + " entries must be strings");
        const std::string id = v.get<std::string>();
        if (!Taxonomy::builtin().find(kind, id))
            throw ParseError(line, "unknown " + std::string(to_string(kind)) + " motivation '" + id + "'");
        out.insert(id);
    }
    if (out.empty()) throw ParseError(line, std::string("annotations.") + field + " must be non-empty");
    return out;
}

}  // namespace

ParsedIssue parse_issue_line(std::string_view text, std::size_t line) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(line, "record must be a JSON object");

    ParsedIssue parsed;
    IssueRecord& r = parsed.issue;
    r.id = require_string(obj, "id", line);
    if (r.id.empty()) throw ParseError(line, "empty issue id");
    r.repo = require_string(obj, "repo", line);
    r.url = require_string(obj, "url", line);
    r.title = require_string(obj, "title", line);
    r.body = optional_string(obj, "body", line);
    try {
        r.state = parse_issue_state(require_string(obj, "state", line));
        r.author_role = parse_author_role(require_string(obj, "author_role", line));
    } catch (const std::invalid_argument& e) {
        throw ParseError(line, e.what());
    }

    const json& labels = require(obj, "labels", line);
    if (!labels.is_array()) throw ParseError(line, "field 'labels' must be an array");
    for (const json& l : labels) {
        if (!l.is_string()) throw ParseError(line, "labels must be strings");
        r.raw_labels.push_back(l.get<std::string>());
    }

    r.created_at = require_timestamp(obj, "created_at", line);
    if (const auto it = obj.find("closed_at"); it != obj.end() && !it->is_null()) {
        r.closed_at = require_timestamp(obj, "closed_at", line);
        if (*r.closed_at < r.created_at) throw ParseError(line, "closed_at precedes created_at");
    }
    r.author = require_string(obj, "author", line);

    const json& comments = require(obj, "comments", line);
    if (!comments.is_array()) throw ParseError(line, "field 'comments' must be an array");
    for (const json& c : comments) {
        if (!c.is_object()) throw ParseError(line, "comments must be objects");
        CommentRecord cr;
        cr.author = require_string(c, "author", line);
        cr.created_at = require_timestamp(c, "created_at", line);
        cr.body = optional_string(c, "body", line);
        if (cr.created_at < r.created_at) throw ParseError(line, "comment precedes the issue's created_at");
        if (!r.comments.empty() && cr.created_at < r.comments.back().created_at)
            throw ParseError(line, "comments are not ordered by created_at");
        r.comments.push_back(std::move(cr));
    }
    r.provenance = optional_string(obj, "provenance", line);

    if (const auto it = obj.find("annotations"); it != obj.end() && !it->is_null()) {
        if (!it->is_object()) throw ParseError(line, "field 'annotations' must be an object");
        TaxonomyAnnotation a;
        a.opening = parse_motivations(*it, "opening", TaxonomyKind::opening, line);
        a.closing = parse_motivations(*it, "closing", TaxonomyKind::closing, line);
        parsed.annotation = std::move(a);
    }
    return parsed;
}

std::string issue_to_jsonl(const IssueRecord& issue, const TaxonomyAnnotation* annotation) {
    json obj;
    obj["id"] = issue.id;
    obj["repo"] = issue.repo;
    obj["url"] = issue.url;
    obj["title"] = issue.title;
    obj["body"] = issue.body;
    obj["state"] = to_string(issue.state);
    obj["labels"] = issue.raw_labels;
    obj["created_at"] = format_timestamp(issue.created_at);
    obj["closed_at"] = issue.closed_at ? json(format_timestamp(*issue.closed_at)) : json(nullptr);
    obj["author"] = issue.author;
    obj["author_role"] = to_string(issue.author_role);
    json comments = json::array();
    for (const auto& c : issue.comments)
        comments.push_back({{"author", c.author}, {"created_at", format_timestamp(c.created_at)}, {"body", c.body}});
    obj["comments"] = std::move(comments);
    if (!issue.provenance.empty()) obj["provenance"] = issue.provenance;
    if (annotation) obj["annotations"] = {{"opening", annotation->opening}, {"closing", annotation->closing}};
    return obj.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::vector<ParsedIssue> read_issues(std::istream& in) {
    std::vector<ParsedIssue> out;
    std::unordered_map<std::string, std::size_t> seen;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        ParsedIssue p = parse_issue_line(text, line);
        if (!seen.emplace(p.issue.id, line).second) throw DuplicateIdError(p.issue.id);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<ParsedIssue> read_issues(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return read_issues(in);
}

LabeledCorpus load_corpus(std::istream& in) {
    std::vector<ParsedIssue> parsed = read_issues(in);
    std::vector<IssueRecord> issues;
    std::map<std::string, TaxonomyAnnotation> annotations;
    issues.reserve(parsed.size());
    for (auto& p : parsed) {
        if (p.annotation) annotations.emplace(p.issue.id, std::move(*p.annotation));
        issues.push_back(std::move(p.issue));
    }
    return LabeledCorpus::from_issues(std::move(issues), std::move(annotations));
}

LabeledCorpus load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return load_corpus(in);
}

void write_corpus(std::ostream& out, const LabeledCorpus& corpus) {
    for (const auto& issue : corpus.issues()) out << issue_to_jsonl(issue, corpus.annotation(issue.id)) << '\n';
}

void write_corpus(const std::filesystem::path& path, const LabeledCorpus& corpus) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    write_corpus(out, corpus);
}

// --- splitting --------------------------------------------------------------

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_split_indices(std::span<const IssueClass> classes, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("split fraction must lie in (0, 1)");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < classes.size(); ++i)
        by_class[classes[i] == IssueClass::wontfix ? 0 : 1].push_back(i);
    for (int c = 0; c < 2; ++c)
        if (by_class[c].size() < 2)
            throw DegenerateClassError("class " + std::string(to_string(c == 0 ? IssueClass::wontfix : IssueClass::non_wontfix)) +
                                       " has " + std::to_string(by_class[c].size()) + " member(s); at least 2 are required");

    Rng rng(seed);
    std::vector<char> in_train(classes.size(), 0);
    for (auto& members : by_class) {
        seeded_shuffle(std::span<std::size_t>(members), rng);
        const auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(members.size()) + 1e-9));
        for (std::size_t k = 0; k < n_train; ++k) in_train[members[k]] = 1;
    }
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < classes.size(); ++i) (in_train[i] ? train : test).push_back(i);
    return {std::move(train), std::move(test)};
}

CorpusSplit stratified_split(const LabeledCorpus& corpus, double fraction, std::uint64_t seed) {
    const auto [train, test] = stratified_split_indices(corpus.classes(), fraction, seed);
    return {corpus.subset(train), corpus.subset(test)};
}

}  // namespace wontfix
