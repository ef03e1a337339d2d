#include "wontfix/textprep.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "wontfix/embedded_data.hpp"
#include "wontfix/stemmer.hpp"

namespace wontfix {
namespace {

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ascii_alnum(char c) { return is_ascii_alpha(c) || (c >= '0' && c <= '9'); }

bool keep_token(std::string_view t) {
    if (t.size() < 2) return false;
    return !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_block_tag(std::string_view name) {
    static constexpr std::array<std::string_view, 26> blocks = {
        "address", "article", "blockquote", "br", "dd", "details", "div", "dl", "dt",
        "h1", "h2", "h3", "h4", "h5", "h6", "hr", "li", "ol", "p", "pre", "section",
        "summary", "table", "td", "th", "tr"};
    return std::find(blocks.begin(), blocks.end(), name) != blocks.end();
}

std::string decode_entities(std::string_view text) {
    static constexpr std::array<std::pair<std::string_view, char>, 5> entities = {
        {{"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''}}};
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        bool matched = false;
        if (text[i] == '&') {
            for (const auto& [name, ch] : entities) {
                if (text.substr(i, name.size()) == name) {
                    out.push_back(ch);
                    i += name.size();
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) out.push_back(text[i++]);
    }
    return out;
}

std::string strip_tags(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] == '<' && i + 1 < text.size()) {
            const char next = text[i + 1];
            if (is_ascii_alpha(next) || next == '/' || next == '!' || next == '?') {
                const std::size_t close = text.find_first_of(">\n", i + 1);
                if (close != std::string_view::npos && text[close] == '>') {
                    std::size_t p = i + 1;
                    if (text[p] == '/') ++p;
                    std::string name;
                    while (p < close && is_ascii_alnum(text[p]))
                        name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[p++]))));
                    if (is_block_tag(name)) out.push_back(' ');
                    i = close + 1;
                    continue;
                }
            }
        }
        out.push_back(text[i++]);
    }
    return out;
}

}  // namespace

// --- stopwords --------------------------------------------------------------

StopwordList StopwordList::parse(std::string_view text) {
    StopwordList list;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
        if (!line.empty() && list.set_.emplace(line).second) list.words_.emplace_back(line);
        pos = end + 1;
    }
    for (const auto& w : list.words_) {
        list.closure_.insert(w);
        list.closure_.insert(stable_stem(w));
    }
    return list;
}

const StopwordList& StopwordList::builtin() {
    static const StopwordList list = parse(embedded::stopwords_en());
    return list;
}

bool StopwordList::contains(std::string_view word) const { return set_.contains(std::string(word)); }

bool StopwordList::in_stemmed_closure(std::string_view term) const { return closure_.contains(std::string(term)); }

// --- pipeline stages --------------------------------------------------------

std::string strip_markup(std::string_view text) {
    std::string current(text);
    for (;;) {
        std::string next = strip_tags(decode_entities(current));
        if (next == current) return current;
        current = std::move(next);
    }
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string token;
    auto flush = [&] {
        if (keep_token(token)) tokens.push_back(token);
        token.clear();
    };
    for (const char c : text) {
        if (is_ascii_alnum(c))
            token.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
        else
            flush();
    }
    flush();
    return tokens;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens, const StopwordList& stopwords) {
    std::erase_if(tokens, [&](const std::string& t) { return stopwords.contains(t); });
    return tokens;
}

std::vector<std::string> stem(std::vector<std::string> tokens) {
    for (auto& t : tokens) t = porter2::stem(t);
    return tokens;
}

std::string stable_stem(std::string_view word) {
    std::string current(word);
    // Each pass either shortens the word or leaves it unchanged in practice;
    // the bound only guards against a pathological cycle.
    for (int pass = 0; pass < 32; ++pass) {
        std::string next = porter2::stem(current);
        if (next == current) break;
        current = std::move(next);
    }
    return current;
}

TokenStream preprocess(std::string_view title, std::string_view body, const StopwordList& stopwords) {
    std::string text;
    text.reserve(title.size() + body.size() + 1);
    text.append(title).push_back(' ');
    text.append(body);
    TokenStream out;
    for (const auto& token : remove_stopwords(tokenize(strip_markup(text)), stopwords)) {
        std::string term = stable_stem(token);
        if (keep_token(term) && !stopwords.in_stemmed_closure(term)) out.push_back(std::move(term));
    }
    return out;
}

}  // namespace wontfix
