#include "wontfix/stemmer.hpp"

#include <array>
#include <utility>

namespace wontfix::porter2 {
namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

bool ends_with(const std::string& w, std::string_view suffix) {
    return w.size() >= suffix.size() && std::string_view(w).substr(w.size() - suffix.size()) == suffix;
}

// Longest entry of `table` that is a suffix of w, or nullptr.
template <std::size_t N>
const std::pair<std::string_view, std::string_view>*
longest_suffix(const std::string& w, const std::array<std::pair<std::string_view, std::string_view>, N>& table) {
    const std::pair<std::string_view, std::string_view>* best = nullptr;
    for (const auto& entry : table)
        if (ends_with(w, entry.first) && (!best || entry.first.size() > best->first.size())) best = &entry;
    return best;
}

void replace_suffix(std::string& w, std::size_t suffix_len, std::string_view replacement) {
    w.resize(w.size() - suffix_len);
    w.append(replacement);
}

// Does w[0, end) end in a short syllable?
bool ends_short_syllable(const std::string& w, std::size_t end) {
    if (end >= 3) {
        const char last = w[end - 1];
        if (!is_vowel(last) && last != 'w' && last != 'x' && last != 'Y' && is_vowel(w[end - 2]) &&
            !is_vowel(w[end - 3]))
            return true;
    }
    return end == 2 && is_vowel(w[0]) && !is_vowel(w[1]);
}

bool contains_vowel(const std::string& w, std::size_t end) {
    for (std::size_t i = 0; i < end; ++i)
        if (is_vowel(w[i])) return true;
    return false;
}

bool is_double(const std::string& w) {
    if (w.size() < 2) return false;
    const char a = w[w.size() - 1];
    if (a != w[w.size() - 2]) return false;
    return a == 'b' || a == 'd' || a == 'f' || a == 'g' || a == 'm' || a == 'n' || a == 'p' || a == 'r' || a == 't';
}

bool valid_li_ending(char c) {
    return c == 'c' || c == 'd' || c == 'e' || c == 'g' || c == 'h' || c == 'k' || c == 'm' || c == 'n' ||
           c == 'r' || c == 't';
}

const char* exception1(std::string_view w) {
    static constexpr std::array<std::pair<std::string_view, const char*>, 18> table = {{
        {"skis", "ski"},     {"skies", "sky"},   {"dying", "die"},   {"lying", "lie"},   {"tying", "tie"},
        {"idly", "idl"},     {"gently", "gentl"}, {"ugly", "ugli"},  {"early", "earli"}, {"only", "onli"},
        {"singly", "singl"}, {"sky", "sky"},     {"news", "news"},   {"howe", "howe"},   {"atlas", "atlas"},
        {"cosmos", "cosmos"}, {"bias", "bias"},  {"andes", "andes"},
    }};
    for (const auto& [from, to] : table)
        if (w == from) return to;
    return nullptr;
}

bool exception2(const std::string& w) {
    static constexpr std::array<std::string_view, 8> table = {"inning", "outing",  "canning", "herring",
                                                              "earring", "proceed", "exceed",  "succeed"};
    for (const auto t : table)
        if (w == t) return true;
    return false;
}

struct Regions {
    std::size_t r1;
    std::size_t r2;
};

std::size_t after_vowel_consonant(const std::string& w, std::size_t from) {
    std::size_t i = from;
    while (i < w.size() && !is_vowel(w[i])) ++i;
    while (i < w.size() && is_vowel(w[i])) ++i;
    return i < w.size() ? i + 1 : w.size();
}

Regions mark_regions(const std::string& w) {
    std::size_t r1 = std::string::npos;
    for (std::string_view prefix : {std::string_view("gener"), std::string_view("commun"), std::string_view("arsen")})
        if (w.size() >= prefix.size() && std::string_view(w).substr(0, prefix.size()) == prefix) r1 = prefix.size();
    if (r1 == std::string::npos) r1 = after_vowel_consonant(w, 0);
    return {r1, after_vowel_consonant(w, r1)};
}

using Table = std::pair<std::string_view, std::string_view>;

void step_0(std::string& w) {
    static constexpr std::array<Table, 3> t = {{{"'s'", ""}, {"'s", ""}, {"'", ""}}};
    if (const auto* m = longest_suffix(w, t)) replace_suffix(w, m->first.size(), "");
}

void step_1a(std::string& w) {
    static constexpr std::array<Table, 6> t = {
        {{"sses", "ss"}, {"ied", ""}, {"ies", ""}, {"s", ""}, {"us", ""}, {"ss", ""}}};
    const auto* m = longest_suffix(w, t);
    if (!m) return;
    const std::size_t start = w.size() - m->first.size();
    if (m->first == "sses") {
        replace_suffix(w, 4, "ss");
    } else if (m->first == "ied" || m->first == "ies") {
        replace_suffix(w, 3, start >= 2 ? "i" : "ie");
    } else if (m->first == "s") {
        // A vowel somewhere before the letter preceding the s.
        if (start >= 1 && contains_vowel(w, start - 1)) w.pop_back();
    }
}

void step_1b(std::string& w, const Regions& r) {
    static constexpr std::array<Table, 6> t = {
        {{"eed", ""}, {"eedly", ""}, {"ed", ""}, {"edly", ""}, {"ing", ""}, {"ingly", ""}}};
    const auto* m = longest_suffix(w, t);
    if (!m) return;
    const std::size_t start = w.size() - m->first.size();
    if (m->first == "eed" || m->first == "eedly") {
        if (start >= r.r1) replace_suffix(w, m->first.size(), "ee");
        return;
    }
    if (!contains_vowel(w, start)) return;
    w.resize(start);
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz"))
        w.push_back('e');
    else if (is_double(w))
        w.pop_back();
    else if (r.r1 == w.size() && ends_short_syllable(w, w.size()))
        w.push_back('e');
}

void step_1c(std::string& w) {
    const std::size_t n = w.size();
    if (n >= 3 && (w[n - 1] == 'y' || w[n - 1] == 'Y') && !is_vowel(w[n - 2])) w[n - 1] = 'i';
}

void step_2(std::string& w, const Regions& r) {
    static constexpr std::array<Table, 24> t = {{
        {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},   {"abli", "able"},   {"entli", "ent"},
        {"izer", "ize"},    {"ization", "ize"}, {"ational", "ate"}, {"ation", "ate"},   {"ator", "ate"},
        {"alism", "al"},    {"aliti", "al"},    {"alli", "al"},     {"fulness", "ful"}, {"ousli", "ous"},
        {"ousness", "ous"}, {"iveness", "ive"}, {"iviti", "ive"},   {"biliti", "ble"},  {"bli", "ble"},
        {"ogi", "og"},      {"fulli", "ful"},   {"lessli", "less"}, {"li", ""},
    }};
    const auto* m = longest_suffix(w, t);
    if (!m) return;
    const std::size_t start = w.size() - m->first.size();
    if (start < r.r1) return;
    if (m->first == "ogi") {
        if (start >= 1 && w[start - 1] == 'l') replace_suffix(w, 3, "og");
    } else if (m->first == "li") {
        if (start >= 1 && valid_li_ending(w[start - 1])) replace_suffix(w, 2, "");
    } else {
        replace_suffix(w, m->first.size(), m->second);
    }
}

void step_3(std::string& w, const Regions& r) {
    static constexpr std::array<Table, 9> t = {{
        {"tional", "tion"}, {"ational", "ate"}, {"alize", "al"}, {"icate", "ic"}, {"iciti", "ic"},
        {"ical", "ic"},     {"ful", ""},        {"ness", ""},    {"ative", ""},
    }};
    const auto* m = longest_suffix(w, t);
    if (!m) return;
    const std::size_t start = w.size() - m->first.size();
    if (start < r.r1) return;
    if (m->first == "ative" && start < r.r2) return;
    replace_suffix(w, m->first.size(), m->second);
}

void step_4(std::string& w, const Regions& r) {
    static constexpr std::array<Table, 18> t = {{
        {"al", ""},  {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},  {"able", ""},
        {"ible", ""}, {"ant", ""}, {"ement", ""}, {"ment", ""}, {"ent", ""}, {"ism", ""},
        {"ate", ""}, {"iti", ""},  {"ous", ""},  {"ive", ""}, {"ize", ""}, {"ion", ""},
    }};
    const auto* m = longest_suffix(w, t);
    if (!m) return;
    const std::size_t start = w.size() - m->first.size();
    if (start < r.r2) return;
    if (m->first == "ion") {
        if (start >= 1 && (w[start - 1] == 's' || w[start - 1] == 't')) replace_suffix(w, 3, "");
    } else {
        replace_suffix(w, m->first.size(), "");
    }
}

void step_5(std::string& w, const Regions& r) {
    if (w.empty()) return;
    const std::size_t last = w.size() - 1;
    if (w[last] == 'e') {
        if (last >= r.r2 || (last >= r.r1 && !ends_short_syllable(w, last))) w.pop_back();
    } else if (w[last] == 'l') {
        if (last >= r.r2 && last >= 1 && w[last - 1] == 'l') w.pop_back();
    }
}

}  // namespace

std::string stem(std::string_view word) {
    if (const char* fixed = exception1(word)) return fixed;
    if (word.size() < 3) return std::string(word);

    std::string w(word);
    if (w.front() == '\'') w.erase(0, 1);
    bool y_found = false;
    if (!w.empty() && w[0] == 'y') {
        w[0] = 'Y';
        y_found = true;
    }
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i] == 'y' && is_vowel(w[i - 1])) {
            w[i] = 'Y';
            y_found = true;
        }
    }

    const Regions regions = mark_regions(w);
    step_0(w);
    step_1a(w);
    if (!exception2(w)) {
        step_1b(w, regions);
        step_1c(w);
        step_2(w, regions);
        step_3(w, regions);
        step_4(w, regions);
        step_5(w, regions);
    }
    if (y_found)
        for (char& c : w)
            if (c == 'Y') c = 'y';
    return w;
}

}  // namespace wontfix::porter2
