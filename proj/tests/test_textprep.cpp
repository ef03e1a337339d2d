#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>

#include "support.hpp"
#include "wontfix/random.hpp"
#include "wontfix/stemmer.hpp"
#include "wontfix/textprep.hpp"

using namespace wontfix;

namespace {

std::string join(const TokenStream& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

std::string random_text(Rng& rng, std::size_t length) {
    static const std::vector<std::string> pieces = {
        "the",  "crash", "<b>",   "</b>", "&amp;", "&lt;", "&gt;", "running", "tests", "Won't", "fix",
        " ",    " ",     "\n",    "42",   "x",     "é",    "<p>",  "option",  "<",     ">",     "disable",
        "it's", "ing",   "ation", ",",    ".",     "!",    "--",   "&#39;",   "YES",   "generously"};
    std::string out;
    for (std::size_t i = 0; i < length; ++i) out += pieces[uniform_index(rng, pieces.size())];
    return out;
}

}  // namespace

TEST_CASE("Snowball English vectors") {
    std::ifstream in(test::data_path("snowball_en.tsv"));
    REQUIRE(in);
    std::string line;
    std::size_t total = 0, mismatches = 0;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        REQUIRE(tab != std::string::npos);
        const std::string word = line.substr(0, tab), expected = line.substr(tab + 1);
        ++total;
        if (porter2::stem(word) != expected) {
            if (++mismatches <= 10) MESSAGE(word << " -> " << porter2::stem(word) << " (expected " << expected << ")");
        }
    }
    CHECK(total == 29417);
    CHECK(mismatches == 0);
}

TEST_CASE("short words pass through the stemmer") {
    CHECK(porter2::stem("a") == "a");
    CHECK(porter2::stem("is") == "is");
    CHECK(porter2::stem("as") == "as");
    CHECK(porter2::stem("ed") == "ed");
    CHECK(porter2::stem("s") == "s");
}

TEST_CASE("stable_stem reaches a fixpoint") {
    // A single Snowball pass is not idempotent (accelerate -> acceler -> accel).
    CHECK(porter2::stem("accelerate") == "acceler");
    CHECK(porter2::stem("acceler") == "accel");
    CHECK(stable_stem("accelerate") == "accel");

    std::ifstream in(test::data_path("snowball_en.tsv"));
    std::string line;
    while (std::getline(in, line)) {
        const std::string word = line.substr(0, line.find('\t'));
        const std::string s = stable_stem(word);
        if (stable_stem(s) != s) FAIL_CHECK("stable_stem not idempotent for " << word);
        CHECK(s.size() <= std::max(word.size(), std::size_t{2}));
    }
}

TEST_CASE("strip_markup golden fixture") {
    const auto cases = nlohmann::json::parse(test::read_text(test::data_path("strip_markup_golden.json")));
    REQUIRE(cases.size() >= 15);
    for (const auto& c : cases) {
        const std::string input = c.at("input"), expected = c.at("expected");
        CAPTURE(input);
        CHECK(strip_markup(input) == expected);
        CHECK(strip_markup(expected) == expected);
    }
    CHECK(strip_markup("<b>crash</b> on save") == "crash on save");
    CHECK(strip_markup("a &amp; b") == "a & b");
    CHECK(strip_markup("no markup here") == "no markup here");
}

TEST_CASE("tokenize golden fixture") {
    const auto cases = nlohmann::json::parse(test::read_text(test::data_path("tokenize_golden.json")));
    for (const auto& c : cases) {
        const std::string input = c.at("input");
        CAPTURE(input);
        CHECK(tokenize(input) == c.at("expected").get<std::vector<std::string>>());
    }
    CHECK(tokenize("Fix NullReferenceException!") == std::vector<std::string>{"fix", "nullreferenceexception"});
    CHECK(tokenize("a 1 22").empty());
    CHECK(tokenize("won't") == std::vector<std::string>{"won"});
}

TEST_CASE("stopword removal") {
    using V = std::vector<std::string>;
    CHECK(remove_stopwords({"the", "crash", "is", "here"}) == V{"crash"});
    CHECK(remove_stopwords({}).empty());
    CHECK(remove_stopwords({"crash", "crash"}) == V{"crash", "crash"});

    const auto& list = StopwordList::builtin();
    CHECK(list.size() > 150);
    CHECK(list.size() < 200);
    CHECK(list.contains("very"));
    CHECK(list.in_stemmed_closure("veri"));
    CHECK_FALSE(list.contains("crash"));

    const auto custom = StopwordList::parse("# comment\nfoo\n  bar  # trailing\n\nfoo\n");
    CHECK(custom.words() == V{"foo", "bar"});
}

TEST_CASE("preprocess") {
    using V = std::vector<std::string>;
    CHECK(preprocess("", "").empty());
    CHECK_FALSE(preprocess("Add feature", "").empty());
    CHECK(preprocess("Please add an option to disable telemetry", "<p>It crashes when running tests</p>") ==
          V{"plea", "add", "option", "disabl", "telemetri", "crash", "run", "test"});
    CHECK(preprocess("Crash in `List<T>.Sort()`",
                     "```csharp\nvar x = new List<int>();\nx.Sort();\n```\nThrows InvalidOperationException") ==
          V{"crash", "list", "sort", "csharp", "var", "new", "list", "sort", "throw", "invalidoperationexcept"});
    // Title and body form one stream.
    CHECK(preprocess("server crashes", "") == preprocess("", "server crashes"));
    CHECK(preprocess("very", "") == V{});
}

TEST_CASE("pipeline properties over random text") {
    Rng rng(2024);
    const auto& stop = StopwordList::builtin();
    for (int trial = 0; trial < 500; ++trial) {
        const std::string title = random_text(rng, uniform_index(rng, 12));
        const std::string body = random_text(rng, uniform_index(rng, 40));
        const TokenStream out = preprocess(title, body);
        CHECK(out == preprocess(title, body));
        for (const auto& t : out) {
            CHECK(t.size() >= 2);
            CHECK_FALSE(std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }));
            CHECK(std::all_of(t.begin(), t.end(), [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }));
            CHECK_FALSE(stop.in_stemmed_closure(t));
        }
        // Idempotent on its own output.
        CHECK(preprocess(join(out), "") == out);
        CHECK(strip_markup(strip_markup(body)) == strip_markup(body));
    }
}
