#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace wontfix {

// Ordered lowercase stemmed terms of one document.
using TokenStream = std::vector<std::string>;

class StopwordList {
public:
    // The frozen list in data/stopwords_en.txt.
    static const StopwordList& builtin();

    // One lowercase word per line; '#' starts a comment; blank lines ignored.
    static StopwordList parse(std::string_view text);

    bool contains(std::string_view word) const;

    // True when `term` is a listed word or the stable stem of one.
    bool in_stemmed_closure(std::string_view term) const;

    const std::vector<std::string>& words() const { return words_; }
    std::size_t size() const { return words_.size(); }

private:
    std::vector<std::string> words_;
    std::unordered_set<std::string> set_;
    std::unordered_set<std::string> closure_;
};

// Removes tags and decodes &amp; &lt; &gt; &quot; &#39;. A tag starts with '<'
// followed by a letter, '/', '!' or '?' and ends at the next '>' on the same
// line; any other '<' is literal. Block-level tags become a space so adjacent
// words stay apart. Decoding and stripping repeat until nothing changes, which
// makes the function idempotent.
std::string strip_markup(std::string_view text);

// Lowercases ASCII and splits on every character that is not an ASCII letter
// or digit. Tokens shorter than 2 characters and all-digit tokens are dropped.
std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordList& stopwords = StopwordList::builtin());

// Snowball English stem of each token.
std::vector<std::string> stem(std::vector<std::string> tokens);

// Applies the Snowball stemmer until the term stops changing. A single pass
// is not idempotent for about 4% of English words (accelerate -> acceler ->
// accel), so the pipeline uses the stable form.
std::string stable_stem(std::string_view word);

// strip_markup, tokenize, remove_stopwords and stable stemming over
// "title body". Stems that fall into the stopword closure, are shorter than 2
// characters or are all digits are dropped. preprocess applied to the joined
// output reproduces the output.
TokenStream preprocess(std::string_view title, std::string_view body,
                       const StopwordList& stopwords = StopwordList::builtin());

}  // namespace wontfix
