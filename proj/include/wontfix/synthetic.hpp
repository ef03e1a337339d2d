#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "wontfix/corpus.hpp"
#include "wontfix/random.hpp"

namespace wontfix {

// Words planted in wontfix issues; they echo enhancement requests.
inline constexpr std::array<std::string_view, 5> kSignalWords = {"make", "change", "provide", "allow", "option"};
// Words planted in non-wontfix issues.
inline constexpr std::array<std::string_view, 6> kBugWords = {"crash", "exception", "error", "broken", "fails", "null"};

struct SyntheticOptions {
    std::size_t n_issues = 500;
    double wontfix_fraction = 0.3;
    // Per-word inclusion probabilities of the signal words by class. Every
    // wontfix issue carries at least one signal word.
    double signal_probability = 0.45;
    double leak_probability = 0.0;
    // Bug words in non-wontfix issues. When positive, every non-wontfix issue
    // carries at least one.
    double bug_word_probability = 0.5;
    std::size_t noise_vocabulary = 400;
    // Closing/opening annotations on wontfix issues.
    bool annotate = true;
    std::uint64_t seed = kDefaultSeed;
};

// Deterministic corpus of closed issues with titles, bodies, comments and
// (optionally) taxonomy annotations. Noise words are pronounceable
// pseudo-words that never stem to a signal word, a bug word or a stopword.
LabeledCorpus make_synthetic_corpus(const SyntheticOptions& options = {});

}  // namespace wontfix
