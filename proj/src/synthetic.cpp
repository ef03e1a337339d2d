#include "wontfix/synthetic.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "wontfix/taxonomy.hpp"
#include "wontfix/textprep.hpp"

namespace wontfix {
namespace {

bool chance(Rng& rng, double p) { return uniform_unit(rng) < p; }

std::vector<std::string> noise_words(Rng& rng, std::size_t count) {
    static constexpr std::string_view consonants = "bdfgklmnprstvz";
    static constexpr std::string_view vowels = "aeiou";
    std::set<std::string> blocked;
    for (const auto w : kSignalWords) blocked.insert(stable_stem(w));
    for (const auto w : kBugWords) blocked.insert(stable_stem(w));
    std::set<std::string> seen;
    std::vector<std::string> words;
    while (words.size() < count) {
        const std::size_t syllables = 2 + uniform_index(rng, 2);
        std::string w;
        for (std::size_t s = 0; s < syllables; ++s) {
            w.push_back(consonants[uniform_index(rng, consonants.size())]);
            w.push_back(vowels[uniform_index(rng, vowels.size())]);
        }
        if (uniform_index(rng, 3) == 0) w.push_back(consonants[uniform_index(rng, consonants.size())]);
        const std::string stem = stable_stem(w);
        if (blocked.contains(stem) || StopwordList::builtin().in_stemmed_closure(stem) || !seen.insert(w).second)
            continue;
        blocked.insert(stem);
        words.push_back(std::move(w));
    }
    return words;
}

std::string capitalize(std::string w) {
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out.push_back(' ');
        out += words[i];
    }
    return out;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[uniform_index(rng, items.size())];
}

}  // namespace

LabeledCorpus make_synthetic_corpus(const SyntheticOptions& opt) {
    Rng rng(opt.seed);
    const auto noise = noise_words(rng, opt.noise_vocabulary);
    static const std::vector<std::string> fillers = {"the", "when", "this", "it", "is", "we", "should", "with", "for", "a"};
    static const std::vector<std::string> wontfix_labels = {"wontfix", "won't fix", "Status: Won't Fix", "wont-fix"};
    std::vector<std::string> people;
    for (int i = 0; i < 15; ++i) people.push_back("user" + std::to_string(i));

    const auto n_wontfix = static_cast<std::size_t>(static_cast<double>(opt.n_issues) * opt.wontfix_fraction + 0.5);
    std::vector<char> is_wontfix(opt.n_issues, 0);
    std::fill(is_wontfix.begin(), is_wontfix.begin() + static_cast<std::ptrdiff_t>(std::min(n_wontfix, opt.n_issues)), 1);
    seeded_shuffle(std::span<char>(is_wontfix), rng);

    const Taxonomy& tax = Taxonomy::builtin();
    const auto opening = tax.motivations(TaxonomyKind::opening);
    const auto closing = tax.motivations(TaxonomyKind::closing);

    const Timestamp base = parse_timestamp("2015-01-01T00:00:00Z");
    std::vector<IssueRecord> issues;
    std::map<std::string, TaxonomyAnnotation> annotations;
    for (std::size_t i = 0; i < opt.n_issues; ++i) {
        const bool wf = is_wontfix[i] != 0;
        IssueRecord r;
        const std::string repo = "synthetic/repo" + std::to_string(i % 7);
        r.repo = repo;
        r.id = repo + "#" + std::to_string(i + 1);
        r.url = "https://github.com/" + repo + "/issues/" + std::to_string(i + 1);
        r.state = IssueState::closed;

        std::vector<std::string> planted;
        for (const auto w : kSignalWords)
            if (chance(rng, wf ? opt.signal_probability : opt.leak_probability)) planted.emplace_back(w);
        if (wf && planted.empty()) planted.emplace_back(kSignalWords[uniform_index(rng, kSignalWords.size())]);
        if (!wf)
            for (const auto w : kBugWords)
                if (chance(rng, opt.bug_word_probability)) planted.emplace_back(w);
        if (!wf && opt.bug_word_probability > 0.0 && std::none_of(planted.begin(), planted.end(), [](const std::string& w) {
                return std::find(kBugWords.begin(), kBugWords.end(), w) != kBugWords.end();
            }))
            planted.emplace_back(kBugWords[uniform_index(rng, kBugWords.size())]);

        std::vector<std::string> title;
        const std::size_t title_len = 3 + uniform_index(rng, 4);
        for (std::size_t k = 0; k < title_len; ++k) title.push_back(pick(rng, noise));
        if (!planted.empty())
            title.insert(title.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, title.size() + 1)),
                         planted.front());
        title[0] = capitalize(title[0]);
        r.title = join(title);

        std::vector<std::string> body;
        const std::size_t body_len = 15 + uniform_index(rng, 40);
        for (std::size_t k = 0; k < body_len; ++k)
            body.push_back(chance(rng, 0.25) ? pick(rng, fillers) : pick(rng, noise));
        for (std::size_t k = 1; k < planted.size(); ++k)
            body.insert(body.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, body.size() + 1)), planted[k]);
        std::string body_text = join(body);
        if (chance(rng, 0.2)) body_text = "<p>" + body_text + "</p>";
        r.body = chance(rng, 0.05) ? std::string() : body_text;

        if (wf) r.raw_labels.push_back(pick(rng, wontfix_labels));
        else if (chance(rng, 0.6)) r.raw_labels.emplace_back("bug");
        if (chance(rng, 0.3)) r.raw_labels.emplace_back("enhancement");

        r.author = pick(rng, people);
        r.author_role = static_cast<AuthorRole>(uniform_index(rng, 5));
        r.created_at = base + std::chrono::hours(24 * static_cast<long>(i));
        Timestamp t = r.created_at;
        const std::size_t n_comments = uniform_index(rng, 9);
        for (std::size_t k = 0; k < n_comments; ++k) {
            t += std::chrono::minutes(1 + static_cast<long>(uniform_index(rng, 60 * 72)));
            CommentRecord c;
            c.author = chance(rng, 0.3) ? r.author : pick(rng, people);
            c.created_at = t;
            std::vector<std::string> words;
            const std::size_t len = 1 + uniform_index(rng, 30);
            for (std::size_t w = 0; w < len; ++w) words.push_back(pick(rng, noise));
            c.body = join(words);
            r.comments.push_back(std::move(c));
        }
        r.closed_at = t + std::chrono::minutes(1 + static_cast<long>(uniform_index(rng, 60 * 24 * 90)));

        if (wf && opt.annotate) {
            TaxonomyAnnotation a;
            const std::size_t n_open = 1 + uniform_index(rng, 2);
            while (a.opening.size() < n_open) a.opening.insert(opening[uniform_index(rng, opening.size())].id);
            const std::size_t n_close = 1 + uniform_index(rng, 2);
            while (a.closing.size() < n_close) a.closing.insert(closing[uniform_index(rng, closing.size())].id);
            annotations.emplace(r.id, std::move(a));
        }
        issues.push_back(std::move(r));
    }
    return LabeledCorpus::from_issues(std::move(issues), std::move(annotations));
}

}  // namespace wontfix
