#include "wontfix/taxonomy.hpp"

#include <algorithm>
#include <stdexcept>

#include "wontfix/embedded_data.hpp"

namespace wontfix {

const Taxonomy& Taxonomy::builtin() {
    static const Taxonomy instance = parse(embedded::taxonomy_v1());
    return instance;
}

Taxonomy Taxonomy::parse(std::string_view tsv) {
    Taxonomy out;
    std::size_t line_no = 0;
    while (!tsv.empty()) {
        const auto eol = tsv.find('\n');
        std::string_view line = tsv.substr(0, eol);
        tsv = eol == std::string_view::npos ? std::string_view{} : tsv.substr(eol + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;

        std::vector<std::string> cols;
        std::size_t start = 0;
        for (;;) {
            const auto tab = line.find('\t', start);
            cols.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
            if (tab == std::string_view::npos) break;
            start = tab + 1;
        }
        if (cols.size() != 4)
            throw std::invalid_argument("taxonomy line " + std::to_string(line_no) + ": expected 4 columns");

        Motivation m;
        if (cols[0] == "opening")
            m.kind = TaxonomyKind::opening;
        else if (cols[0] == "closing")
            m.kind = TaxonomyKind::closing;
        else
            throw std::invalid_argument("taxonomy line " + std::to_string(line_no) + ": unknown taxonomy " + cols[0]);
        m.group = cols[1];
        m.id = cols[2];
        m.name = cols[3];
        auto& bucket = m.kind == TaxonomyKind::opening ? out.opening_ : out.closing_;
        if (std::any_of(bucket.begin(), bucket.end(), [&](const Motivation& x) { return x.id == m.id; }))
            throw std::invalid_argument("taxonomy line " + std::to_string(line_no) + ": duplicate id " + m.id);
        bucket.push_back(std::move(m));
    }
    return out;
}

const Motivation* Taxonomy::find(TaxonomyKind kind, std::string_view id) const {
    const auto& bucket = kind == TaxonomyKind::opening ? opening_ : closing_;
    const auto it = std::find_if(bucket.begin(), bucket.end(), [&](const Motivation& m) { return m.id == id; });
    return it == bucket.end() ? nullptr : &*it;
}

std::span<const Motivation> Taxonomy::motivations(TaxonomyKind kind) const {
    return kind == TaxonomyKind::opening ? std::span<const Motivation>(opening_) : std::span<const Motivation>(closing_);
}

std::vector<std::string> Taxonomy::groups(TaxonomyKind kind) const {
    std::vector<std::string> out;
    for (const auto& m : motivations(kind))
        if (std::find(out.begin(), out.end(), m.group) == out.end()) out.push_back(m.group);
    return out;
}

std::string_view to_string(TaxonomyKind kind) {
    return kind == TaxonomyKind::opening ? "opening" : "closing";
}

}  // namespace wontfix
