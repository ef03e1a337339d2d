#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wontfix {

enum class TaxonomyKind { opening, closing };

// One motivation for opening (22 values) or closing as wontfix (26 values),
// clustered into five groups per taxonomy.
struct Motivation {
    TaxonomyKind kind;
    std::string group;  // snake_case group id, e.g. "not_a_bug"
    std::string id;     // snake_case motivation id
    std::string name;   // display name
};

// Closing-motivation group ids used by the category comparisons.
namespace closing_group {
inline constexpr std::string_view feature_request = "feature_request_enhancement";
inline constexpr std::string_view change = "change";
inline constexpr std::string_view not_a_bug = "not_a_bug";
inline constexpr std::string_view bug = "bug";
inline constexpr std::string_view other = "other";
}  // namespace closing_group

class Taxonomy {
public:
    // The versioned enumeration shipped in data/taxonomy_v1.tsv.
    static const Taxonomy& builtin();

    // Parses "taxonomy<TAB>group<TAB>id<TAB>name" rows; '#' lines are comments.
    static Taxonomy parse(std::string_view tsv);

    const Motivation* find(TaxonomyKind kind, std::string_view id) const;
    std::span<const Motivation> motivations(TaxonomyKind kind) const;
    // Group ids in first-appearance order.
    std::vector<std::string> groups(TaxonomyKind kind) const;

private:
    std::vector<Motivation> opening_;
    std::vector<Motivation> closing_;
};

std::string_view to_string(TaxonomyKind kind);

}  // namespace wontfix
