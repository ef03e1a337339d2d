#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wontfix/classifiers.hpp"
#include "wontfix/features.hpp"

namespace wontfix {

struct TreeNode {
    // -1 for leaves.
    std::int64_t feature = -1;
    double threshold = 0.0;
    std::size_t left = 0;   // value <= threshold
    std::size_t right = 0;  // value > threshold
    std::array<std::size_t, 2> counts{};  // indexed by IssueClass

    bool is_leaf() const { return feature < 0; }
    // Majority class; ties go to non_wontfix.
    IssueClass majority() const;
};

struct TreeOptions {
    double confidence = 0.25;
    std::size_t min_leaf = 2;
    bool prune = true;
};

struct DecisionTreeModel {
    TreeOptions options;
    std::vector<TreeNode> nodes;  // nodes[0] is the root; unreachable nodes never remain

    // Absent terms read as 0. score = wontfix share at the leaf.
    Prediction predict(const SparseVector& v) const;
    std::size_t leaf_for(const SparseVector& v) const;
    std::size_t leaf_count() const;
    std::size_t depth() const;
};

// C4.5-style induction: per feature the information-gain-best midpoint
// threshold, then among features whose gain reaches the mean positive gain
// the one with the highest gain ratio. Pessimistic pruning at `confidence`.
// Throws SingleClassError.
DecisionTreeModel train_j48(const TermDocumentMatrix& matrix, const TreeOptions& options = {});

// Extra error count added by C4.5's pessimistic estimate for a node with
// `n` instances and `e` training errors.
double pessimistic_extra_errors(double n, double e, double confidence);

// Entropy in bits of a two-class count pair.
double entropy_bits(double a, double b);

// One node per line. The root line carries the class counts; each child line
// is "term <= t" or "term > t", indented by "|   " per level, followed by
// ": class (counts)" for leaves.
std::string export_tree(const DecisionTreeModel& model, const Vocabulary& vocab);

// Features ordered by sum of 2^-depth over the internal nodes that test them
// (root depth 0). Ties go to the lower feature index.
std::vector<std::pair<std::string, double>> rank_tree_features(const DecisionTreeModel& model,
                                                               const Vocabulary& vocab);

}  // namespace wontfix
