#include "wontfix/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace wontfix {

IssueClass TreeNode::majority() const {
    return counts[0] > counts[1] ? IssueClass::wontfix : IssueClass::non_wontfix;
}

double entropy_bits(double a, double b) {
    const double n = a + b;
    if (n <= 0.0) return 0.0;
    double h = 0.0;
    for (const double c : {a, b})
        if (c > 0.0) h -= (c / n) * std::log2(c / n);
    return h;
}

double pessimistic_extra_errors(double n, double e, double confidence) {
    if (confidence > 0.5) throw std::invalid_argument("pruning confidence must not exceed 0.5");
    if (e < 1.0) {
        const double base = n * (1.0 - std::pow(confidence, 1.0 / n));
        if (e == 0.0) return base;
        return base + e * (pessimistic_extra_errors(n, 1.0, confidence) - base);
    }
    if (e + 0.5 >= n) return std::max(n - e, 0.0);
    const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - confidence);
    const double f = (e + 0.5) / n;
    const double r = (f + (z * z) / (2.0 * n) + z * std::sqrt(f / n - f * f / n + (z * z) / (4.0 * n * n))) /
                     (1.0 + (z * z) / n);
    return r * n - e;
}

namespace {

struct ValueEntry {
    double value;
    std::uint32_t doc;
};

struct Candidate {
    bool valid = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
    double gain_ratio = 0.0;
};

class Builder {
public:
    Builder(const TermDocumentMatrix& m, const TreeOptions& opt)
        : m_(m), opt_(opt), by_feature_(m.n_terms()), member_(m.n_docs(), 0) {
        for (std::size_t d = 0; d < m.n_docs(); ++d)
            for (const auto& e : m.rows[d]) by_feature_[e.index].push_back({e.weight, static_cast<std::uint32_t>(d)});
        for (auto& list : by_feature_)
            std::sort(list.begin(), list.end(), [](const ValueEntry& a, const ValueEntry& b) {
                return a.value < b.value || (a.value == b.value && a.doc < b.doc);
            });
    }

    std::vector<TreeNode> build() {
        std::vector<std::uint32_t> all(m_.n_docs());
        for (std::size_t d = 0; d < all.size(); ++d) all[d] = static_cast<std::uint32_t>(d);
        grow(all);
        return std::move(nodes_);
    }

private:
    std::array<std::size_t, 2> count(const std::vector<std::uint32_t>& docs) const {
        std::array<std::size_t, 2> c{};
        for (const auto d : docs) ++c[static_cast<int>(m_.labels[d])];
        return c;
    }

    // Best information-gain threshold for one feature over the current node.
    Candidate best_threshold(std::size_t f, const std::array<std::size_t, 2>& node_counts, double node_entropy) {
        Candidate best;
        const auto& list = by_feature_[f];
        // Nonzero values of this feature inside the node, ascending.
        scratch_.clear();
        for (const auto& e : list)
            if (member_[e.doc]) scratch_.push_back(e);
        if (scratch_.empty()) return best;

        const double n = static_cast<double>(node_counts[0] + node_counts[1]);
        std::array<std::size_t, 2> nonzero{};
        for (const auto& e : scratch_) ++nonzero[static_cast<int>(m_.labels[e.doc])];
        // Left side starts with every instance whose value is 0.
        std::array<std::size_t, 2> left{node_counts[0] - nonzero[0], node_counts[1] - nonzero[1]};
        double prev = 0.0;
        std::size_t k = 0;
        while (k <= scratch_.size()) {
            if (k < scratch_.size() && scratch_[k].value == prev) {
                ++left[static_cast<int>(m_.labels[scratch_[k].doc])];
                ++k;
                continue;
            }
            if (k == scratch_.size()) break;
            const double next = scratch_[k].value;
            const std::size_t n_left = left[0] + left[1];
            const std::size_t n_right = node_counts[0] + node_counts[1] - n_left;
            const double mid = prev + (next - prev) / 2.0;
            if (n_left >= opt_.min_leaf && n_right >= opt_.min_leaf && prev < mid && mid < next) {
                const std::array<std::size_t, 2> right{node_counts[0] - left[0], node_counts[1] - left[1]};
                const double pl = static_cast<double>(n_left) / n, pr = static_cast<double>(n_right) / n;
                const double gain = node_entropy - pl * entropy_bits(static_cast<double>(left[0]), static_cast<double>(left[1])) -
                                    pr * entropy_bits(static_cast<double>(right[0]), static_cast<double>(right[1]));
                if (!best.valid || gain > best.gain) {
                    const double split_info = entropy_bits(static_cast<double>(n_left), static_cast<double>(n_right));
                    best = {true, f, mid, gain, split_info > 0.0 ? gain / split_info : 0.0};
                }
            }
            prev = next;
        }
        return best;
    }

    std::size_t grow(const std::vector<std::uint32_t>& docs) {
        const std::size_t id = nodes_.size();
        nodes_.emplace_back();
        nodes_[id].counts = count(docs);
        const auto counts = nodes_[id].counts;
        if (counts[0] == 0 || counts[1] == 0 || docs.size() < 2 * opt_.min_leaf) return id;

        for (const auto d : docs) member_[d] = 1;
        const double h = entropy_bits(static_cast<double>(counts[0]), static_cast<double>(counts[1]));
        std::vector<Candidate> candidates;
        for (std::size_t f = 0; f < by_feature_.size(); ++f) {
            Candidate c = best_threshold(f, counts, h);
            if (c.valid && c.gain > 0.0) candidates.push_back(c);
        }
        for (const auto d : docs) member_[d] = 0;
        if (candidates.empty()) return id;

        double mean_gain = 0.0;
        for (const auto& c : candidates) mean_gain += c.gain;
        mean_gain /= static_cast<double>(candidates.size());
        const Candidate* chosen = nullptr;
        for (const auto& c : candidates) {
            if (c.gain < mean_gain - 1e-12) continue;
            if (!chosen || c.gain_ratio > chosen->gain_ratio) chosen = &c;
        }
        const std::size_t feature = chosen->feature;
        const double threshold = chosen->threshold;

        std::vector<std::uint32_t> left, right;
        for (const auto d : docs) {
            double value = 0.0;
            for (const auto& e : m_.rows[d])
                if (e.index == feature) value = e.weight;
            (value <= threshold ? left : right).push_back(d);
        }
        nodes_[id].feature = static_cast<std::int64_t>(feature);
        nodes_[id].threshold = threshold;
        const std::size_t l = grow(left);
        const std::size_t r = grow(right);
        nodes_[id].left = l;
        nodes_[id].right = r;
        return id;
    }

    const TermDocumentMatrix& m_;
    TreeOptions opt_;
    std::vector<std::vector<ValueEntry>> by_feature_;
    std::vector<char> member_;
    std::vector<ValueEntry> scratch_;
    std::vector<TreeNode> nodes_;
};

double leaf_estimate(const TreeNode& node, double confidence) {
    const double n = static_cast<double>(node.counts[0] + node.counts[1]);
    const double errors = static_cast<double>(std::min(node.counts[0], node.counts[1]));
    return errors + pessimistic_extra_errors(n, errors, confidence);
}

// Returns the pessimistic error estimate of the (possibly collapsed) subtree.
double prune(std::vector<TreeNode>& nodes, std::size_t id, double confidence) {
    if (nodes[id].is_leaf()) return leaf_estimate(nodes[id], confidence);
    const double subtree =
        prune(nodes, nodes[id].left, confidence) + prune(nodes, nodes[id].right, confidence);
    const double as_leaf = leaf_estimate(nodes[id], confidence);
    if (as_leaf <= subtree + 1e-12) {
        nodes[id].feature = -1;
        nodes[id].threshold = 0.0;
        nodes[id].left = nodes[id].right = 0;
        return as_leaf;
    }
    return subtree;
}

// Drops nodes cut off by pruning, keeping preorder numbering.
std::vector<TreeNode> compact(const std::vector<TreeNode>& nodes) {
    std::vector<TreeNode> out;
    auto copy = [&](auto&& self, std::size_t id) -> std::size_t {
        const std::size_t at = out.size();
        out.push_back(nodes[id]);
        if (!nodes[id].is_leaf()) {
            const std::size_t l = self(self, nodes[id].left);
            const std::size_t r = self(self, nodes[id].right);
            out[at].left = l;
            out[at].right = r;
        }
        return at;
    };
    copy(copy, 0);
    return out;
}

double feature_value(const SparseVector& v, std::size_t feature) {
    const auto it = std::lower_bound(v.begin(), v.end(), feature,
                                     [](const SparseEntry& e, std::size_t f) { return e.index < f; });
    return it != v.end() && it->index == feature ? it->weight : 0.0;
}

}  // namespace

std::size_t DecisionTreeModel::leaf_for(const SparseVector& v) const {
    if (nodes.empty()) throw std::logic_error("empty decision tree");
    std::size_t id = 0;
    while (!nodes[id].is_leaf()) {
        const double value = feature_value(v, static_cast<std::size_t>(nodes[id].feature));
        id = value <= nodes[id].threshold ? nodes[id].left : nodes[id].right;
    }
    return id;
}

Prediction DecisionTreeModel::predict(const SparseVector& v) const {
    const TreeNode& leaf = nodes[leaf_for(v)];
    const double total = static_cast<double>(leaf.counts[0] + leaf.counts[1]);
    return {leaf.majority(), total > 0.0 ? static_cast<double>(leaf.counts[0]) / total : 0.0};
}

std::size_t DecisionTreeModel::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t DecisionTreeModel::depth() const {
    auto walk = [&](auto&& self, std::size_t id) -> std::size_t {
        if (nodes[id].is_leaf()) return 0;
        return 1 + std::max(self(self, nodes[id].left), self(self, nodes[id].right));
    };
    return nodes.empty() ? 0 : walk(walk, 0);
}

DecisionTreeModel train_j48(const TermDocumentMatrix& matrix, const TreeOptions& options) {
    if (options.min_leaf < 1) throw std::invalid_argument("min_leaf must be at least 1");
    if (!(options.confidence > 0.0 && options.confidence <= 0.5))
        throw std::invalid_argument("pruning confidence must lie in (0, 0.5]");
    require_both_classes(matrix.labels);
    DecisionTreeModel model;
    model.options = options;
    model.nodes = Builder(matrix, options).build();
    if (options.prune) {
        prune(model.nodes, 0, options.confidence);
        model.nodes = compact(model.nodes);
    }
    return model;
}

// --- export -----------------------------------------------------------------

namespace {

std::string counts_text(const TreeNode& n) {
    return "(wontfix=" + std::to_string(n.counts[0]) + ", non_wontfix=" + std::to_string(n.counts[1]) + ")";
}

std::string threshold_text(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", t);
    return buf;
}

void export_children(const DecisionTreeModel& model, const Vocabulary& vocab, std::size_t id, std::size_t depth,
                     std::ostringstream& out) {
    const TreeNode& node = model.nodes[id];
    const std::string& term = vocab.term(static_cast<std::size_t>(node.feature));
    std::string indent;
    for (std::size_t i = 0; i < depth; ++i) indent += "|   ";
    for (const bool left : {true, false}) {
        const std::size_t child = left ? node.left : node.right;
        const TreeNode& c = model.nodes[child];
        out << indent << term << (left ? " <= " : " > ") << threshold_text(node.threshold);
        if (c.is_leaf()) {
            out << ": " << to_string(c.majority()) << ' ' << counts_text(c) << '\n';
        } else {
            out << ' ' << counts_text(c) << '\n';
            export_children(model, vocab, child, depth + 1, out);
        }
    }
}

}  // namespace

std::string export_tree(const DecisionTreeModel& model, const Vocabulary& vocab) {
    std::ostringstream out;
    const TreeNode& root = model.nodes.at(0);
    if (root.is_leaf()) {
        out << "root: " << to_string(root.majority()) << ' ' << counts_text(root) << '\n';
        return out.str();
    }
    out << "root " << counts_text(root) << '\n';
    export_children(model, vocab, 0, 0, out);
    return out.str();
}

std::vector<std::pair<std::string, double>> rank_tree_features(const DecisionTreeModel& model, const Vocabulary& vocab) {
    std::map<std::size_t, double> usage;
    auto walk = [&](auto&& self, std::size_t id, int depth) -> void {
        const TreeNode& n = model.nodes[id];
        if (n.is_leaf()) return;
        usage[static_cast<std::size_t>(n.feature)] += std::ldexp(1.0, -depth);
        self(self, n.left, depth + 1);
        self(self, n.right, depth + 1);
    };
    if (!model.nodes.empty()) walk(walk, 0, 0);
    std::vector<std::pair<std::size_t, double>> ranked(usage.begin(), usage.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [f, score] : ranked) out.emplace_back(vocab.term(f), score);
    return out;
}

}  // namespace wontfix
