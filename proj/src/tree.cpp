#include "asmf/tree.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "asmf/error.hpp"

namespace asmf {

void TreeConfig::check() const {
    if (min_split < 1) throw TreeError("min_split must be at least 1");
    if (min_support < 1) throw TreeError("min_support must be at least 1");
    if (max_depth && *max_depth < 1) throw TreeError("max_depth must be at least 1");
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw TreeError("tree has no nodes");
    // Pre-order: every child index is greater than its parent's and each node
    // is referenced exactly once.
    std::vector<int> refs(nodes_.size(), 0);
    for (NodeIndex i = 0; i < nodes_.size(); ++i) {
        const TreeNode& n = nodes_[i];
        if (n.is_leaf() != n.children.empty())
            throw TreeError("node #" + std::to_string(i) + ": leaf/children mismatch");
        for (NodeIndex c : n.children) {
            if (c <= i || c >= nodes_.size()) throw TreeError("node #" + std::to_string(i) + ": bad child index");
            ++refs[c];
        }
    }
    for (NodeIndex i = 1; i < nodes_.size(); ++i)
        if (refs[i] != 1) throw TreeError("node #" + std::to_string(i) + " is not reachable exactly once");
}

std::size_t DecisionTree::leaf_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t DecisionTree::depth() const {
    std::function<std::size_t(NodeIndex)> walk = [&](NodeIndex i) -> std::size_t {
        std::size_t d = 0;
        for (NodeIndex c : nodes_[i].children) d = std::max(d, 1 + walk(c));
        return d;
    };
    return empty() ? 0 : walk(0);
}

ClassIndex majority_class(std::span<const std::size_t> distribution) {
    if (distribution.empty()) return 0;
    return static_cast<ClassIndex>(std::max_element(distribution.begin(), distribution.end()) - distribution.begin());
}

void check_tree(const DecisionTree& tree, const Schema& schema) {
    if (tree.empty()) throw TreeError("tree has no nodes");
    std::vector<bool> used(schema.attribute_count(), false);
    std::function<void(NodeIndex)> walk = [&](NodeIndex i) {
        const TreeNode& n = tree.node(i);
        const std::string where = "node #" + std::to_string(i);
        if (n.distribution.size() != schema.class_arity()) throw TreeError(where + ": distribution size mismatch");
        if (n.predicted >= schema.class_arity()) throw TreeError(where + ": predicted class out of range");
        if (!n.is_default &&
            std::accumulate(n.distribution.begin(), n.distribution.end(), std::size_t{0}) != n.support)
            throw TreeError(where + ": support does not match distribution");
        if (n.is_leaf()) return;
        if (n.is_default) throw TreeError(where + ": default node cannot split");
        const AttributeIndex a = *n.attribute;
        if (a >= schema.attribute_count()) throw TreeError(where + ": attribute out of range");
        if (used[a]) throw TreeError(where + ": attribute " + schema.attributes[a].name + " repeats on its path");
        if (n.children.size() != schema.attributes[a].arity())
            throw TreeError(where + ": expected one child per level of " + schema.attributes[a].name);
        std::size_t child_support = 0;
        used[a] = true;
        for (NodeIndex c : n.children) {
            walk(c);
            child_support += tree.node(c).support;
        }
        used[a] = false;
        if (child_support != n.support) throw TreeError(where + ": children supports do not sum to the node's");
    };
    walk(0);
}

namespace {

class Builder {
public:
    Builder(const Schema& schema, const TreeConfig& config) : schema_(schema), config_(config) {}

    DecisionTree run(std::vector<Record> records) {
        std::vector<AttributeIndex> available(schema_.attribute_count());
        std::iota(available.begin(), available.end(), AttributeIndex{0});
        for (AttributeIndex a : available) check_applicable(schema_, a, config_.criterion);

        // At the root an all-undefined ranking is an error rather than a leaf.
        if (!is_pure(records) && records.size() >= config_.min_split) {
            auto ranked = rank_attributes(schema_, records, available, config_.criterion);
            if (!ranked.front().defined)
                throw TreeError("no attribute has a defined " + std::string(to_string(config_.criterion)) +
                                " score at the root");
        }
        grow(std::move(records), available, 0, 0);
        return DecisionTree(std::move(nodes_));
    }

private:
    std::vector<std::size_t> distribution(std::span<const Record> records) const {
        std::vector<std::size_t> d(schema_.class_arity(), 0);
        for (const Record& r : records) ++d[*r.label];
        return d;
    }

    static bool is_pure(std::span<const Record> records) {
        return std::all_of(records.begin(), records.end(),
                           [&](const Record& r) { return r.label == records.front().label; });
    }

    NodeIndex grow(std::vector<Record> records, std::vector<AttributeIndex> available, std::size_t depth,
                   ClassIndex parent_majority) {
        const NodeIndex self = nodes_.size();
        nodes_.emplace_back();
        TreeNode node;
        node.support = records.size();
        node.distribution = distribution(records);
        if (records.empty()) {
            node.is_default = true;
            node.predicted = parent_majority;
            nodes_[self] = std::move(node);
            return self;
        }
        node.predicted = majority_class(node.distribution);

        const bool stop = is_pure(records) || records.size() < config_.min_split || available.empty() ||
                          (config_.max_depth && depth >= *config_.max_depth);
        std::optional<AttributeIndex> split;
        if (!stop) {
            auto ranked = rank_attributes(schema_, records, available, config_.criterion);
            if (ranked.front().defined) split = ranked.front().attribute_index;
        }
        if (!split) {
            nodes_[self] = std::move(node);
            return self;
        }

        const AttributeIndex a = *split;
        std::vector<std::vector<Record>> parts(schema_.attributes[a].arity());
        for (Record& r : records) parts[*r.values[a]].push_back(std::move(r));
        std::vector<AttributeIndex> rest;
        std::copy_if(available.begin(), available.end(), std::back_inserter(rest),
                     [a](AttributeIndex x) { return x != a; });

        node.attribute = a;
        for (auto& part : parts) node.children.push_back(grow(std::move(part), rest, depth + 1, node.predicted));
        nodes_[self] = std::move(node);
        return self;
    }

    const Schema& schema_;
    const TreeConfig& config_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree build_tree(const Dataset& dataset, const TreeConfig& config) {
    config.check();
    check_schema(dataset.schema);
    if (dataset.empty()) throw TreeError("cannot build a tree from an empty dataset");
    for (const Violation& v : validate(dataset, ValidationMode::training))
        throw DataError("row " + std::to_string(v.row_id) + ": " + v.reason);
    return Builder(dataset.schema, config).run(dataset.records);
}

DecisionTree prune(const DecisionTree& tree, std::size_t min_support) {
    if (min_support < 1) throw TreeError("min_support must be at least 1");
    if (tree.empty()) throw TreeError("cannot prune an empty tree");

    // Rebuild bottom-up into a fresh pre-order vector.
    std::vector<TreeNode> out;
    std::function<NodeIndex(NodeIndex)> visit = [&](NodeIndex i) -> NodeIndex {
        const TreeNode& src = tree.node(i);
        const NodeIndex self = out.size();
        out.push_back(src);
        if (src.is_leaf()) return self;

        std::vector<NodeIndex> kids;
        for (NodeIndex c : src.children) kids.push_back(visit(c));

        auto collapse = [&] {
            out.resize(self + 1);
            TreeNode& leaf = out[self];
            leaf.attribute.reset();
            leaf.children.clear();
            leaf.predicted = majority_class(leaf.distribution);
            return self;
        };
        const bool starved = std::any_of(kids.begin(), kids.end(), [&](NodeIndex k) {
            return !out[k].is_default && out[k].support < min_support;
        });
        if (starved) return collapse();
        const bool uniform = std::all_of(kids.begin(), kids.end(), [&](NodeIndex k) {
            return out[k].is_leaf() && out[k].predicted == out[kids.front()].predicted;
        });
        if (uniform) return collapse();
        out[self].children = std::move(kids);
        return self;
    };
    visit(0);
    return DecisionTree(std::move(out));
}

DecisionTree train(const Dataset& dataset, const TreeConfig& config) {
    return prune(build_tree(dataset, config), config.min_support);
}

}  // namespace asmf
