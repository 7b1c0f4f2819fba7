#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cascade {

using node_t = std::int32_t;

/// Recursive tree in arrival order: node 0 is the root and every node's
/// parent has a smaller index. Stored as a parent array of length N with
/// entry 0 fixed to 0. Immutable after construction; safe to share across
/// threads.
class Tree {
public:
    Tree() : parent_(1, 0) {}

    node_t size() const { return static_cast<node_t>(parent_.size()); }

    /// Parent of node i, defined for i >= 1.
    node_t parent(node_t i) const { return parent_[static_cast<std::size_t>(i)]; }

    /// Full parent array (length N, entry 0 is 0 by convention).
    const std::vector<node_t>& parent_array() const { return parent_; }

    /// Build from the parents of nodes 1..N-1 (empty list = root-only tree).
    /// Rejects any entry that is not a previously arrived node.
    static Tree from_parents(std::vector<node_t> parents_of_nonroot) {
        const std::size_t n = parents_of_nonroot.size() + 1;
        std::vector<node_t> parent(n);
        parent[0] = 0;
        for (std::size_t i = 1; i < n; ++i) {
            node_t p = parents_of_nonroot[i - 1];
            if (p < 0 || static_cast<std::size_t>(p) >= i)
                throw std::invalid_argument(
                    "tree_from_parents: parent of node " + std::to_string(i) +
                    " is " + std::to_string(p) + ", must be in [0, " +
                    std::to_string(i - 1) + "]");
            parent[i] = p;
        }
        return Tree(std::move(parent));
    }

    /// Used by generators that maintain the arrival-order invariant
    /// themselves; still validated in debug builds.
    static Tree from_validated_parent_array(std::vector<node_t> parent) {
#ifndef NDEBUG
        if (parent.empty() || parent[0] != 0)
            throw std::logic_error("invalid parent array");
        for (std::size_t i = 1; i < parent.size(); ++i)
            if (parent[i] < 0 || static_cast<std::size_t>(parent[i]) >= i)
                throw std::logic_error("parent array violates arrival order");
#endif
        return Tree(std::move(parent));
    }

    /// Degree of each node: child count, plus one parent link for non-roots.
    /// The degree sum is 2(N-1).
    std::vector<node_t> degrees() const {
        std::vector<node_t> deg(parent_.size(), 0);
        for (std::size_t i = 1; i < parent_.size(); ++i) {
            ++deg[static_cast<std::size_t>(parent_[i])];
            ++deg[i];
        }
        return deg;
    }

    /// Number of nodes in the subtree rooted at each node. Computed in one
    /// reverse pass: children always carry larger indices than their parent.
    std::vector<node_t> subtree_sizes() const {
        std::vector<node_t> sub(parent_.size(), 1);
        for (std::size_t i = parent_.size(); i-- > 1;)
            sub[static_cast<std::size_t>(parent_[i])] += sub[i];
        return sub;
    }

private:
    explicit Tree(std::vector<node_t> parent) : parent_(std::move(parent)) {}

    std::vector<node_t> parent_;
};

inline Tree tree_from_parents(std::vector<node_t> parents_of_nonroot) {
    return Tree::from_parents(std::move(parents_of_nonroot));
}

inline std::vector<node_t> tree_degrees(const Tree& tree) { return tree.degrees(); }

/// Text format: one header line "N", then N-1 lines "child parent".
inline void write_tree(std::ostream& out, const Tree& tree) {
    out << tree.size() << '\n';
    for (node_t i = 1; i < tree.size(); ++i)
        out << i << ' ' << tree.parent(i) << '\n';
}

inline Tree read_tree(std::istream& in) {
    long long n = 0;
    if (!(in >> n) || n < 1)
        throw std::runtime_error("read_tree: bad or missing node count");
    std::vector<node_t> parents(static_cast<std::size_t>(n - 1));
    for (long long i = 1; i < n; ++i) {
        long long child = 0, parent = 0;
        if (!(in >> child >> parent))
            throw std::runtime_error("read_tree: truncated edge list");
        if (child != i)
            throw std::runtime_error("read_tree: expected child " +
                                     std::to_string(i) + ", got " +
                                     std::to_string(child));
        parents[static_cast<std::size_t>(i - 1)] = static_cast<node_t>(parent);
    }
    return Tree::from_parents(std::move(parents));
}

} // namespace cascade
