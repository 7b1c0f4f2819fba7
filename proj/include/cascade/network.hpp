#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cascade/tree.hpp"

namespace cascade {

/// Target degrees for configuration-model wiring. Entries are >= 1; the sum
/// must be even before stubs are matched.
using DegreeSequence = std::vector<node_t>;

/// Undirected simple graph in compressed adjacency form: per-node sorted
/// neighbor ranges indexed through an offset array. Immutable after
/// construction and safe to share across concurrent readers.
class Network {
public:
    Network() : offsets_(1, 0) {}

    node_t size() const { return static_cast<node_t>(offsets_.size() - 1); }

    std::size_t edge_count() const { return neighbors_.size() / 2; }

    node_t degree(node_t i) const {
        return static_cast<node_t>(offsets_[static_cast<std::size_t>(i) + 1] -
                                   offsets_[static_cast<std::size_t>(i)]);
    }

    std::span<const node_t> neighbors(node_t i) const {
        const std::size_t lo = offsets_[static_cast<std::size_t>(i)];
        const std::size_t hi = offsets_[static_cast<std::size_t>(i) + 1];
        return {neighbors_.data() + lo, hi - lo};
    }

    std::vector<node_t> degrees() const {
        std::vector<node_t> d(static_cast<std::size_t>(size()));
        for (node_t i = 0; i < size(); ++i) d[static_cast<std::size_t>(i)] = degree(i);
        return d;
    }

    /// Validating constructor: rejects out-of-range endpoints, self-loops and
    /// duplicate edges. Raw multigraph simplification belongs to the
    /// configuration-model builder, not here.
    static Network from_edges(node_t n,
                              const std::vector<std::pair<node_t, node_t>>& edges) {
        if (n < 1) throw std::invalid_argument("network: node count must be >= 1");
        for (const auto& [u, v] : edges) {
            if (u < 0 || u >= n || v < 0 || v >= n)
                throw std::invalid_argument("network: endpoint out of range: (" +
                                            std::to_string(u) + ", " +
                                            std::to_string(v) + ")");
            if (u == v)
                throw std::invalid_argument("network: self-loop at node " +
                                            std::to_string(u));
        }
        Network net = build_unchecked(n, edges);
        for (node_t i = 0; i < n; ++i) {
            auto adj = net.neighbors(i);
            for (std::size_t k = 1; k < adj.size(); ++k)
                if (adj[k] == adj[k - 1])
                    throw std::invalid_argument(
                        "network: duplicate edge (" + std::to_string(i) + ", " +
                        std::to_string(adj[k]) + ")");
        }
        return net;
    }

    /// Fast path for callers that already guarantee a simple edge set.
    static Network from_simple_edges(node_t n,
                                     const std::vector<std::pair<node_t, node_t>>& edges) {
        return build_unchecked(n, edges);
    }

private:
    static Network build_unchecked(node_t n,
                                   const std::vector<std::pair<node_t, node_t>>& edges) {
        Network net;
        net.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
        for (const auto& [u, v] : edges) {
            ++net.offsets_[static_cast<std::size_t>(u) + 1];
            ++net.offsets_[static_cast<std::size_t>(v) + 1];
        }
        for (std::size_t i = 1; i < net.offsets_.size(); ++i)
            net.offsets_[i] += net.offsets_[i - 1];
        net.neighbors_.resize(edges.size() * 2);
        std::vector<std::size_t> cursor(net.offsets_.begin(), net.offsets_.end() - 1);
        for (const auto& [u, v] : edges) {
            net.neighbors_[cursor[static_cast<std::size_t>(u)]++] = v;
            net.neighbors_[cursor[static_cast<std::size_t>(v)]++] = u;
        }
        for (node_t i = 0; i < n; ++i) {
            auto lo = net.offsets_[static_cast<std::size_t>(i)];
            auto hi = net.offsets_[static_cast<std::size_t>(i) + 1];
            std::sort(net.neighbors_.begin() + static_cast<std::ptrdiff_t>(lo),
                      net.neighbors_.begin() + static_cast<std::ptrdiff_t>(hi));
        }
        return net;
    }

    std::vector<std::size_t> offsets_;
    std::vector<node_t> neighbors_;
};

inline Network network_from_edges(node_t n,
                                  const std::vector<std::pair<node_t, node_t>>& edges) {
    return Network::from_edges(n, edges);
}

/// Text format: one "u v" pair per line with u < v, sorted lexicographically.
/// Node count on load is max endpoint + 1.
inline void write_network(std::ostream& out, const Network& net) {
    for (node_t u = 0; u < net.size(); ++u)
        for (node_t v : net.neighbors(u))
            if (u < v) out << u << ' ' << v << '\n';
}

inline Network read_network(std::istream& in) {
    std::vector<std::pair<node_t, node_t>> edges;
    long long u = 0, v = 0;
    node_t n = 0;
    while (in >> u >> v) {
        if (u < 0 || v < 0) throw std::runtime_error("read_network: negative node id");
        edges.emplace_back(static_cast<node_t>(u), static_cast<node_t>(v));
        n = std::max({n, static_cast<node_t>(u + 1), static_cast<node_t>(v + 1)});
    }
    if (edges.empty()) throw std::runtime_error("read_network: no edges");
    return Network::from_edges(n, edges);
}

} // namespace cascade
