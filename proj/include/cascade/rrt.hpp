#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cascade/parallel.hpp"
#include "cascade/random.hpp"
#include "cascade/tree.hpp"
#include "cascade/weight_index.hpp"

namespace cascade {

/// Random recursive tree T(n, theta): each new node attaches to an existing
/// node chosen with probability proportional to degree^theta. theta = 0 is
/// the uniform recursive tree, theta = 1 the scale-free tree; large theta
/// approaches a star.
struct RrtParams {
    node_t n = 1;
    double theta = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 1) throw std::invalid_argument("rrt: n must be >= 1");
        if (!std::isfinite(theta) || theta < 0.0)
            throw std::invalid_argument("rrt: theta must be finite and >= 0");
    }
};

/// Attachment kernel over the existing nodes: p_i = d_i^theta / sum_j d_j^theta.
inline std::vector<double> attachment_distribution(const Tree& tree, double theta) {
    if (!std::isfinite(theta) || theta < 0.0)
        throw std::invalid_argument("attachment_distribution: bad theta");
    const std::vector<node_t> deg = tree.degrees();
    std::vector<double> p(deg.size());
    double total = 0.0;
    for (std::size_t i = 0; i < deg.size(); ++i) {
        p[i] = std::pow(static_cast<double>(deg[i]), theta);
        total += p[i];
    }
    for (double& v : p) v /= total;
    return p;
}

/// Grow one tree. The first attachment (node 1 -> node 0) is forced, which
/// sidesteps the degree-0 root; from then on both endpoints of every step
/// carry weight d^theta in the sampling index and only the chosen target's
/// weight changes. Deterministic given the seed.
inline Tree generate_rrt(const RrtParams& params) {
    params.validate();
    const node_t n = params.n;
    std::vector<node_t> parent(static_cast<std::size_t>(n), 0);
    if (n > 2) {
        rng::engine eng = rng::make_engine(params.seed);
        std::vector<node_t> degree(static_cast<std::size_t>(n), 0);
        degree[0] = degree[1] = 1;
        WeightIndex weights(static_cast<std::size_t>(n));
        weights.append(1.0); // node 0, degree 1
        weights.append(1.0); // node 1, degree 1
        for (node_t t = 2; t < n; ++t) {
            const auto target =
                static_cast<node_t>(weights.sample(rng::uniform01(eng)));
            parent[static_cast<std::size_t>(t)] = target;
            ++degree[static_cast<std::size_t>(target)];
            weights.update(static_cast<std::size_t>(target),
                           std::pow(static_cast<double>(
                                        degree[static_cast<std::size_t>(target)]),
                                    params.theta));
            degree[static_cast<std::size_t>(t)] = 1;
            weights.append(1.0);
        }
    }
    return Tree::from_validated_parent_array(std::move(parent));
}

/// Independent replications; replication r runs on the sub-seed
/// derive_seed(params.seed, r), so results are reproducible and identical
/// regardless of the thread schedule.
inline std::vector<Tree> generate_rrt_ensemble(const RrtParams& params,
                                               std::size_t replications,
                                               unsigned threads = 1) {
    params.validate();
    if (replications < 1)
        throw std::invalid_argument("rrt ensemble: replications must be >= 1");
    std::vector<Tree> trees(replications);
    parallel_for(replications, threads, [&](std::size_t r) {
        RrtParams sub = params;
        sub.seed = rng::derive_seed(params.seed, r);
        trees[r] = generate_rrt(sub);
    });
    return trees;
}

} // namespace cascade
