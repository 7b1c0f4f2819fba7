#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cascade/metrics.hpp"
#include "cascade/netgen.hpp"
#include "cascade/network.hpp"
#include "cascade/parallel.hpp"
#include "cascade/random.hpp"
#include "cascade/tree.hpp"

namespace cascade {

/// Diffusion parameters. beta is the mean view probability; per-node view
/// probabilities decay with degree as beta_i = min(1, c * d_i^-alpha) where c
/// is calibrated so the population mean equals beta. gamma is the probability
/// that a viewer forwards.
struct SvfrParams {
    double beta = 0.3;
    double alpha = 0.0;
    double gamma = 0.1;

    void validate() const {
        if (!(beta > 0.0) || beta > 1.0)
            throw std::invalid_argument("svfr: beta must be in (0, 1]");
        if (!(alpha >= 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("svfr: alpha must be finite and >= 0");
        if (!(gamma >= 0.0) || gamma > 1.0)
            throw std::invalid_argument("svfr: gamma must be in [0, 1]");
    }
};

/// Per-node view probabilities derived from the realized degree sequence.
struct ViewProbabilities {
    std::vector<double> beta_i;
    double c = 0.0;                 // calibration constant beta / mean(d^-alpha)
    std::size_t clamped_count = 0;  // nodes where c * d^-alpha exceeded 1
};

inline ViewProbabilities compute_view_probabilities(const DegreeSequence& degrees,
                                                    double beta, double alpha) {
    if (degrees.empty())
        throw std::invalid_argument("view_probabilities: empty degree sequence");
    ViewProbabilities out;
    out.beta_i.resize(degrees.size());
    double mean_pow = 0.0;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        if (degrees[i] < 1 && alpha > 0.0)
            throw std::invalid_argument(
                "view_probabilities: isolated node with alpha > 0");
        out.beta_i[i] = std::pow(static_cast<double>(degrees[i]), -alpha);
        mean_pow += out.beta_i[i];
    }
    mean_pow /= static_cast<double>(degrees.size());
    out.c = beta / mean_pow;
    for (double& b : out.beta_i) {
        b *= out.c;
        if (b > 1.0) {
            b = 1.0;
            ++out.clamped_count;
        }
    }
    return out;
}

inline ViewProbabilities compute_view_probabilities(const Network& net, double beta,
                                                    double alpha) {
    return compute_view_probabilities(net.degrees(), beta, alpha);
}

/// One exposure trial, recorded when an audit log is requested.
struct TrialRecord {
    int step = 0;
    node_t node = 0;
    node_t forwarding_neighbors = 0;
    bool viewed = false;
    bool forwarded = false;
    node_t parent = -1; // network id of the chosen parent, -1 if not viewed
};

/// A single realized cascade. Node 0 of the tree is the creator; tree indices
/// follow arrival order, so every parent precedes its children.
struct Cascade {
    Tree tree;
    std::vector<node_t> network_ids;      // tree index -> network node
    std::vector<std::uint8_t> forwarded;  // creator always counts as a forwarder
    std::vector<std::int32_t> arrival_step;
    int steps = 0;
};

namespace detail {

enum class NodeState : std::uint8_t {
    kSusceptible = 0,
    kFrontier,  // forwarding in the current step
    kQueued,    // will forward next step
    kRemoved,   // failed the view trial, declined to forward, or already forwarded
};

} // namespace detail

/// Synchronous spreading from seed_node. Each step, every susceptible node
/// adjacent to the current frontier gets exactly one view trial regardless of
/// how many forwarding neighbors it has; on failure the node is removed for
/// good (nobody is trialed twice). A viewer attaches to a uniformly chosen
/// forwarding neighbor and then forwards with probability gamma. Frontier
/// nodes retire after their single active step.
inline Cascade simulate_cascade(const Network& net, const ViewProbabilities& probs,
                                double gamma, node_t seed_node, rng::engine& eng,
                                std::vector<TrialRecord>* audit = nullptr) {
    if (seed_node < 0 || seed_node >= net.size())
        throw std::invalid_argument("simulate_cascade: seed node out of range");
    if (probs.beta_i.size() != static_cast<std::size_t>(net.size()))
        throw std::invalid_argument("simulate_cascade: probability/network size mismatch");

    using detail::NodeState;
    std::vector<NodeState> state(static_cast<std::size_t>(net.size()),
                                 NodeState::kSusceptible);
    std::vector<node_t> tree_index(static_cast<std::size_t>(net.size()), -1);

    Cascade cascade;
    std::vector<node_t> parent_of;  // tree parent per tree index
    parent_of.push_back(0);
    cascade.network_ids.push_back(seed_node);
    cascade.forwarded.push_back(1);
    cascade.arrival_step.push_back(0);
    state[static_cast<std::size_t>(seed_node)] = NodeState::kFrontier;
    tree_index[static_cast<std::size_t>(seed_node)] = 0;

    std::vector<node_t> frontier{seed_node};
    std::vector<node_t> next_frontier;
    std::vector<node_t> candidates;
    std::vector<node_t> fwd_neighbors;

    while (!frontier.empty()) {
        ++cascade.steps;
        candidates.clear();
        for (node_t f : frontier) {
            for (node_t nb : net.neighbors(f)) {
                if (state[static_cast<std::size_t>(nb)] == NodeState::kSusceptible) {
                    state[static_cast<std::size_t>(nb)] = NodeState::kQueued;
                    candidates.push_back(nb);
                }
            }
        }
        // Reset the marker: kQueued above only deduplicated the sweep.
        for (node_t c : candidates)
            state[static_cast<std::size_t>(c)] = NodeState::kSusceptible;

        next_frontier.clear();
        for (node_t c : candidates) {
            fwd_neighbors.clear();
            for (node_t nb : net.neighbors(c))
                if (state[static_cast<std::size_t>(nb)] == NodeState::kFrontier)
                    fwd_neighbors.push_back(nb);

            TrialRecord rec;
            rec.step = cascade.steps;
            rec.node = c;
            rec.forwarding_neighbors = static_cast<node_t>(fwd_neighbors.size());

            const bool viewed =
                rng::bernoulli(eng, probs.beta_i[static_cast<std::size_t>(c)]);
            if (viewed) {
                const node_t parent =
                    fwd_neighbors[rng::uniform_below(eng, fwd_neighbors.size())];
                const bool forwards = rng::bernoulli(eng, gamma);

                const node_t idx = static_cast<node_t>(cascade.network_ids.size());
                tree_index[static_cast<std::size_t>(c)] = idx;
                parent_of.push_back(tree_index[static_cast<std::size_t>(parent)]);
                cascade.network_ids.push_back(c);
                cascade.forwarded.push_back(forwards ? 1 : 0);
                cascade.arrival_step.push_back(cascade.steps);
                state[static_cast<std::size_t>(c)] =
                    forwards ? NodeState::kQueued : NodeState::kRemoved;
                if (forwards) next_frontier.push_back(c);

                rec.viewed = true;
                rec.forwarded = forwards;
                rec.parent = parent;
            } else {
                state[static_cast<std::size_t>(c)] = NodeState::kRemoved;
            }
            if (audit) audit->push_back(rec);
        }

        for (node_t f : frontier)
            state[static_cast<std::size_t>(f)] = NodeState::kRemoved;
        for (node_t q : next_frontier)
            state[static_cast<std::size_t>(q)] = NodeState::kFrontier;
        frontier.swap(next_frontier);
    }

    cascade.tree = Tree::from_validated_parent_array(std::move(parent_of));
    return cascade;
}

/// Flat per-cascade record, one row of the simulation output.
struct CascadeSummary {
    std::int32_t network_idx = 0;
    std::int32_t run_idx = 0;
    node_t size = 0;           // everyone who viewed, creator included
    node_t n_forwarders = 0;   // creator included
    node_t d_max_f = 0;        // largest network degree among forwarders
    double avg_path_length = 0.0;
    double degree_std = 0.0;   // of the cascade tree, not the network
};

inline CascadeSummary summarize_cascade(const Cascade& cascade, const Network& net) {
    CascadeSummary s;
    s.size = cascade.tree.size();
    for (std::size_t i = 0; i < cascade.network_ids.size(); ++i) {
        if (!cascade.forwarded[i]) continue;
        ++s.n_forwarders;
        s.d_max_f = std::max(s.d_max_f, net.degree(cascade.network_ids[i]));
    }
    const TreeMetrics m = compute_tree_metrics(cascade.tree);
    s.avg_path_length = m.avg_path_length;
    s.degree_std = m.degree_std;
    return s;
}

/// Everything recorded about one generated network in a batch.
struct NetworkDiag {
    std::int32_t network_idx = 0;
    node_t n = 0;
    std::size_t edge_count = 0;
    double mean_degree = 0.0;
    double erased_fraction = 0.0;
    double c = 0.0;
    std::size_t clamped_count = 0;
};

struct BatchParams {
    NetGenParams net;
    SvfrParams svfr;
    std::int32_t n_networks = 1;
    std::int32_t n_runs = 1;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const {
        net.validate();
        svfr.validate();
        if (n_networks < 1 || n_runs < 1)
            throw std::invalid_argument("batch: counts must be >= 1");
    }
};

struct BatchResult {
    std::vector<CascadeSummary> summaries; // n_networks * n_runs rows
    std::vector<NetworkDiag> diags;        // one per network
};

/// Seeds: network i is built from derive_seed(seed, 0, i, 0) and run r on it
/// from derive_seed(seed, 1, i, r), so the same master seed reproduces the
/// same networks across different (beta, alpha, gamma) settings.
inline std::uint64_t network_seed(std::uint64_t master, std::int32_t network_idx) {
    return rng::derive_seed(master, 0, static_cast<std::uint64_t>(network_idx), 0);
}

inline std::uint64_t run_seed(std::uint64_t master, std::int32_t network_idx,
                              std::int32_t run_idx) {
    return rng::derive_seed(master, 1, static_cast<std::uint64_t>(network_idx),
                            static_cast<std::uint64_t>(run_idx));
}

/// Run n_runs cascades on one prebuilt network. The creator of run r is drawn
/// uniformly from the run's own stream.
inline std::vector<CascadeSummary> run_cascades(const Network& net,
                                                const ViewProbabilities& probs,
                                                double gamma, std::uint64_t master,
                                                std::int32_t network_idx,
                                                std::int32_t n_runs) {
    std::vector<CascadeSummary> out(static_cast<std::size_t>(n_runs));
    for (std::int32_t r = 0; r < n_runs; ++r) {
        rng::engine eng = rng::make_engine(run_seed(master, network_idx, r));
        const node_t seed_node =
            static_cast<node_t>(rng::uniform_below(eng, static_cast<std::uint64_t>(net.size())));
        const Cascade cascade = simulate_cascade(net, probs, gamma, seed_node, eng);
        out[static_cast<std::size_t>(r)] = summarize_cascade(cascade, net);
        out[static_cast<std::size_t>(r)].network_idx = network_idx;
        out[static_cast<std::size_t>(r)].run_idx = r;
    }
    return out;
}

inline NetworkDiag make_network_diag(std::int32_t idx, const ConfigModelResult& built,
                                     const ViewProbabilities& probs) {
    NetworkDiag d;
    d.network_idx = idx;
    d.n = built.network.size();
    d.edge_count = built.network.edge_count();
    d.mean_degree = d.n == 0 ? 0.0
                             : 2.0 * static_cast<double>(d.edge_count) /
                                   static_cast<double>(d.n);
    d.erased_fraction = built.erased_fraction();
    d.c = probs.c;
    d.clamped_count = probs.clamped_count;
    return d;
}

/// Generate networks and run the full grid of cascades. Networks are handed
/// out to worker threads one at a time; each is simulated to completion and
/// then dropped, so memory stays proportional to thread count.
inline BatchResult batch_simulate(const BatchParams& params) {
    params.validate();
    BatchResult result;
    result.summaries.resize(static_cast<std::size_t>(params.n_networks) *
                            static_cast<std::size_t>(params.n_runs));
    result.diags.resize(static_cast<std::size_t>(params.n_networks));

    parallel_for(static_cast<std::size_t>(params.n_networks), params.threads,
                 [&](std::size_t i) {
                     const auto idx = static_cast<std::int32_t>(i);
                     NetGenParams net_params = params.net;
                     net_params.seed = network_seed(params.seed, idx);
                     const ConfigModelResult built = generate_network(net_params);
                     const ViewProbabilities probs = compute_view_probabilities(
                         built.network.degrees(), params.svfr.beta, params.svfr.alpha);
                     result.diags[i] = make_network_diag(idx, built, probs);

                     const std::vector<CascadeSummary> rows =
                         run_cascades(built.network, probs, params.svfr.gamma,
                                      params.seed, idx, params.n_runs);
                     std::copy(rows.begin(), rows.end(),
                               result.summaries.begin() +
                                   i * static_cast<std::size_t>(params.n_runs));
                 });
    return result;
}

/// Same grid, but on caller-supplied networks (reused across parameter
/// settings). diag seeds/erasure are the caller's concern here.
inline BatchResult batch_simulate_on(const std::vector<Network>& nets,
                                     const SvfrParams& svfr, std::int32_t n_runs,
                                     std::uint64_t master, unsigned threads = 1) {
    svfr.validate();
    if (nets.empty() || n_runs < 1)
        throw std::invalid_argument("batch: need at least one network and one run");
    BatchResult result;
    result.summaries.resize(nets.size() * static_cast<std::size_t>(n_runs));
    result.diags.resize(nets.size());

    parallel_for(nets.size(), threads, [&](std::size_t i) {
        const auto idx = static_cast<std::int32_t>(i);
        const ViewProbabilities probs =
            compute_view_probabilities(nets[i].degrees(), svfr.beta, svfr.alpha);
        NetworkDiag d;
        d.network_idx = idx;
        d.n = nets[i].size();
        d.edge_count = nets[i].edge_count();
        d.mean_degree = d.n == 0 ? 0.0
                                 : 2.0 * static_cast<double>(d.edge_count) /
                                       static_cast<double>(d.n);
        d.c = probs.c;
        d.clamped_count = probs.clamped_count;
        result.diags[i] = d;

        const std::vector<CascadeSummary> rows =
            run_cascades(nets[i], probs, svfr.gamma, master, idx, n_runs);
        std::copy(rows.begin(), rows.end(),
                  result.summaries.begin() + i * static_cast<std::size_t>(n_runs));
    });
    return result;
}

} // namespace cascade
