#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cascade/network.hpp"
#include "cascade/random.hpp"

namespace cascade {

/// Scale-free degree sequence parameters: Pr[D = k] proportional to k^-phi on
/// [d_min, d_max], with the structural cutoff d_max = floor(n^(1/(phi-1)))
/// unless overridden.
struct NetGenParams {
    node_t n = 0;
    double phi = 2.5;
    node_t d_min = 10;
    std::optional<node_t> d_max_override;
    std::uint64_t seed = 0;

    node_t d_max() const {
        if (d_max_override) return *d_max_override;
        return static_cast<node_t>(std::floor(
            std::pow(static_cast<double>(n), 1.0 / (phi - 1.0)) + 1e-9));
    }

    void validate() const {
        if (n < 1) throw std::invalid_argument("netgen: n must be >= 1");
        if (!(phi > 1.0)) throw std::invalid_argument("netgen: phi must be > 1");
        if (d_min < 1) throw std::invalid_argument("netgen: d_min must be >= 1");
        if (d_min > d_max())
            throw std::invalid_argument("netgen: d_min exceeds d_max = " +
                                        std::to_string(d_max()));
    }
};

/// Exact discrete power law on the finite support [d_min, d_max]: weights are
/// summed directly, no continuous approximation.
class PowerLawDegreeDist {
public:
    PowerLawDegreeDist(node_t d_min, node_t d_max, double phi)
        : d_min_(d_min), cumulative_(static_cast<std::size_t>(d_max - d_min) + 1) {
        double acc = 0.0;
        for (node_t k = d_min; k <= d_max; ++k) {
            acc += std::pow(static_cast<double>(k), -phi);
            cumulative_[static_cast<std::size_t>(k - d_min)] = acc;
        }
        for (node_t k = d_min; k <= d_max; ++k) {
            const double p = pmf_unnormalized(k, phi) / acc;
            mean_ += p * static_cast<double>(k);
        }
    }

    double mean() const { return mean_; }

    double pmf(node_t k) const {
        const std::size_t i = static_cast<std::size_t>(k - d_min_);
        const double lo = i == 0 ? 0.0 : cumulative_[i - 1];
        return (cumulative_[i] - lo) / cumulative_.back();
    }

    /// Inverse transform on the exact cumulative weights.
    node_t sample(rng::engine& eng) const {
        const double target = rng::uniform01(eng) * cumulative_.back();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        const std::size_t i = std::min(
            static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
        return d_min_ + static_cast<node_t>(i);
    }

private:
    static double pmf_unnormalized(node_t k, double phi) {
        return std::pow(static_cast<double>(k), -phi);
    }

    node_t d_min_;
    std::vector<double> cumulative_;
    double mean_ = 0.0;
};

/// Draw n degrees independently; if the stub total comes out odd, one
/// uniformly chosen node's degree is bumped by +1 (or -1 when already at
/// d_max) so the sequence is wireable.
inline DegreeSequence sample_powerlaw_degrees(const NetGenParams& params) {
    params.validate();
    const PowerLawDegreeDist dist(params.d_min, params.d_max(), params.phi);
    rng::engine eng = rng::make_engine(params.seed);
    DegreeSequence degrees(static_cast<std::size_t>(params.n));
    std::int64_t sum = 0;
    for (node_t& d : degrees) {
        d = dist.sample(eng);
        sum += d;
    }
    if (sum % 2 != 0) {
        const auto i = static_cast<std::size_t>(
            rng::uniform_below(eng, static_cast<std::uint64_t>(params.n)));
        degrees[i] += degrees[i] < params.d_max() ? 1 : -1;
    }
    return degrees;
}

struct ConfigModelResult {
    Network network;
    std::size_t total_stubs = 0;
    std::size_t erased_stubs = 0; // stubs lost to self-loops and multi-edges

    double erased_fraction() const {
        return total_stubs == 0
                   ? 0.0
                   : static_cast<double>(erased_stubs) / static_cast<double>(total_stubs);
    }
};

/// Uniform stub matching, then erasure of self-loops and duplicate edges.
/// Realized degrees can therefore fall slightly below their targets; the
/// erased-stub count is reported so callers can assert the distortion stays
/// small.
inline ConfigModelResult configuration_model(const DegreeSequence& degrees,
                                             std::uint64_t seed) {
    std::int64_t sum = 0;
    for (node_t d : degrees) {
        if (d < 1)
            throw std::invalid_argument("configuration_model: degrees must be >= 1");
        sum += d;
    }
    if (sum % 2 != 0)
        throw std::invalid_argument("configuration_model: odd degree sum");

    std::vector<node_t> stubs;
    stubs.reserve(static_cast<std::size_t>(sum));
    for (std::size_t i = 0; i < degrees.size(); ++i)
        stubs.insert(stubs.end(), static_cast<std::size_t>(degrees[i]),
                     static_cast<node_t>(i));

    rng::engine eng = rng::make_engine(seed);
    for (std::size_t i = stubs.size(); i > 1; --i)
        std::swap(stubs[i - 1], stubs[rng::uniform_below(eng, i)]);

    std::vector<std::pair<node_t, node_t>> edges;
    edges.reserve(stubs.size() / 2);
    std::size_t erased = 0;
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
        node_t u = stubs[k], v = stubs[k + 1];
        if (u == v) {
            erased += 2;
            continue;
        }
        if (u > v) std::swap(u, v);
        edges.emplace_back(u, v);
    }
    std::sort(edges.begin(), edges.end());
    const auto dup_begin = std::unique(edges.begin(), edges.end());
    erased += 2 * static_cast<std::size_t>(edges.end() - dup_begin);
    edges.erase(dup_begin, edges.end());

    ConfigModelResult result;
    result.total_stubs = stubs.size();
    result.erased_stubs = erased;
    result.network =
        Network::from_simple_edges(static_cast<node_t>(degrees.size()), edges);
    return result;
}

/// Sample a degree sequence and wire it in one call.
inline ConfigModelResult generate_network(const NetGenParams& params) {
    const DegreeSequence degrees = sample_powerlaw_degrees(params);
    return configuration_model(degrees, rng::derive_seed(params.seed, 1));
}

} // namespace cascade
