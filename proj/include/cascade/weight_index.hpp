#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cascade {

/// Dynamic weighted-sampling index over nodes 0..size-1: append a node,
/// change one node's weight, or draw a node with probability proportional to
/// its weight, each in O(log capacity). Backed by a Fenwick tree of
/// cumulative weights, so the normalizing total is always the full prefix
/// sum. Weights must stay positive for every present node.
class WeightIndex {
public:
    explicit WeightIndex(std::size_t capacity)
        : fenwick_(capacity + 1, 0.0), weights_() {
        weights_.reserve(capacity);
        top_bit_ = 1;
        while (top_bit_ * 2 <= capacity) top_bit_ *= 2;
    }

    std::size_t size() const { return weights_.size(); }

    double weight(std::size_t i) const { return weights_[i]; }

    double total() const { return prefix(weights_.size()); }

    /// Add the next node (index = current size) with weight w > 0.
    void append(double w) {
        if (weights_.size() + 1 >= fenwick_.size())
            throw std::length_error("WeightIndex: capacity exceeded");
        weights_.push_back(0.0);
        update(weights_.size() - 1, w);
    }

    /// Set node i's weight to w > 0.
    void update(std::size_t i, double w) {
        const double delta = w - weights_[i];
        weights_[i] = w;
        for (std::size_t k = i + 1; k < fenwick_.size(); k += k & (~k + 1))
            fenwick_[k] += delta;
    }

    /// Map u in [0, 1) to a node: the smallest i whose cumulative weight
    /// exceeds u * total. Standard Fenwick descent.
    std::size_t sample(double u) const {
        double target = u * total();
        std::size_t pos = 0;
        for (std::size_t bit = top_bit_; bit > 0; bit >>= 1) {
            const std::size_t next = pos + bit;
            if (next < fenwick_.size() && fenwick_[next] <= target) {
                target -= fenwick_[next];
                pos = next;
            }
        }
        // pos can land on size() only through floating-point edge cases.
        return pos < weights_.size() ? pos : weights_.size() - 1;
    }

private:
    double prefix(std::size_t count) const {
        double sum = 0.0;
        for (std::size_t k = count; k > 0; k -= k & (~k + 1)) sum += fenwick_[k];
        return sum;
    }

    std::vector<double> fenwick_; // 1-based
    std::vector<double> weights_;
    std::size_t top_bit_;
};

} // namespace cascade
