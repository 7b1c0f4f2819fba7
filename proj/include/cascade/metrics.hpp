#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cascade/tree.hpp"

namespace cascade {

struct TreeMetrics {
    std::int64_t size = 0;
    double avg_path_length = 0.0; // 0 for single-node trees
    double degree_variance = 0.0;
    double degree_std = 0.0;
};

/// Mean shortest-path hop count over all ordered node pairs of a tree.
/// Each edge e separates the tree into parts of s_e and N - s_e nodes and is
/// crossed by exactly 2 * s_e * (N - s_e) ordered pairs, so the pair-distance
/// sum is 2 * sum_e s_e (N - s_e); one reverse pass over the parent array
/// yields all subtree sizes. Undefined for N = 1 (no pairs).
inline double average_path_length(const Tree& tree) {
    const node_t n = tree.size();
    if (n < 2)
        throw std::invalid_argument("average_path_length: tree has no node pairs");
    std::vector<node_t> sub = tree.subtree_sizes();
    double crossings = 0.0;
    for (node_t i = 1; i < n; ++i) {
        const double s = static_cast<double>(sub[static_cast<std::size_t>(i)]);
        crossings += s * (static_cast<double>(n) - s);
    }
    return 2.0 * crossings / (static_cast<double>(n) * (static_cast<double>(n) - 1.0));
}

/// Population variance (divide by N) of the node degrees.
inline double degree_variance(const Tree& tree) {
    const node_t n = tree.size();
    if (n == 1) return 0.0;
    const std::vector<node_t> deg = tree.degrees();
    const double mean = 2.0 * (static_cast<double>(n) - 1.0) / static_cast<double>(n);
    double acc = 0.0;
    for (node_t d : deg) {
        const double diff = static_cast<double>(d) - mean;
        acc += diff * diff;
    }
    return acc / static_cast<double>(n);
}

inline TreeMetrics compute_tree_metrics(const Tree& tree) {
    TreeMetrics m;
    m.size = tree.size();
    m.avg_path_length = tree.size() >= 2 ? average_path_length(tree) : 0.0;
    m.degree_variance = degree_variance(tree);
    m.degree_std = std::sqrt(m.degree_variance);
    return m;
}

/// One geometric size bin [lo, hi) with per-property ensemble statistics.
/// Standard deviations are population (divide by count) throughout.
struct SizeBin {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    double mid = 0.0; // geometric midpoint sqrt(lo * hi)
    std::int64_t count = 0;
    double mean_apl = 0.0;
    double std_apl = 0.0;
    double mean_dstd = 0.0;
    double std_dstd = 0.0;
};

struct SizeBinnedStats {
    std::int64_t min_size = 100;
    std::vector<SizeBin> bins; // disjoint, ascending, populated bins only
};

/// Group per-tree metrics into size bins [m, 2m), [2m, 4m), ... starting at
/// min_size. Trees below min_size are excluded; empty bins are omitted.
inline SizeBinnedStats bin_tree_metrics(const std::vector<TreeMetrics>& metrics,
                                        std::int64_t min_size = 100) {
    if (metrics.empty())
        throw std::invalid_argument("bin_tree_metrics: empty metrics list");
    if (min_size < 1)
        throw std::invalid_argument("bin_tree_metrics: min_size must be >= 1");

    struct Accum {
        std::int64_t count = 0;
        double sum_apl = 0, sumsq_apl = 0, sum_dstd = 0, sumsq_dstd = 0;
    };
    std::vector<Accum> acc;
    for (const TreeMetrics& m : metrics) {
        if (m.size < min_size) continue;
        std::size_t k = 0;
        std::int64_t lo = min_size;
        while (m.size >= 2 * lo) {
            lo *= 2;
            ++k;
        }
        if (acc.size() <= k) acc.resize(k + 1);
        Accum& a = acc[k];
        ++a.count;
        a.sum_apl += m.avg_path_length;
        a.sumsq_apl += m.avg_path_length * m.avg_path_length;
        a.sum_dstd += m.degree_std;
        a.sumsq_dstd += m.degree_std * m.degree_std;
    }

    SizeBinnedStats out;
    out.min_size = min_size;
    std::int64_t lo = min_size;
    for (const Accum& a : acc) {
        if (a.count > 0) {
            SizeBin bin;
            bin.lo = lo;
            bin.hi = lo * 2;
            bin.mid = std::sqrt(static_cast<double>(bin.lo) * static_cast<double>(bin.hi));
            bin.count = a.count;
            const double c = static_cast<double>(a.count);
            bin.mean_apl = a.sum_apl / c;
            bin.std_apl = std::sqrt(std::max(0.0, a.sumsq_apl / c - bin.mean_apl * bin.mean_apl));
            bin.mean_dstd = a.sum_dstd / c;
            bin.std_dstd = std::sqrt(std::max(0.0, a.sumsq_dstd / c - bin.mean_dstd * bin.mean_dstd));
            out.bins.push_back(bin);
        }
        lo *= 2;
    }
    if (out.bins.empty())
        throw std::invalid_argument(
            "bin_tree_metrics: no tree reaches min_size " + std::to_string(min_size));
    return out;
}

inline void write_size_binned_csv(std::ostream& out, const SizeBinnedStats& stats) {
    const std::streamsize old_precision = out.precision(10);
    out << "bin_lo,bin_hi,bin_mid,count,mean_apl,std_apl,mean_dstd,std_dstd\n";
    for (const SizeBin& b : stats.bins)
        out << b.lo << ',' << b.hi << ',' << b.mid << ',' << b.count << ','
            << b.mean_apl << ',' << b.std_apl << ',' << b.mean_dstd << ','
            << b.std_dstd << '\n';
    out.precision(old_precision);
}

inline SizeBinnedStats read_size_binned_csv(std::istream& in) {
    SizeBinnedStats stats;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("size-binned CSV: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        SizeBin b;
        std::istringstream fields(line);
        if (!(fields >> b.lo >> b.hi >> b.mid >> b.count >> b.mean_apl >>
              b.std_apl >> b.mean_dstd >> b.std_dstd))
            throw std::runtime_error("size-binned CSV: malformed row: " + line);
        stats.bins.push_back(b);
    }
    if (!stats.bins.empty()) stats.min_size = stats.bins.front().lo;
    return stats;
}

} // namespace cascade
