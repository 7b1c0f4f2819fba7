#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cascade/metrics.hpp"
#include "cascade/parallel.hpp"
#include "cascade/random.hpp"
#include "cascade/rrt.hpp"
#include "cascade/svfr.hpp"

namespace cascade {

/// Thrown when a fit has too few points to be meaningful (e.g. fewer than two
/// populated histogram bins).
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One logarithmic histogram bin: [lo, hi) with geometric center and count
/// normalized by bin width.
struct LogBin {
    double lo = 0.0;
    double hi = 0.0;
    double center = 0.0;
    std::size_t count = 0;
    double density = 0.0;
};

struct PowerLawFit {
    double lambda = 0.0;       // tail exponent, density ~ x^-lambda
    double x_min = 0.0;        // fit restricted to sizes >= x_min
    double r_squared = 0.0;    // of the log-log linear fit (NaN for MLE)
    int bins_per_decade = 0;   // histogram resolution (0 for MLE)
    std::size_t n_tail = 0;    // samples at or above x_min
    std::size_t n_bins = 0;    // populated bins used in the regression
};

/// Histogram sizes >= x_min into bins with edges x_min * 10^(j / bpd).
/// Empty bins are kept in the output (density 0) but skipped by the fit.
inline std::vector<LogBin> log_binned_histogram(const std::vector<node_t>& sizes,
                                                double x_min, int bins_per_decade) {
    if (!(x_min > 0.0))
        throw std::invalid_argument("log_binned_histogram: x_min must be > 0");
    if (bins_per_decade < 1)
        throw std::invalid_argument("log_binned_histogram: bins_per_decade must be >= 1");

    double max_size = 0.0;
    std::size_t n_tail = 0;
    for (node_t s : sizes) {
        if (static_cast<double>(s) < x_min) continue;
        ++n_tail;
        max_size = std::max(max_size, static_cast<double>(s));
    }
    if (n_tail == 0) return {};

    const double step = 1.0 / static_cast<double>(bins_per_decade);
    const int n_bins = static_cast<int>(std::floor(
                           std::log10(max_size / x_min) / step + 1e-12)) +
                       1;
    std::vector<LogBin> bins(static_cast<std::size_t>(n_bins));
    for (int j = 0; j < n_bins; ++j) {
        bins[static_cast<std::size_t>(j)].lo = x_min * std::pow(10.0, j * step);
        bins[static_cast<std::size_t>(j)].hi = x_min * std::pow(10.0, (j + 1) * step);
        bins[static_cast<std::size_t>(j)].center =
            std::sqrt(bins[static_cast<std::size_t>(j)].lo *
                      bins[static_cast<std::size_t>(j)].hi);
    }
    for (node_t s : sizes) {
        const double x = static_cast<double>(s);
        if (x < x_min) continue;
        int j = static_cast<int>(std::floor(std::log10(x / x_min) / step + 1e-12));
        j = std::clamp(j, 0, n_bins - 1);
        // Float rounding near an edge can land one bin off; nudge back.
        if (x < bins[static_cast<std::size_t>(j)].lo) --j;
        else if (x >= bins[static_cast<std::size_t>(j)].hi && j + 1 < n_bins) ++j;
        ++bins[static_cast<std::size_t>(j)].count;
    }
    for (LogBin& b : bins)
        b.density = static_cast<double>(b.count) / (b.hi - b.lo);
    return bins;
}

/// Least squares through (log10 center, log10 density) of the populated bins;
/// lambda is the negated slope.
inline PowerLawFit fit_powerlaw_bins(const std::vector<LogBin>& bins) {
    std::vector<double> xs, ys;
    for (const LogBin& b : bins) {
        if (b.count == 0) continue;
        xs.push_back(std::log10(b.center));
        ys.push_back(std::log10(b.density));
    }
    if (xs.size() < 2)
        throw InsufficientDataError("powerlaw fit: fewer than 2 populated bins");

    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double ss_tot = syy - sy * sy / n;
    const double ss_res = [&] {
        const double intercept = (sy - slope * sx) / n;
        double acc = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - (slope * xs[i] + intercept);
            acc += r * r;
        }
        return acc;
    }();

    PowerLawFit fit;
    fit.lambda = -slope;
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.n_bins = xs.size();
    return fit;
}

/// Tail exponent of the size distribution: log-binned density histogram of
/// sizes >= x_min under a straight-line fit in log-log space.
inline PowerLawFit fit_powerlaw_tail(const std::vector<node_t>& sizes,
                                     double x_min = 100.0, int bins_per_decade = 10) {
    const std::vector<LogBin> bins = log_binned_histogram(sizes, x_min, bins_per_decade);
    PowerLawFit fit = fit_powerlaw_bins(bins);
    fit.x_min = x_min;
    fit.bins_per_decade = bins_per_decade;
    for (const LogBin& b : bins) fit.n_tail += b.count;
    return fit;
}

/// Discrete maximum-likelihood alternative (Clauset/Shalizi/Newman's
/// continuous approximation for the discrete case).
inline PowerLawFit fit_powerlaw_mle(const std::vector<node_t>& sizes,
                                    double x_min = 100.0) {
    double log_sum = 0.0;
    std::size_t n_tail = 0;
    for (node_t s : sizes) {
        if (static_cast<double>(s) < x_min) continue;
        log_sum += std::log(static_cast<double>(s) / (x_min - 0.5));
        ++n_tail;
    }
    if (n_tail < 2)
        throw InsufficientDataError("powerlaw mle: fewer than 2 tail samples");
    PowerLawFit fit;
    fit.lambda = 1.0 + static_cast<double>(n_tail) / log_sum;
    fit.x_min = x_min;
    fit.r_squared = std::numeric_limits<double>::quiet_NaN();
    fit.n_tail = n_tail;
    return fit;
}

struct GammaEstimate {
    std::vector<double> fractions; // per-cascade forwarder share
    double mean = 0.0;
    double stddev = 0.0; // population
    std::size_t n_used = 0;
};

/// Forward probability from realized cascades: per cascade, forwarders
/// (creator included) over size. min_size restricts to large cascades, where
/// the fraction concentrates around gamma.
inline GammaEstimate estimate_gamma(const std::vector<CascadeSummary>& cascades,
                                    node_t min_size = 1) {
    GammaEstimate est;
    for (const CascadeSummary& c : cascades) {
        if (c.size < min_size || c.size < 1) continue;
        est.fractions.push_back(static_cast<double>(c.n_forwarders) /
                                static_cast<double>(c.size));
    }
    if (est.fractions.empty())
        throw InsufficientDataError("estimate_gamma: no cascades at or above min_size");
    est.n_used = est.fractions.size();
    double sum = 0.0, sumsq = 0.0;
    for (double f : est.fractions) {
        sum += f;
        sumsq += f * f;
    }
    const double n = static_cast<double>(est.n_used);
    est.mean = sum / n;
    est.stddev = std::sqrt(std::max(0.0, sumsq / n - est.mean * est.mean));
    return est;
}

struct ThetaFit {
    double theta_star = 0.0;
    double loss = 0.0;
    std::vector<double> grid;
    std::vector<double> losses; // aligned with grid
};

/// Calibrate theta by matching RRT ensemble curves against observed
/// size-binned structure. For each grid point and observed bin, an ensemble
/// of trees at the bin's representative size is generated and the relative
/// squared error of both structural metrics is accumulated.
inline ThetaFit fit_theta(const std::vector<SizeBin>& observed,
                          const std::vector<double>& theta_grid, int reps_per_point,
                          std::uint64_t seed, unsigned threads = 1) {
    if (observed.size() < 2)
        throw std::invalid_argument("fit_theta: need at least 2 observed bins");
    if (theta_grid.empty())
        throw std::invalid_argument("fit_theta: empty theta grid");
    if (reps_per_point < 1)
        throw std::invalid_argument("fit_theta: reps_per_point must be >= 1");

    // Ensemble means per (theta, bin) pair, computed in parallel.
    const std::size_t n_pairs = theta_grid.size() * observed.size();
    std::vector<double> sim_apl(n_pairs), sim_dstd(n_pairs);
    parallel_for(n_pairs, threads, [&](std::size_t k) {
        const std::size_t t = k / observed.size();
        const std::size_t b = k % observed.size();
        RrtParams params;
        params.n = static_cast<node_t>(std::llround(observed[b].mid));
        params.theta = theta_grid[t];
        params.seed = rng::derive_seed(seed, t, b, 0);
        double apl = 0.0, dstd = 0.0;
        for (int r = 0; r < reps_per_point; ++r) {
            RrtParams rep = params;
            rep.seed = rng::derive_seed(seed, t, b, static_cast<std::uint64_t>(r));
            const TreeMetrics m = compute_tree_metrics(generate_rrt(rep));
            apl += m.avg_path_length;
            dstd += m.degree_std;
        }
        sim_apl[k] = apl / reps_per_point;
        sim_dstd[k] = dstd / reps_per_point;
    });

    ThetaFit fit;
    fit.grid = theta_grid;
    fit.losses.resize(theta_grid.size());
    for (std::size_t t = 0; t < theta_grid.size(); ++t) {
        double loss = 0.0;
        for (std::size_t b = 0; b < observed.size(); ++b) {
            const std::size_t k = t * observed.size() + b;
            const double ra =
                (observed[b].mean_apl - sim_apl[k]) / observed[b].mean_apl;
            const double rd =
                (observed[b].mean_dstd - sim_dstd[k]) / observed[b].mean_dstd;
            loss += ra * ra + rd * rd;
        }
        fit.losses[t] = loss;
        if (t == 0 || loss < fit.loss ||
            (loss == fit.loss && theta_grid[t] < fit.theta_star)) {
            fit.loss = loss;
            fit.theta_star = theta_grid[t];
        }
    }
    return fit;
}

} // namespace cascade
