#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cascade/fit.hpp"
#include "cascade/io.hpp"
#include "cascade/metrics.hpp"
#include "cascade/parallel.hpp"
#include "cascade/random.hpp"
#include "cascade/rrt.hpp"
#include "cascade/svfr.hpp"

namespace cascade {

/// Full sweep description: the (N, beta, alpha) grid plus everything held
/// fixed. Desk-scale defaults; the full-scale protocol is reached by raising
/// n_values, networks_per_point, and runs_per_network.
struct SweepConfig {
    std::vector<node_t> n_values{10000};
    std::vector<double> beta_values{0.3};
    std::vector<double> alpha_values{0.8};
    double gamma = 0.091;
    double phi = 2.5;
    node_t d_min = 10;
    std::int32_t networks_per_point = 20;
    std::int32_t runs_per_network = 50;
    double x_min = 100.0;
    int bins_per_decade = 10;
    std::vector<double> rrt_theta_values{0.0, 1.0, 1.2, 1.6}; // tree-model curves
    std::vector<node_t> rrt_sizes{100, 200, 400, 800, 1600, 3200};
    std::vector<double> structure_theta_values{1.2, 1.6}; // bounding curves
    std::int32_t rrt_reps = 200;
    std::uint64_t seed = 1;
    unsigned threads = 0; // 0 = all hardware threads

    void validate() const {
        if (n_values.empty() || beta_values.empty() || alpha_values.empty())
            throw std::invalid_argument("sweep: value lists must be nonempty");
        if (networks_per_point < 1 || runs_per_network < 1 || rrt_reps < 1)
            throw std::invalid_argument("sweep: counts must be >= 1");
        for (node_t n : n_values)
            if (n < 2) throw std::invalid_argument("sweep: n must be >= 2");
    }

    std::size_t point_count() const {
        return n_values.size() * beta_values.size() * alpha_values.size();
    }
};

inline void to_json(nlohmann::json& j, const SweepConfig& c) {
    j = nlohmann::json{{"n_values", c.n_values},
                       {"beta_values", c.beta_values},
                       {"alpha_values", c.alpha_values},
                       {"gamma", c.gamma},
                       {"phi", c.phi},
                       {"d_min", c.d_min},
                       {"networks_per_point", c.networks_per_point},
                       {"runs_per_network", c.runs_per_network},
                       {"x_min", c.x_min},
                       {"bins_per_decade", c.bins_per_decade},
                       {"rrt_theta_values", c.rrt_theta_values},
                       {"rrt_sizes", c.rrt_sizes},
                       {"structure_theta_values", c.structure_theta_values},
                       {"rrt_reps", c.rrt_reps},
                       {"seed", c.seed},
                       {"threads", c.threads}};
}

inline void from_json(const nlohmann::json& j, SweepConfig& c) {
    const SweepConfig defaults;
    c.n_values = j.value("n_values", defaults.n_values);
    c.beta_values = j.value("beta_values", defaults.beta_values);
    c.alpha_values = j.value("alpha_values", defaults.alpha_values);
    c.gamma = j.value("gamma", defaults.gamma);
    c.phi = j.value("phi", defaults.phi);
    c.d_min = j.value("d_min", defaults.d_min);
    c.networks_per_point = j.value("networks_per_point", defaults.networks_per_point);
    c.runs_per_network = j.value("runs_per_network", defaults.runs_per_network);
    c.x_min = j.value("x_min", defaults.x_min);
    c.bins_per_decade = j.value("bins_per_decade", defaults.bins_per_decade);
    c.rrt_theta_values = j.value("rrt_theta_values", defaults.rrt_theta_values);
    c.rrt_sizes = j.value("rrt_sizes", defaults.rrt_sizes);
    c.structure_theta_values =
        j.value("structure_theta_values", defaults.structure_theta_values);
    c.rrt_reps = j.value("rrt_reps", defaults.rrt_reps);
    c.seed = j.value("seed", defaults.seed);
    c.threads = j.value("threads", defaults.threads);
}

/// Result of one (N, beta, alpha) grid point. Reproducible from the config
/// and point_index alone; wall_seconds is the only non-deterministic field.
struct RunRecord {
    std::int32_t point_index = 0;
    node_t n = 0;
    double beta = 0.0;
    double alpha = 0.0;
    double gamma = 0.0;
    double phi = 0.0;
    node_t d_min = 0;
    std::int32_t networks = 0;
    std::int32_t runs = 0;
    std::uint64_t point_seed = 0;
    std::string rng_algorithm = rng::kAlgorithm;
    std::size_t n_cascades = 0;
    double mean_size = 0.0;
    node_t max_size = 0;
    double x_min = 0.0;
    int bins_per_decade = 0;
    std::size_t n_tail = 0;
    bool sufficient = false; // tail had >= 2 populated bins
    double lambda = 0.0;
    double r_squared = 0.0;
    std::size_t n_bins = 0;
    double wall_seconds = 0.0;
};

inline void to_json(nlohmann::json& j, const RunRecord& r) {
    j = nlohmann::json{{"point_index", r.point_index},
                       {"n", r.n},
                       {"beta", r.beta},
                       {"alpha", r.alpha},
                       {"gamma", r.gamma},
                       {"phi", r.phi},
                       {"d_min", r.d_min},
                       {"networks", r.networks},
                       {"runs", r.runs},
                       {"point_seed", r.point_seed},
                       {"rng_algorithm", r.rng_algorithm},
                       {"n_cascades", r.n_cascades},
                       {"mean_size", r.mean_size},
                       {"max_size", r.max_size},
                       {"x_min", r.x_min},
                       {"bins_per_decade", r.bins_per_decade},
                       {"n_tail", r.n_tail},
                       {"sufficient", r.sufficient},
                       {"lambda", r.lambda},
                       {"r_squared", r.r_squared},
                       {"n_bins", r.n_bins},
                       {"wall_seconds", r.wall_seconds}};
}

inline void from_json(const nlohmann::json& j, RunRecord& r) {
    j.at("point_index").get_to(r.point_index);
    j.at("n").get_to(r.n);
    j.at("beta").get_to(r.beta);
    j.at("alpha").get_to(r.alpha);
    j.at("gamma").get_to(r.gamma);
    j.at("phi").get_to(r.phi);
    j.at("d_min").get_to(r.d_min);
    j.at("networks").get_to(r.networks);
    j.at("runs").get_to(r.runs);
    j.at("point_seed").get_to(r.point_seed);
    j.at("rng_algorithm").get_to(r.rng_algorithm);
    j.at("n_cascades").get_to(r.n_cascades);
    j.at("mean_size").get_to(r.mean_size);
    j.at("max_size").get_to(r.max_size);
    j.at("x_min").get_to(r.x_min);
    j.at("bins_per_decade").get_to(r.bins_per_decade);
    j.at("n_tail").get_to(r.n_tail);
    j.at("sufficient").get_to(r.sufficient);
    j.at("lambda").get_to(r.lambda);
    j.at("r_squared").get_to(r.r_squared);
    j.at("n_bins").get_to(r.n_bins);
    j.at("wall_seconds").get_to(r.wall_seconds);
}

/// True when the deterministic payloads agree (wall time excluded).
inline bool same_results(const RunRecord& a, const RunRecord& b) {
    nlohmann::json ja = a, jb = b;
    ja.erase("wall_seconds");
    jb.erase("wall_seconds");
    return ja == jb;
}

struct GridPoint {
    std::int32_t index = 0;
    node_t n = 0;
    double beta = 0.0;
    double alpha = 0.0;
};

inline std::vector<GridPoint> grid_points(const SweepConfig& config) {
    std::vector<GridPoint> points;
    points.reserve(config.point_count());
    std::int32_t index = 0;
    for (node_t n : config.n_values)
        for (double beta : config.beta_values)
            for (double alpha : config.alpha_values)
                points.push_back({index++, n, beta, alpha});
    return points;
}

/// Each point owns an independent seed stream; inside it, batch_simulate
/// derives per-network and per-run seeds, so every (point, network, run)
/// triple maps to a distinct engine seed.
inline std::uint64_t point_seed(std::uint64_t master, std::int32_t point_index) {
    return rng::derive_seed(master, static_cast<std::uint64_t>(point_index));
}

struct PointResult {
    RunRecord record;
    std::vector<CascadeSummary> summaries;
    std::vector<NetworkDiag> diags;
};

inline PointResult run_point(const SweepConfig& config, const GridPoint& point) {
    const auto start = std::chrono::steady_clock::now();

    BatchParams batch;
    batch.net.n = point.n;
    batch.net.phi = config.phi;
    batch.net.d_min = config.d_min;
    batch.svfr.beta = point.beta;
    batch.svfr.alpha = point.alpha;
    batch.svfr.gamma = config.gamma;
    batch.n_networks = config.networks_per_point;
    batch.n_runs = config.runs_per_network;
    batch.seed = point_seed(config.seed, point.index);
    batch.threads = resolve_threads(config.threads);
    BatchResult result = batch_simulate(batch);

    PointResult out;
    out.summaries = std::move(result.summaries);
    out.diags = std::move(result.diags);

    RunRecord& rec = out.record;
    rec.point_index = point.index;
    rec.n = point.n;
    rec.beta = point.beta;
    rec.alpha = point.alpha;
    rec.gamma = config.gamma;
    rec.phi = config.phi;
    rec.d_min = config.d_min;
    rec.networks = config.networks_per_point;
    rec.runs = config.runs_per_network;
    rec.point_seed = batch.seed;
    rec.n_cascades = out.summaries.size();
    rec.x_min = config.x_min;
    rec.bins_per_decade = config.bins_per_decade;

    std::vector<node_t> sizes;
    sizes.reserve(out.summaries.size());
    double size_sum = 0.0;
    for (const CascadeSummary& s : out.summaries) {
        sizes.push_back(s.size);
        size_sum += s.size;
        rec.max_size = std::max(rec.max_size, s.size);
    }
    rec.mean_size = size_sum / static_cast<double>(sizes.size());

    try {
        const PowerLawFit fit =
            fit_powerlaw_tail(sizes, config.x_min, config.bins_per_decade);
        rec.sufficient = true;
        rec.lambda = fit.lambda;
        rec.r_squared = fit.r_squared;
        rec.n_tail = fit.n_tail;
        rec.n_bins = fit.n_bins;
    } catch (const InsufficientDataError&) {
        rec.sufficient = false; // too few large cascades at this point
        for (node_t s : sizes)
            if (static_cast<double>(s) >= config.x_min) ++rec.n_tail;
    }

    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return out;
}

/// fig8.csv pipeline: one lambda fit per grid point, in canonical grid order.
inline std::vector<RunRecord> run_lambda_sweep(const SweepConfig& config) {
    config.validate();
    std::vector<RunRecord> records;
    records.reserve(config.point_count());
    for (const GridPoint& point : grid_points(config))
        records.push_back(run_point(config, point).record);
    return records;
}

inline std::vector<TreeMetrics> metrics_from_summaries(
    const std::vector<CascadeSummary>& summaries) {
    std::vector<TreeMetrics> metrics;
    metrics.reserve(summaries.size());
    for (const CascadeSummary& s : summaries) {
        TreeMetrics m;
        m.size = s.size;
        m.avg_path_length = s.avg_path_length;
        m.degree_std = s.degree_std;
        m.degree_variance = s.degree_std * s.degree_std;
        metrics.push_back(m);
    }
    return metrics;
}

/// Ensemble-mean structural metrics of T(n, theta) with population spreads.
struct EnsembleStats {
    node_t n = 0;
    double theta = 0.0;
    std::int32_t reps = 0;
    double mean_apl = 0.0;
    double std_apl = 0.0;
    double mean_dstd = 0.0;
    double std_dstd = 0.0;
};

inline EnsembleStats rrt_ensemble_stats(node_t n, double theta, std::int32_t reps,
                                        std::uint64_t seed, unsigned threads = 1) {
    RrtParams base;
    base.n = n;
    base.theta = theta;
    base.seed = seed;
    base.validate();
    if (reps < 1)
        throw std::invalid_argument("rrt_ensemble_stats: reps must be >= 1");

    std::vector<double> apl(static_cast<std::size_t>(reps));
    std::vector<double> dstd(static_cast<std::size_t>(reps));
    parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
        RrtParams params = base;
        params.seed = rng::derive_seed(seed, r);
        const TreeMetrics m = compute_tree_metrics(generate_rrt(params));
        apl[r] = m.avg_path_length;
        dstd[r] = m.degree_std;
    });

    const auto mean_std = [](const std::vector<double>& v) {
        double sum = 0.0, sumsq = 0.0;
        for (double x : v) {
            sum += x;
            sumsq += x * x;
        }
        const double mean = sum / static_cast<double>(v.size());
        const double var = std::max(0.0, sumsq / static_cast<double>(v.size()) -
                                             mean * mean);
        return std::pair<double, double>(mean, std::sqrt(var));
    };

    EnsembleStats stats;
    stats.n = n;
    stats.theta = theta;
    stats.reps = reps;
    std::tie(stats.mean_apl, stats.std_apl) = mean_std(apl);
    std::tie(stats.mean_dstd, stats.std_dstd) = mean_std(dstd);
    return stats;
}

/// One row of the structure-comparison table: binned simulation output next
/// to tree-model ensembles at the bins' representative sizes.
struct StructureRow {
    std::string source; // "svfr" or "rrt@<theta>"
    std::optional<double> theta;
    double bin_lo = 0.0;
    double bin_hi = 0.0;
    double bin_mid = 0.0;
    std::size_t count = 0;
    double mean_apl = 0.0;
    double std_apl = 0.0;
    double mean_dstd = 0.0;
    double std_dstd = 0.0;
};

/// fig9.csv pipeline. Cascades are binned over [min_size, max_size); for each
/// theta, an RRT ensemble is generated at every bin's representative size.
inline std::vector<StructureRow> run_structure_comparison(
    const std::vector<CascadeSummary>& cascades, const std::vector<double>& thetas,
    std::int32_t reps, std::uint64_t seed, node_t min_size = 100,
    node_t max_size = 1600, unsigned threads = 1) {
    std::vector<TreeMetrics> metrics;
    for (const TreeMetrics& m : metrics_from_summaries(cascades))
        if (m.size >= min_size && m.size < max_size) metrics.push_back(m);

    std::vector<StructureRow> rows;
    std::vector<SizeBin> bins;
    if (!metrics.empty()) {
        bins = bin_tree_metrics(metrics, min_size).bins;
        for (const SizeBin& b : bins) {
            StructureRow row;
            row.source = "svfr";
            row.bin_lo = b.lo;
            row.bin_hi = b.hi;
            row.bin_mid = b.mid;
            row.count = b.count;
            row.mean_apl = b.mean_apl;
            row.std_apl = b.std_apl;
            row.mean_dstd = b.mean_dstd;
            row.std_dstd = b.std_dstd;
            rows.push_back(std::move(row));
        }
    }

    for (std::size_t t = 0; t < thetas.size(); ++t) {
        for (std::size_t b = 0; b < bins.size(); ++b) {
            const auto n = static_cast<node_t>(std::llround(bins[b].mid));
            const EnsembleStats stats = rrt_ensemble_stats(
                n, thetas[t], reps, rng::derive_seed(seed, t, b, 0), threads);
            StructureRow row;
            row.source = "rrt@" + io::fmt(thetas[t]);
            row.theta = thetas[t];
            row.bin_lo = bins[b].lo;
            row.bin_hi = bins[b].hi;
            row.bin_mid = bins[b].mid;
            row.count = static_cast<std::size_t>(reps);
            row.mean_apl = stats.mean_apl;
            row.std_apl = stats.std_apl;
            row.mean_dstd = stats.mean_dstd;
            row.std_dstd = stats.std_dstd;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

/// Scatter data for the size-versus-forwarder-degree analysis (fig7.csv).
struct DmaxfStats {
    std::vector<std::pair<node_t, node_t>> points; // (d_max_f, size)
    std::optional<double> rank_correlation;        // Spearman; needs >= 2 points
};

namespace detail {

/// Average ranks (1-based), ties sharing their mean rank.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    const double cov = sxy - sx * sy / n;
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    if (vx <= 0.0 || vy <= 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

} // namespace detail

/// Spearman rank correlation between two paired samples.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("spearman: need two samples of equal size >= 2");
    return detail::pearson(detail::average_ranks(x), detail::average_ranks(y));
}

inline DmaxfStats emit_size_vs_dmaxf(const std::vector<CascadeSummary>& cascades,
                                     node_t min_size = 100) {
    DmaxfStats stats;
    for (const CascadeSummary& c : cascades)
        if (c.size >= min_size) stats.points.emplace_back(c.d_max_f, c.size);
    if (stats.points.size() >= 2) {
        std::vector<double> x, y;
        x.reserve(stats.points.size());
        y.reserve(stats.points.size());
        for (const auto& [d, s] : stats.points) {
            x.push_back(static_cast<double>(d));
            y.push_back(static_cast<double>(s));
        }
        stats.rank_correlation = spearman(x, y);
    }
    return stats;
}

namespace detail {

inline void write_summary_csv(std::ostream& out, const std::vector<RunRecord>& recs) {
    out << "point_index,n,beta,alpha,gamma,phi,d_min,networks,runs,point_seed,"
           "n_cascades,mean_size,max_size,n_tail,sufficient,lambda,r_squared,"
           "n_bins,wall_seconds\n";
    for (const RunRecord& r : recs)
        out << r.point_index << ',' << r.n << ',' << io::fmt(r.beta) << ','
            << io::fmt(r.alpha) << ',' << io::fmt(r.gamma) << ',' << io::fmt(r.phi)
            << ',' << r.d_min << ',' << r.networks << ',' << r.runs << ','
            << r.point_seed << ',' << r.n_cascades << ',' << io::fmt(r.mean_size)
            << ',' << r.max_size << ',' << r.n_tail << ',' << (r.sufficient ? 1 : 0)
            << ',' << io::fmt(r.lambda) << ',' << io::fmt(r.r_squared) << ','
            << r.n_bins << ',' << io::fmt(r.wall_seconds) << '\n';
}

inline void write_fig8_csv(std::ostream& out, const std::vector<RunRecord>& recs) {
    out << "n,beta,alpha,lambda,r_squared,n_tail,sufficient\n";
    for (const RunRecord& r : recs)
        out << r.n << ',' << io::fmt(r.beta) << ',' << io::fmt(r.alpha) << ','
            << io::fmt(r.lambda) << ',' << io::fmt(r.r_squared) << ',' << r.n_tail
            << ',' << (r.sufficient ? 1 : 0) << '\n';
}

inline void write_structure_csv(std::ostream& out,
                                const std::vector<StructureRow>& rows) {
    out << "source,bin_lo,bin_hi,bin_mid,count,mean_apl,std_apl,mean_dstd,"
           "std_dstd\n";
    for (const StructureRow& r : rows)
        out << r.source << ',' << io::fmt(r.bin_lo) << ',' << io::fmt(r.bin_hi)
            << ',' << io::fmt(r.bin_mid) << ',' << r.count << ','
            << io::fmt(r.mean_apl) << ',' << io::fmt(r.std_apl) << ','
            << io::fmt(r.mean_dstd) << ',' << io::fmt(r.std_dstd) << '\n';
}

inline void write_ensemble_csv(std::ostream& out,
                               const std::vector<EnsembleStats>& rows) {
    out << "theta,n,reps,mean_apl,std_apl,mean_dstd,std_dstd\n";
    for (const EnsembleStats& r : rows)
        out << io::fmt(r.theta) << ',' << r.n << ',' << r.reps << ','
            << io::fmt(r.mean_apl) << ',' << io::fmt(r.std_apl) << ','
            << io::fmt(r.mean_dstd) << ',' << io::fmt(r.std_dstd) << '\n';
}

} // namespace detail

/// Run the whole pipeline and write results.jsonl, summary.csv, and the
/// figure-ready tables into out_dir. Figure side-products come from fixed,
/// documented grid slices: fig5/fig7 use each alpha at the largest N with the
/// first beta; fig9 compares the first (beta, alpha) at the largest N.
inline std::vector<RunRecord> run_full_sweep(const SweepConfig& config,
                                             const std::string& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    const auto path = [&](const std::string& name) { return out_dir + "/" + name; };

    {
        std::ofstream out = io::open_output(path("config.json"));
        out << nlohmann::json(config).dump(2) << '\n';
    }

    const node_t n_star = *std::max_element(config.n_values.begin(),
                                            config.n_values.end());
    const double beta_star = config.beta_values.front();
    const unsigned threads = resolve_threads(config.threads);

    std::vector<RunRecord> records;
    std::ofstream jsonl = io::open_output(path("results.jsonl"));
    std::ofstream fig7 = io::open_output(path("fig7.csv"));
    fig7 << "alpha,d_max_f,size\n";
    std::ofstream fig7_summary = io::open_output(path("fig7_summary.csv"));
    fig7_summary << "alpha,n_points,rank_correlation\n";

    std::vector<StructureRow> fig9_rows;
    for (const GridPoint& point : grid_points(config)) {
        PointResult result = run_point(config, point);
        jsonl << nlohmann::json(result.record).dump() << '\n';

        const bool featured = point.n == n_star && point.beta == beta_star;
        if (featured) {
            // Size distribution (fig5) and size-vs-d_max_f (fig7) per alpha.
            std::vector<node_t> sizes;
            sizes.reserve(result.summaries.size());
            for (const CascadeSummary& s : result.summaries) sizes.push_back(s.size);
            const std::vector<LogBin> bins =
                log_binned_histogram(sizes, 1.0, config.bins_per_decade);
            std::ofstream fig5 = io::open_output(
                path("fig5_alpha" + io::fmt(point.alpha) + ".csv"));
            io::write_histogram_csv(fig5, bins);

            const DmaxfStats dmaxf = emit_size_vs_dmaxf(result.summaries, 100);
            for (const auto& [d, s] : dmaxf.points)
                fig7 << io::fmt(point.alpha) << ',' << d << ',' << s << '\n';
            fig7_summary << io::fmt(point.alpha) << ',' << dmaxf.points.size() << ','
                         << (dmaxf.rank_correlation
                                 ? io::fmt(*dmaxf.rank_correlation)
                                 : "nan")
                         << '\n';
        }
        if (featured && point.alpha == config.alpha_values.front()) {
            fig9_rows = run_structure_comparison(
                result.summaries, config.structure_theta_values, config.rrt_reps,
                rng::derive_seed(config.seed, 0xf19), 100, 1600, threads);
        }
        records.push_back(std::move(result.record));
    }

    {
        std::ofstream out = io::open_output(path("summary.csv"));
        detail::write_summary_csv(out, records);
    }
    {
        std::ofstream out = io::open_output(path("fig8.csv"));
        detail::write_fig8_csv(out, records);
    }
    {
        std::ofstream out = io::open_output(path("fig9.csv"));
        detail::write_structure_csv(out, fig9_rows);
    }
    {
        // Tree-model curves (fig2): ensemble metrics across sizes and thetas.
        std::vector<EnsembleStats> rows;
        for (std::size_t t = 0; t < config.rrt_theta_values.size(); ++t)
            for (std::size_t s = 0; s < config.rrt_sizes.size(); ++s)
                rows.push_back(rrt_ensemble_stats(
                    config.rrt_sizes[s], config.rrt_theta_values[t], config.rrt_reps,
                    rng::derive_seed(config.seed, t, s, 1), threads));
        std::ofstream out = io::open_output(path("fig2.csv"));
        detail::write_ensemble_csv(out, rows);
    }
    io::write_metadata(path("results.jsonl"), config.seed, nlohmann::json(config));
    return records;
}

} // namespace cascade
