#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cascade/experiment.hpp"
#include "cascade/fit.hpp"
#include "cascade/ingest.hpp"
#include "cascade/io.hpp"
#include "cascade/metrics.hpp"
#include "cascade/netgen.hpp"
#include "cascade/network.hpp"
#include "cascade/rrt.hpp"
#include "cascade/svfr.hpp"
#include "cascade/version.hpp"

namespace cascade::cli {

namespace detail {

/// Every run echoes its fully resolved configuration: to a .meta.json sidecar
/// when writing a file, to stderr when streaming to stdout.
inline void echo_config(const std::optional<std::string>& out_path,
                        std::uint64_t seed, const nlohmann::json& params) {
    if (out_path) {
        io::write_metadata(*out_path, seed, params);
    } else {
        nlohmann::json meta{{"version", kVersion},
                            {"rng_algorithm", rng::kAlgorithm},
                            {"seed", seed},
                            {"parameters", params}};
        std::cerr << meta.dump() << '\n';
    }
}

/// Write through to the file when --out is given, else to stdout.
template <typename WriteFn>
void emit(const std::optional<std::string>& out_path, WriteFn&& write) {
    if (out_path) {
        std::ofstream out = io::open_output(*out_path);
        write(out);
    } else {
        write(std::cout);
    }
}

/// "metrics.csv" -> "metrics_binned.csv" (companion outputs of analyze).
inline std::string sibling(const std::string& path, const std::string& suffix) {
    const std::size_t dot = path.find_last_of('.');
    const std::size_t slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

struct RrtArgs {
    node_t n = 1000;
    double theta = 1.0;
    std::int32_t reps = 1;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool trees = false;
    std::optional<std::string> out;
};

inline void run_rrt(const RrtArgs& args) {
    RrtParams params;
    params.n = args.n;
    params.theta = args.theta;
    params.seed = args.seed;
    params.validate();
    if (args.reps < 1) throw std::invalid_argument("rrt: --reps must be >= 1");

    echo_config(args.out, args.seed,
                {{"command", "rrt"},
                 {"n", args.n},
                 {"theta", args.theta},
                 {"reps", args.reps},
                 {"trees", args.trees},
                 {"threads", args.threads}});

    const std::vector<Tree> trees =
        generate_rrt_ensemble(params, args.reps, args.threads);
    emit(args.out, [&](std::ostream& out) {
        if (args.trees) {
            for (const Tree& t : trees) write_tree(out, t);
            return;
        }
        out << "rep,size,avg_path_length,degree_variance,degree_std\n";
        for (std::size_t r = 0; r < trees.size(); ++r) {
            const TreeMetrics m = compute_tree_metrics(trees[r]);
            out << r << ',' << m.size << ',' << io::fmt(m.avg_path_length) << ','
                << io::fmt(m.degree_variance) << ',' << io::fmt(m.degree_std)
                << '\n';
        }
    });
}

struct NetgenArgs {
    node_t n = 10000;
    double phi = 2.5;
    node_t d_min = 10;
    std::optional<node_t> d_max;
    std::uint64_t seed = 1;
    std::optional<std::string> out;
};

inline void run_netgen(const NetgenArgs& args) {
    NetGenParams params;
    params.n = args.n;
    params.phi = args.phi;
    params.d_min = args.d_min;
    params.d_max_override = args.d_max;
    params.seed = args.seed;
    params.validate();

    echo_config(args.out, args.seed,
                {{"command", "netgen"},
                 {"n", args.n},
                 {"phi", args.phi},
                 {"d_min", args.d_min},
                 {"d_max", params.d_max()}});

    const ConfigModelResult result = generate_network(params);
    std::cerr << "netgen: " << result.network.size() << " nodes, "
              << result.network.edge_count() << " edges, erased stub fraction "
              << io::fmt(result.erased_fraction()) << '\n';
    emit(args.out, [&](std::ostream& out) { write_network(out, result.network); });
}

struct SvfrArgs {
    node_t n = 10000;
    double phi = 2.5;
    node_t d_min = 10;
    double beta = 0.3;
    double alpha = 0.8;
    double gamma = 0.091;
    std::int32_t networks = 1;
    std::int32_t runs = 100;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::optional<std::string> out;
};

inline void run_svfr(const SvfrArgs& args) {
    BatchParams params;
    params.net.n = args.n;
    params.net.phi = args.phi;
    params.net.d_min = args.d_min;
    params.svfr.beta = args.beta;
    params.svfr.alpha = args.alpha;
    params.svfr.gamma = args.gamma;
    params.n_networks = args.networks;
    params.n_runs = args.runs;
    params.seed = args.seed;
    params.threads = resolve_threads(args.threads);
    params.validate();

    echo_config(args.out, args.seed,
                {{"command", "svfr"},
                 {"n", args.n},
                 {"phi", args.phi},
                 {"d_min", args.d_min},
                 {"d_max", params.net.d_max()},
                 {"beta", args.beta},
                 {"alpha", args.alpha},
                 {"gamma", args.gamma},
                 {"networks", args.networks},
                 {"runs", args.runs},
                 {"threads", params.threads}});

    const BatchResult result = batch_simulate(params);
    for (const NetworkDiag& d : result.diags)
        std::cerr << "svfr: network " << d.network_idx << " mean degree "
                  << io::fmt(d.mean_degree) << ", c " << io::fmt(d.c)
                  << ", clamped " << d.clamped_count << '\n';
    emit(args.out,
         [&](std::ostream& out) { io::write_cascade_csv(out, result.summaries); });
}

struct SweepArgs {
    std::string config_path;
    std::string out_dir = "results";
};

inline void run_sweep(const SweepArgs& args) {
    std::ifstream in = io::open_input(args.config_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("sweep: cannot parse " + args.config_path + ": " +
                                 e.what());
    }
    const SweepConfig config = j.get<SweepConfig>();
    const std::vector<RunRecord> records = run_full_sweep(config, args.out_dir);
    for (const RunRecord& r : records)
        std::cerr << "sweep: point " << r.point_index << " (n=" << r.n
                  << ", beta=" << io::fmt(r.beta) << ", alpha=" << io::fmt(r.alpha)
                  << ") lambda="
                  << (r.sufficient ? io::fmt(r.lambda) : std::string("insufficient"))
                  << '\n';
}

struct FitSizesArgs {
    std::string in_path;
    double x_min = 100.0;
    int bins_per_decade = 10;
    bool mle = false;
    std::optional<std::string> out;
};

inline void run_fit_sizes(const FitSizesArgs& args) {
    std::ifstream in = io::open_input(args.in_path);
    const std::vector<node_t> sizes = io::read_sizes(in);
    const PowerLawFit fit =
        args.mle ? fit_powerlaw_mle(sizes, args.x_min)
                 : fit_powerlaw_tail(sizes, args.x_min, args.bins_per_decade);
    echo_config(args.out, 0,
                {{"command", "fit sizes"},
                 {"in", args.in_path},
                 {"x_min", args.x_min},
                 {"bins_per_decade", args.bins_per_decade},
                 {"mle", args.mle}});
    emit(args.out, [&](std::ostream& out) { io::write_powerlaw_csv(out, fit); });
}

struct FitThetaArgs {
    std::string in_path;
    std::vector<double> grid{0.8, 1.0, 1.2, 1.4, 1.6};
    std::int32_t reps = 200;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::optional<std::string> out;
};

inline void run_fit_theta(const FitThetaArgs& args) {
    std::ifstream in = io::open_input(args.in_path);
    const SizeBinnedStats binned = read_size_binned_csv(in);
    const ThetaFit fit =
        fit_theta(binned.bins, args.grid, args.reps, args.seed, args.threads);
    echo_config(args.out, args.seed,
                {{"command", "fit theta"},
                 {"in", args.in_path},
                 {"grid", args.grid},
                 {"reps", args.reps},
                 {"threads", args.threads}});
    emit(args.out, [&](std::ostream& out) {
        out << "theta_star,loss\n";
        out << io::fmt(fit.theta_star) << ',' << io::fmt(fit.loss) << '\n';
        out << "theta,loss\n";
        for (std::size_t i = 0; i < fit.grid.size(); ++i)
            out << io::fmt(fit.grid[i]) << ',' << io::fmt(fit.losses[i]) << '\n';
    });
}

struct AnalyzeArgs {
    std::string in_path;
    std::int64_t gap_seconds = -1; // negative = gap rule disabled
    double x_min = 100.0;
    int bins_per_decade = 10;
    std::string out = "metrics.csv";
};

inline void run_analyze(const AnalyzeArgs& args) {
    std::ifstream in = io::open_input(args.in_path);
    const CascadeLog log = parse_events(in);
    const std::optional<std::int64_t> cutoff =
        args.gap_seconds >= 0 ? std::optional<std::int64_t>(args.gap_seconds)
                              : std::nullopt;
    const std::vector<IngestedCascade> cascades = to_cascade_trees(log, cutoff);

    echo_config(args.out, 0,
                {{"command", "analyze"},
                 {"in", args.in_path},
                 {"gap_seconds", args.gap_seconds},
                 {"x_min", args.x_min},
                 {"bins_per_decade", args.bins_per_decade}});

    std::vector<TreeMetrics> metrics;
    std::vector<node_t> sizes;
    {
        std::ofstream out = io::open_output(args.out);
        out << "cascade_id,size,n_forwarders,truncated_events,avg_path_length,"
               "degree_variance,degree_std\n";
        for (const IngestedCascade& c : cascades) {
            const TreeMetrics m = compute_tree_metrics(c.tree);
            node_t n_forwarders = 0;
            for (std::uint8_t f : c.forwarded) n_forwarders += f;
            out << c.cascade_id << ',' << m.size << ',' << n_forwarders << ','
                << c.truncated_events << ',' << io::fmt(m.avg_path_length) << ','
                << io::fmt(m.degree_variance) << ',' << io::fmt(m.degree_std)
                << '\n';
            metrics.push_back(m);
            sizes.push_back(m.size);
        }
    }
    std::cerr << "analyze: " << cascades.size() << " cascades -> " << args.out
              << '\n';

    try {
        const SizeBinnedStats binned =
            bin_tree_metrics(metrics, static_cast<std::int64_t>(args.x_min));
        const std::string binned_path = sibling(args.out, "_binned");
        std::ofstream out = io::open_output(binned_path);
        write_size_binned_csv(out, binned);
        std::cerr << "analyze: size-binned stats -> " << binned_path << '\n';
    } catch (const std::exception& e) {
        std::cerr << "analyze: skipping size bins (" << e.what() << ")\n";
    }
    try {
        const PowerLawFit fit =
            fit_powerlaw_tail(sizes, args.x_min, args.bins_per_decade);
        const std::string fit_path = sibling(args.out, "_fit");
        std::ofstream out = io::open_output(fit_path);
        io::write_powerlaw_csv(out, fit);
        std::cerr << "analyze: tail fit -> " << fit_path << '\n';
    } catch (const std::exception& e) {
        std::cerr << "analyze: skipping tail fit (" << e.what() << ")\n";
    }
}

} // namespace detail

/// Build the command tree and run one invocation.
inline int run(int argc, const char* const* argv) {
    CLI::App app{"Cascade-tree and network diffusion toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    detail::RrtArgs rrt_args;
    CLI::App* rrt = app.add_subcommand(
        "rrt", "Generate random recursive trees T(n, theta) and their metrics");
    rrt->add_option("--n", rrt_args.n, "Tree size")->capture_default_str();
    rrt->add_option("--theta", rrt_args.theta, "Attachment exponent (>= 0)")
        ->capture_default_str();
    rrt->add_option("--reps", rrt_args.reps, "Independent replications")
        ->capture_default_str();
    rrt->add_option("--seed", rrt_args.seed, "Master seed")->capture_default_str();
    rrt->add_option("--threads", rrt_args.threads, "Worker threads (0 = all)")
        ->capture_default_str();
    rrt->add_flag("--trees", rrt_args.trees,
                  "Emit serialized trees instead of metric rows");
    rrt->add_option("--out", rrt_args.out, "Output file (default: stdout)");

    detail::NetgenArgs netgen_args;
    CLI::App* netgen = app.add_subcommand(
        "netgen", "Sample a power-law degree sequence and wire a network");
    netgen->add_option("--n", netgen_args.n, "Node count")->capture_default_str();
    netgen->add_option("--phi", netgen_args.phi, "Degree exponent (> 1)")
        ->capture_default_str();
    netgen->add_option("--dmin", netgen_args.d_min, "Minimum degree")
        ->capture_default_str();
    netgen->add_option("--dmax", netgen_args.d_max,
                       "Maximum degree (default: floor(n^(1/(phi-1))))");
    netgen->add_option("--seed", netgen_args.seed, "Master seed")
        ->capture_default_str();
    netgen->add_option("--out", netgen_args.out, "Output file (default: stdout)");

    detail::SvfrArgs svfr_args;
    CLI::App* svfr = app.add_subcommand(
        "svfr", "Simulate view-forward diffusion batches on generated networks");
    svfr->add_option("--n", svfr_args.n, "Network size")->capture_default_str();
    svfr->add_option("--phi", svfr_args.phi, "Degree exponent")
        ->capture_default_str();
    svfr->add_option("--dmin", svfr_args.d_min, "Minimum degree")
        ->capture_default_str();
    svfr->add_option("--beta", svfr_args.beta, "Mean view probability (0, 1]")
        ->capture_default_str();
    svfr->add_option("--alpha", svfr_args.alpha, "Degree scaling exponent (>= 0)")
        ->capture_default_str();
    svfr->add_option("--gamma", svfr_args.gamma, "Forward probability [0, 1]")
        ->capture_default_str();
    svfr->add_option("--networks", svfr_args.networks, "Independent networks")
        ->capture_default_str();
    svfr->add_option("--runs", svfr_args.runs, "Cascades per network")
        ->capture_default_str();
    svfr->add_option("--seed", svfr_args.seed, "Master seed")->capture_default_str();
    svfr->add_option("--threads", svfr_args.threads, "Worker threads (0 = all)")
        ->capture_default_str();
    svfr->add_option("--out", svfr_args.out, "Output file (default: stdout)");

    detail::SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Run a configured (n, beta, alpha) sweep and emit figure tables");
    sweep->add_option("--config", sweep_args.config_path, "Sweep config JSON")
        ->required();
    sweep->add_option("--out", sweep_args.out_dir, "Output directory")
        ->capture_default_str();

    CLI::App* fit = app.add_subcommand("fit", "Estimate model parameters");
    fit->require_subcommand(1);

    detail::FitSizesArgs fit_sizes_args;
    CLI::App* fit_sizes = fit->add_subcommand(
        "sizes", "Fit the power-law tail exponent of a size list");
    fit_sizes->add_option("--in", fit_sizes_args.in_path,
                          "File with one cascade size per line")
        ->required();
    fit_sizes->add_option("--xmin", fit_sizes_args.x_min, "Lower tail cutoff")
        ->capture_default_str();
    fit_sizes
        ->add_option("--bins-per-decade", fit_sizes_args.bins_per_decade,
                     "Histogram resolution")
        ->capture_default_str();
    fit_sizes->add_flag("--mle", fit_sizes_args.mle,
                        "Use the discrete maximum-likelihood estimator");
    fit_sizes->add_option("--out", fit_sizes_args.out,
                          "Output file (default: stdout)");

    detail::FitThetaArgs fit_theta_args;
    CLI::App* fit_theta_cmd = fit->add_subcommand(
        "theta", "Calibrate the tree-model exponent against binned metrics");
    fit_theta_cmd
        ->add_option("--in", fit_theta_args.in_path, "Size-binned stats CSV")
        ->required();
    fit_theta_cmd->add_option("--grid", fit_theta_args.grid, "Theta grid values")
        ->delimiter(',')
        ->capture_default_str();
    fit_theta_cmd->add_option("--reps", fit_theta_args.reps, "Trees per grid point")
        ->capture_default_str();
    fit_theta_cmd->add_option("--seed", fit_theta_args.seed, "Master seed")
        ->capture_default_str();
    fit_theta_cmd
        ->add_option("--threads", fit_theta_args.threads, "Worker threads (0 = all)")
        ->capture_default_str();
    fit_theta_cmd->add_option("--out", fit_theta_args.out,
                              "Output file (default: stdout)");

    detail::AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Ingest a cascade event log and run the tree analysis");
    analyze->add_option("--in", analyze_args.in_path, "Events JSONL file")
        ->required();
    analyze->add_option("--gap-seconds", analyze_args.gap_seconds,
                        "Truncate a cascade at the first gap exceeding this many "
                        "seconds (negative = disabled)")
        ->capture_default_str();
    analyze->add_option("--xmin", analyze_args.x_min, "Bin/fit lower cutoff")
        ->capture_default_str();
    analyze
        ->add_option("--bins-per-decade", analyze_args.bins_per_decade,
                     "Histogram resolution")
        ->capture_default_str();
    analyze->add_option("--out", analyze_args.out, "Per-cascade metrics CSV path")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (rrt->parsed()) detail::run_rrt(rrt_args);
        if (netgen->parsed()) detail::run_netgen(netgen_args);
        if (svfr->parsed()) detail::run_svfr(svfr_args);
        if (sweep->parsed()) detail::run_sweep(sweep_args);
        if (fit_sizes->parsed()) detail::run_fit_sizes(fit_sizes_args);
        if (fit_theta_cmd->parsed()) detail::run_fit_theta(fit_theta_args);
        if (analyze->parsed()) detail::run_analyze(analyze_args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InsufficientDataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

} // namespace cascade::cli
