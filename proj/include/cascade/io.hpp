#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cascade/fit.hpp"
#include "cascade/metrics.hpp"
#include "cascade/svfr.hpp"
#include "cascade/version.hpp"

namespace cascade::io {

/// Compact, locale-independent double formatting shared by every CSV writer
/// so identical runs produce byte-identical files.
inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

/// One-value-per-line integer list (cascade sizes for the tail fit).
inline std::vector<node_t> read_sizes(std::istream& in) {
    std::vector<node_t> sizes;
    long long v = 0;
    while (in >> v) sizes.push_back(static_cast<node_t>(v));
    if (!in.eof())
        throw std::runtime_error("read_sizes: non-numeric entry in size list");
    return sizes;
}

inline void write_cascade_csv(std::ostream& out,
                              const std::vector<CascadeSummary>& rows) {
    out << "network_idx,run_idx,size,n_forwarders,d_max_f,avg_path_length,"
           "degree_std\n";
    for (const CascadeSummary& r : rows)
        out << r.network_idx << ',' << r.run_idx << ',' << r.size << ','
            << r.n_forwarders << ',' << r.d_max_f << ',' << fmt(r.avg_path_length)
            << ',' << fmt(r.degree_std) << '\n';
}

inline void write_histogram_csv(std::ostream& out, const std::vector<LogBin>& bins) {
    out << "bin_lo,bin_hi,bin_center,count,density\n";
    for (const LogBin& b : bins)
        out << fmt(b.lo) << ',' << fmt(b.hi) << ',' << fmt(b.center) << ','
            << b.count << ',' << fmt(b.density) << '\n';
}

inline void write_powerlaw_csv(std::ostream& out, const PowerLawFit& fit) {
    out << "lambda,x_min,r_squared,bins_per_decade,n_tail,n_bins\n";
    out << fmt(fit.lambda) << ',' << fmt(fit.x_min) << ',' << fmt(fit.r_squared)
        << ',' << fit.bins_per_decade << ',' << fit.n_tail << ',' << fit.n_bins
        << '\n';
}

/// Sidecar describing how an output file was produced: version, generator,
/// seed, and the fully resolved parameters.
inline void write_metadata(const std::string& data_path, std::uint64_t seed,
                           const nlohmann::json& params) {
    nlohmann::json meta{
        {"version", kVersion},
        {"rng_algorithm", rng::kAlgorithm},
        {"seed", seed},
        {"parameters", params},
    };
    std::ofstream out = open_output(data_path + ".meta.json");
    out << meta.dump(2) << '\n';
}

} // namespace cascade::io
