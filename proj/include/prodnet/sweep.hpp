#pragma once

#include "prodnet/graph.hpp"
#include "prodnet/nullmodels.hpp"
#include "prodnet/stats.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace prodnet {

inline constexpr const char* tool_name = "prodnet";
inline constexpr const char* tool_version = "1.0.0";

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 0;

    bool operator==(const GridSpec&) const = default;
};

struct ThresholdGrid {
    std::vector<double> values;
    // Set when the grid came from make_grid; explicit lists leave it empty.
    std::optional<GridSpec> spec;

    bool operator==(const ThresholdGrid&) const = default;
};

// count values linearly spaced over [start, stop], both endpoints included.
ThresholdGrid make_grid(double start, double stop, std::size_t count);

// Explicit grid; values must be non-negative and strictly ascending.
ThresholdGrid grid_from_values(std::vector<double> values);

// 100 cut-offs over [0.00001, 0.5].
ThresholdGrid default_sweep_grid();
// {0, 0.02, 0.04, 0.06, 0.08, 0.1}.
ThresholdGrid default_centrality_grid();

struct SweepOptions {
    std::uint64_t seed = 42;
    int replicates = 1;
    bool drop_isolated = true;
    CutMode cut = CutMode::at_least;
    bool exclude_zeros = false;
    bool refit_per_zeta = false;
    double delta_in = 0.2;
    double delta_out = 0.0;
    int threads = 1;

    bool operator==(const SweepOptions&) const = default;
};

// KS statistic averaged over replicates. stddev is the sample standard
// deviation (0 for a single replicate); p_value is the replicate mean.
struct KSSummary {
    double statistic = 0.0;
    double stddev = 0.0;
    double p_value = 1.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;

    bool operator==(const KSSummary&) const = default;
};

struct SweepRecord {
    double zeta = 0.0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    // Empty when the pruned graph (or a compared sample) is empty.
    std::optional<KSSummary> ks_in_random;
    std::optional<KSSummary> ks_out_random;
    std::optional<KSSummary> ks_in_sf;
    std::optional<KSSummary> ks_out_sf;
    std::vector<std::uint64_t> seeds_random;
    std::vector<std::uint64_t> seeds_sf;
    ScaleFreeParams params;
    // fit_fallback, fit_clamped, refit_fallback, empty_graph, empty_sample.
    std::vector<std::string> flags;

    bool operator==(const SweepRecord&) const = default;
};

struct SweepResult {
    SweepOptions options;
    ThresholdGrid grid;
    // Fit on the unpruned network; empty with fit_error set when it failed and
    // fallback parameters were used.
    std::optional<ScaleFreeFit> base_fit;
    std::string fit_error;
    std::vector<SweepRecord> records;
};

// Default growth parameters used when the fit fails.
ScaleFreeParams fallback_params(double delta_in, double delta_out);

// For every cut-off: prune, record node/edge counts, draw a random and a
// scale-free null graph of matching size, and compare unweighted in/out degree
// samples by KS. Each (cut-off, replicate, model) draws from its own seed
// substream so the result is independent of threads.
SweepResult run_sweep(const ProductionNetwork& net, const ThresholdGrid& grid,
                      const SweepOptions& options = {});

enum class ReportFormat { json, csv };

// JSON carries tool version, options, grid and fit; CSV has one row per
// cut-off: zeta,nodes,edges,ks_in_rand,ks_out_rand,ks_in_sf,ks_out_sf,flags.
// Floats are written at 10 significant digits.
std::string emit_report(const SweepResult& result, ReportFormat format);

// Inverse of emit_report(…, json).
SweepResult parse_report(const std::string& json);

} // namespace prodnet
