#pragma once

#include "prodnet/graph.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace prodnet {

struct PageRankOptions {
    double damping = 0.85;
    double tol = 1e-9; // L1 change between iterates
    int max_iter = 1000;
};

// Weighted PageRank: each node passes damping * score along its out-edges in
// proportion to edge weight; dangling nodes spread their score uniformly.
// Returns one score per node, summing to 1. Throws ConvergenceError when
// max_iter is reached.
std::vector<double> pagerank(const ProductionNetwork& net, const PageRankOptions& opts = {});

// PageRank of the graph with every edge reversed, computed without building
// the reversed graph. High scores mark important suppliers.
std::vector<double> pagerank_reversed(const ProductionNetwork& net,
                                      const PageRankOptions& opts = {});

enum class Metric { out_strength, pagerank_out };

const char* to_string(Metric m);
Metric metric_from_string(const std::string& name);

struct CentralityScore {
    std::string code;
    std::string name;
    Metric metric = Metric::out_strength;
    double value = 0.0;
    int rank = 0;
};

struct CentralityReport {
    double zeta = 0.0;
    Metric metric = Metric::out_strength;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::vector<CentralityScore> top;
    // True when fewer than the requested k nodes were available.
    bool truncated = false;
};

// Per-node values of the metric.
std::vector<double> centrality_values(const ProductionNetwork& net, Metric metric,
                                      const PageRankOptions& opts = {});

// Sort descending by value, ties by industry code ascending; keep the first k.
CentralityReport rank(const ProductionNetwork& net, Metric metric, std::size_t k,
                      double zeta = 0.0, const PageRankOptions& opts = {});

// {zeta, metric, graph:{nodes, edges}, top:[{rank, code, name, value}]}
std::string report_to_json(const CentralityReport& report);

struct DriftRow {
    std::string code;
    std::string name;
    std::vector<std::optional<int>> ranks; // one per report; nullopt = not in top-k
    int max_drift = 0;
    bool dropped = false;
};

struct DriftTable {
    Metric metric = Metric::out_strength;
    std::vector<double> zetas;
    std::vector<DriftRow> rows;
};

// Rank of every industry that appears in any report's top list, across
// reports. Absence counts as rank k+1 of that report when measuring drift
// (max rank minus min rank). "dropped" marks an industry that leaves the top
// list at a later report after having been in it. Rows are sorted by drift
// descending, then code.
DriftTable ranking_drift(std::span<const CentralityReport> reports);

// CSV [code, name, rank@z1, ..., rank@zK, max_drift, dropped].
void write_drift(std::ostream& out, const DriftTable& table);

} // namespace prodnet
