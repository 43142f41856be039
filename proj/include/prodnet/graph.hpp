#pragma once

#include "prodnet/ingest.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace prodnet {

struct Edge {
    std::size_t source = 0;
    std::size_t target = 0;
    double weight = 0.0;

    bool operator==(const Edge&) const = default;
};

// Directed weighted simple graph over industries.
//
// Edges are stored sorted by (source, target) index. Construction enforces: no
// self-loops, at most one edge per ordered pair, strictly positive finite
// weights, endpoints in range. Instances are immutable.
class ProductionNetwork {
public:
    ProductionNetwork() = default;
    ProductionNetwork(std::vector<IndustryMeta> nodes, std::vector<Edge> edges);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    const std::vector<IndustryMeta>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    double total_weight() const;

    bool operator==(const ProductionNetwork&) const = default;

private:
    std::vector<IndustryMeta> nodes_;
    std::vector<Edge> edges_;
};

// One node per industry; an edge j -> i (supplier -> buyer) with weight w_ij
// for every off-diagonal cell w_ij > min_weight. Diagonal cells are ignored.
ProductionNetwork build_network(const InputOutputTable& table, double min_weight = 0.0);

enum class CutMode {
    at_least,    // keep weight >= zeta
    greater_than // keep weight > zeta
};

// Keeps edges passing the cut. With drop_isolated, nodes left without any
// incident edge are removed (remaining nodes keep their relative order).
ProductionNetwork prune(const ProductionNetwork& net, double zeta, bool drop_isolated = true,
                        CutMode mode = CutMode::at_least);

// Same nodes, every edge reversed, weights kept.
ProductionNetwork reverse(const ProductionNetwork& net);

enum class Direction { in, out };

const char* to_string(Direction d);

struct DegreeVector {
    std::vector<double> values;
    Direction direction = Direction::out;
    bool weighted = false;

    double sum() const;
};

// Unweighted: number of incident edges in the given direction. Weighted:
// sum of those edges' weights (strength).
DegreeVector degrees(const ProductionNetwork& net, Direction direction, bool weighted);

// Edge list [source_code, target_code, weight] sorted by source code then
// target code; node list [code, name] in node order.
void write_edge_list(std::ostream& out, const ProductionNetwork& net);
void write_node_list(std::ostream& out, const ProductionNetwork& net);

} // namespace prodnet
