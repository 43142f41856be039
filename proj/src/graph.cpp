#include "prodnet/graph.hpp"

#include "prodnet/csv.hpp"
#include "prodnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace prodnet {

namespace {

bool by_endpoints(const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
}

} // namespace

ProductionNetwork::ProductionNetwork(std::vector<IndustryMeta> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    const std::size_t n = nodes_.size();
    for (const auto& e : edges_) {
        if (e.source >= n || e.target >= n)
            throw RangeError("edge endpoint out of range");
        if (e.source == e.target)
            throw RangeError("self-loop on node '" + nodes_[e.source].code + "'");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw RangeError("edge weight must be positive and finite");
    }
    if (!std::is_sorted(edges_.begin(), edges_.end(), by_endpoints))
        std::sort(edges_.begin(), edges_.end(), by_endpoints);
    for (std::size_t k = 1; k < edges_.size(); ++k) {
        if (edges_[k].source == edges_[k - 1].source && edges_[k].target == edges_[k - 1].target) {
            throw RangeError("parallel edge " + nodes_[edges_[k].source].code + " -> " +
                             nodes_[edges_[k].target].code);
        }
    }
}

double ProductionNetwork::total_weight() const {
    return std::accumulate(edges_.begin(), edges_.end(), 0.0,
                           [](double acc, const Edge& e) { return acc + e.weight; });
}

ProductionNetwork build_network(const InputOutputTable& table, double min_weight) {
    if (!(min_weight >= 0.0))
        throw RangeError("min_weight must be non-negative");
    const std::size_t n = table.size();
    std::vector<Edge> edges;
    for (std::size_t supplier = 0; supplier < n; ++supplier) {
        for (std::size_t buyer = 0; buyer < n; ++buyer) {
            if (supplier == buyer)
                continue;
            const double w = table.coefficient(buyer, supplier);
            if (w > min_weight)
                edges.push_back({supplier, buyer, w});
        }
    }
    return ProductionNetwork(table.industries(), std::move(edges));
}

ProductionNetwork prune(const ProductionNetwork& net, double zeta, bool drop_isolated,
                        CutMode mode) {
    if (!(zeta >= 0.0))
        throw RangeError("threshold must be non-negative");
    const auto keep = [&](double w) { return mode == CutMode::at_least ? w >= zeta : w > zeta; };

    std::vector<Edge> kept;
    for (const auto& e : net.edges()) {
        if (keep(e.weight))
            kept.push_back(e);
    }
    if (!drop_isolated)
        return ProductionNetwork(net.nodes(), std::move(kept));

    std::vector<bool> touched(net.node_count(), false);
    for (const auto& e : kept)
        touched[e.source] = touched[e.target] = true;
    std::vector<std::size_t> remap(net.node_count(), 0);
    std::vector<IndustryMeta> nodes;
    for (std::size_t v = 0; v < net.node_count(); ++v) {
        if (touched[v]) {
            remap[v] = nodes.size();
            nodes.push_back(net.nodes()[v]);
        }
    }
    for (auto& e : kept) {
        e.source = remap[e.source];
        e.target = remap[e.target];
    }
    return ProductionNetwork(std::move(nodes), std::move(kept));
}

ProductionNetwork reverse(const ProductionNetwork& net) {
    std::vector<Edge> edges;
    edges.reserve(net.edge_count());
    for (const auto& e : net.edges())
        edges.push_back({e.target, e.source, e.weight});
    return ProductionNetwork(net.nodes(), std::move(edges));
}

const char* to_string(Direction d) { return d == Direction::in ? "in" : "out"; }

double DegreeVector::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

DegreeVector degrees(const ProductionNetwork& net, Direction direction, bool weighted) {
    DegreeVector dv{std::vector<double>(net.node_count(), 0.0), direction, weighted};
    for (const auto& e : net.edges()) {
        const std::size_t v = direction == Direction::in ? e.target : e.source;
        dv.values[v] += weighted ? e.weight : 1.0;
    }
    return dv;
}

void write_edge_list(std::ostream& out, const ProductionNetwork& net) {
    std::vector<const Edge*> order;
    order.reserve(net.edge_count());
    for (const auto& e : net.edges())
        order.push_back(&e);
    const auto& nodes = net.nodes();
    std::sort(order.begin(), order.end(), [&](const Edge* a, const Edge* b) {
        const auto& sa = nodes[a->source].code;
        const auto& sb = nodes[b->source].code;
        if (sa != sb)
            return sa < sb;
        return nodes[a->target].code < nodes[b->target].code;
    });
    csv::write_row(out, {"source_code", "target_code", "weight"});
    for (const Edge* e : order) {
        csv::write_row(out, {nodes[e->source].code, nodes[e->target].code,
                             csv::format_exact(e->weight)});
    }
}

void write_node_list(std::ostream& out, const ProductionNetwork& net) {
    csv::write_row(out, {"code", "name"});
    for (const auto& meta : net.nodes())
        csv::write_row(out, {meta.code, meta.name});
}

} // namespace prodnet
