#include "prodnet/centrality.hpp"

#include "prodnet/csv.hpp"
#include "prodnet/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

namespace prodnet {

namespace {

struct Flow {
    std::size_t from;
    std::size_t to;
    double weight;
};

// Power iteration on flows from -> to. Incoming flows are grouped per target
// so each sweep is a gather.
std::vector<double> power_iterate(std::size_t n, const std::vector<Flow>& flows,
                                  const PageRankOptions& opts) {
    if (n == 0)
        throw RangeError("PageRank needs a non-empty graph");
    if (!(opts.damping > 0.0 && opts.damping < 1.0))
        throw RangeError("damping must lie in (0, 1)");
    if (!(opts.tol > 0.0))
        throw RangeError("tolerance must be positive");
    if (opts.max_iter <= 0)
        throw RangeError("max_iter must be positive");

    std::vector<double> out_weight(n, 0.0);
    std::vector<std::size_t> offsets(n + 1, 0);
    for (const auto& f : flows) {
        out_weight[f.from] += f.weight;
        ++offsets[f.to + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<std::size_t> sources(flows.size());
    std::vector<double> shares(flows.size());
    {
        auto cursor = offsets;
        for (const auto& f : flows) {
            const std::size_t slot = cursor[f.to]++;
            sources[slot] = f.from;
            shares[slot] = f.weight / out_weight[f.from];
        }
    }
    std::vector<std::size_t> dangling;
    for (std::size_t v = 0; v < n; ++v) {
        if (out_weight[v] == 0.0)
            dangling.push_back(v);
    }

    const double nd = static_cast<double>(n);
    const double d = opts.damping;
    std::vector<double> score(n, 1.0 / nd);
    std::vector<double> next(n);
    double residual = 0.0;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        double dangling_mass = 0.0;
        for (std::size_t v : dangling)
            dangling_mass += score[v];
        const double base = (1.0 - d) / nd + d * dangling_mass / nd;
        for (std::size_t v = 0; v < n; ++v) {
            double acc = 0.0;
            for (std::size_t k = offsets[v]; k < offsets[v + 1]; ++k)
                acc += score[sources[k]] * shares[k];
            next[v] = base + d * acc;
        }
        const double total = std::accumulate(next.begin(), next.end(), 0.0);
        residual = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            next[v] /= total;
            residual += std::abs(next[v] - score[v]);
        }
        score.swap(next);
        if (residual < opts.tol)
            return score;
    }
    throw ConvergenceError("PageRank did not converge in " + std::to_string(opts.max_iter) +
                               " iterations (L1 residual " + csv::format_report(residual) + ")",
                           score, residual);
}

} // namespace

std::vector<double> pagerank(const ProductionNetwork& net, const PageRankOptions& opts) {
    std::vector<Flow> flows;
    flows.reserve(net.edge_count());
    for (const auto& e : net.edges())
        flows.push_back({e.source, e.target, e.weight});
    return power_iterate(net.node_count(), flows, opts);
}

std::vector<double> pagerank_reversed(const ProductionNetwork& net, const PageRankOptions& opts) {
    std::vector<Flow> flows;
    flows.reserve(net.edge_count());
    for (const auto& e : net.edges())
        flows.push_back({e.target, e.source, e.weight});
    return power_iterate(net.node_count(), flows, opts);
}

const char* to_string(Metric m) { return m == Metric::out_strength ? "out_strength" : "pagerank_out"; }

Metric metric_from_string(const std::string& name) {
    if (name == "out_strength")
        return Metric::out_strength;
    if (name == "pagerank_out")
        return Metric::pagerank_out;
    throw RangeError("unknown metric '" + name + "'");
}

std::vector<double> centrality_values(const ProductionNetwork& net, Metric metric,
                                      const PageRankOptions& opts) {
    if (metric == Metric::out_strength)
        return degrees(net, Direction::out, true).values;
    return pagerank_reversed(net, opts);
}

CentralityReport rank(const ProductionNetwork& net, Metric metric, std::size_t k, double zeta,
                      const PageRankOptions& opts) {
    if (net.empty())
        throw RangeError("cannot rank an empty network");
    if (k == 0)
        throw RangeError("k must be positive");
    const auto values = centrality_values(net, metric, opts);
    const auto& nodes = net.nodes();

    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b])
            return values[a] > values[b];
        return nodes[a].code < nodes[b].code;
    });

    CentralityReport report;
    report.zeta = zeta;
    report.metric = metric;
    report.nodes = net.node_count();
    report.edges = net.edge_count();
    report.truncated = k > order.size();
    const std::size_t keep = std::min(k, order.size());
    for (std::size_t r = 0; r < keep; ++r) {
        const std::size_t v = order[r];
        report.top.push_back(
            {nodes[v].code, nodes[v].name, metric, values[v], static_cast<int>(r + 1)});
    }
    return report;
}

std::string report_to_json(const CentralityReport& report) {
    nlohmann::ordered_json j;
    j["zeta"] = report.zeta;
    j["metric"] = to_string(report.metric);
    j["graph"] = {{"nodes", report.nodes}, {"edges", report.edges}};
    auto top = nlohmann::ordered_json::array();
    for (const auto& s : report.top) {
        nlohmann::ordered_json row;
        row["rank"] = s.rank;
        row["code"] = s.code;
        row["name"] = s.name;
        row["value"] = csv::round_report(s.value);
        top.push_back(std::move(row));
    }
    j["top"] = std::move(top);
    return j.dump(2);
}

DriftTable ranking_drift(std::span<const CentralityReport> reports) {
    if (reports.size() < 2)
        throw RangeError("ranking drift needs at least two reports");
    DriftTable table;
    table.metric = reports.front().metric;
    for (const auto& r : reports) {
        if (r.metric != table.metric) {
            throw MetricMismatchError(std::string("cannot compare ") + to_string(table.metric) +
                                      " with " + to_string(r.metric));
        }
        table.zetas.push_back(r.zeta);
    }

    std::map<std::string, DriftRow> rows;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        for (const auto& s : reports[i].top) {
            auto& row = rows[s.code];
            if (row.ranks.empty()) {
                row.code = s.code;
                row.name = s.name;
                row.ranks.assign(reports.size(), std::nullopt);
            }
            row.ranks[i] = s.rank;
        }
    }

    for (auto& [code, row] : rows) {
        int lo = 0;
        int hi = 0;
        bool seen = false;
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const int effective =
                row.ranks[i].value_or(static_cast<int>(reports[i].top.size()) + 1);
            lo = seen ? std::min(lo, effective) : effective;
            hi = seen ? std::max(hi, effective) : effective;
            seen = true;
            if (!row.ranks[i]) {
                const bool earlier = std::any_of(row.ranks.begin(),
                                                 row.ranks.begin() + static_cast<long>(i),
                                                 [](const auto& r) { return r.has_value(); });
                row.dropped = row.dropped || earlier;
            }
        }
        row.max_drift = hi - lo;
        table.rows.push_back(std::move(row));
    }
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const DriftRow& a, const DriftRow& b) {
        return a.max_drift > b.max_drift;
    });
    return table;
}

void write_drift(std::ostream& out, const DriftTable& table) {
    std::vector<std::string> header = {"code", "name"};
    for (double z : table.zetas)
        header.push_back("rank@" + csv::format_report(z));
    header.emplace_back("max_drift");
    header.emplace_back("dropped");
    csv::write_row(out, header);
    for (const auto& row : table.rows) {
        std::vector<std::string> fields = {row.code, row.name};
        for (const auto& r : row.ranks)
            fields.push_back(r ? std::to_string(*r) : std::string{});
        fields.push_back(std::to_string(row.max_drift));
        fields.emplace_back(row.dropped ? "true" : "false");
        csv::write_row(out, fields);
    }
}

} // namespace prodnet
