#pragma once

// Test-only generators and brute-force oracles. Nothing here calls into the
// code paths it is used to check.

#include "prodnet/graph.hpp"
#include "prodnet/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#ifndef PRODNET_TEST_DATA
#define PRODNET_TEST_DATA "tests/data"
#endif

namespace prodnet::testing {

inline std::string data_path(const std::string& name) {
    return std::string(PRODNET_TEST_DATA) + "/" + name;
}

inline std::string node_code(std::size_t v) {
    std::string s = std::to_string(v);
    return "N" + std::string(3 - std::min<std::size_t>(3, s.size()), '0') + s;
}

// Random simple weighted digraph: n nodes, each ordered pair present with
// probability density, weights log-uniform over [1e-4, 1].
inline ProductionNetwork random_network(std::mt19937_64& gen, std::size_t n, double density) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<IndustryMeta> nodes;
    for (std::size_t v = 0; v < n; ++v)
        nodes.push_back({node_code(v), "Industry " + std::to_string(v)});
    std::vector<Edge> edges;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
            if (s != t && u(gen) < density)
                edges.push_back({s, t, std::pow(10.0, -4.0 * u(gen))});
        }
    }
    return ProductionNetwork(std::move(nodes), std::move(edges));
}

inline std::set<std::pair<std::string, std::string>> edge_codes(const ProductionNetwork& net) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& e : net.edges())
        out.emplace(net.nodes()[e.source].code, net.nodes()[e.target].code);
    return out;
}

inline std::set<std::string> node_codes(const ProductionNetwork& net) {
    std::set<std::string> out;
    for (const auto& m : net.nodes())
        out.insert(m.code);
    return out;
}

// Strength/degree by scanning the edge list once per node.
inline std::vector<double> brute_degrees(const ProductionNetwork& net, bool incoming,
                                         bool weighted) {
    std::vector<double> out(net.node_count(), 0.0);
    for (std::size_t v = 0; v < net.node_count(); ++v) {
        for (const auto& e : net.edges()) {
            if ((incoming ? e.target : e.source) == v)
                out[v] += weighted ? e.weight : 1.0;
        }
    }
    return out;
}

// sup |F_a - F_b| by evaluating both ECDFs directly at every support point.
inline double brute_ks(const std::vector<double>& a, const std::vector<double>& b) {
    std::set<double> support(a.begin(), a.end());
    support.insert(b.begin(), b.end());
    const auto na = static_cast<long long>(a.size());
    const auto nb = static_cast<long long>(b.size());
    long long best = 0;
    for (double x : support) {
        const auto ca = static_cast<long long>(std::count_if(a.begin(), a.end(), [&](double v) { return v <= x; }));
        const auto cb = static_cast<long long>(std::count_if(b.begin(), b.end(), [&](double v) { return v <= x; }));
        best = std::max(best, std::llabs(ca * nb - cb * na));
    }
    return static_cast<double>(best) / (static_cast<double>(na) * static_cast<double>(nb));
}

// Stationary vector of the weighted Google matrix by Gaussian elimination on
// (I - d P^T - d/n * 1 dangling^T) x = (1-d)/n * 1.
inline std::vector<double> dense_pagerank(const ProductionNetwork& net, double d) {
    const std::size_t n = net.node_count();
    std::vector<double> out_w(n, 0.0);
    for (const auto& e : net.edges())
        out_w[e.source] += e.weight;
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] += 1.0;
        a[i][n] = (1.0 - d) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (out_w[j] == 0.0)
                a[i][j] -= d / static_cast<double>(n);
        }
    }
    for (const auto& e : net.edges())
        a[e.target][e.source] -= d * e.weight / out_w[e.source];
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[p][c]))
                p = r;
        }
        std::swap(a[c], a[p]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c)
                continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= n; ++k)
                a[r][k] -= f * a[c][k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = a[i][n] / a[i][i];
    return x;
}

inline std::string table_csv(const std::vector<std::string>& codes,
                             const std::vector<std::vector<double>>& rows) {
    std::ostringstream o;
    o << "code";
    for (const auto& c : codes)
        o << ',' << c;
    o << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        o << codes[i];
        for (double w : rows[i])
            o << ',' << w;
        o << '\n';
    }
    return o.str();
}

} // namespace prodnet::testing
