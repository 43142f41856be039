#include "prodnet/error.hpp"
#include "prodnet/graph.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace prodnet;
using prodnet::testing::edge_codes;
using prodnet::testing::node_codes;

namespace {

InputOutputTable table_of(const std::vector<std::string>& codes,
                          const std::vector<std::vector<double>>& rows) {
    std::istringstream in(testing::table_csv(codes, rows));
    return parse_table(in);
}

ProductionNetwork star(double weight) {
    std::vector<IndustryMeta> nodes = {{"HUB", "hub"}};
    std::vector<Edge> edges;
    for (std::size_t s = 1; s <= 5; ++s) {
        nodes.push_back({"S" + std::to_string(s), "spoke"});
        edges.push_back({0, s, weight});
    }
    return ProductionNetwork(nodes, edges);
}

} // namespace

TEST_CASE("build_network points supplier to buyer and drops the diagonal") {
    const auto net = build_network(table_of({"A", "B"}, {{0.5, 0.2}, {0.3, 0.0}}));
    REQUIRE(net.node_count() == 2);
    REQUIRE(net.edge_count() == 2);
    // w_AB = 0.2: A requires from B, so B -> A.
    CHECK(net.edges()[0] == Edge{0, 1, 0.3});
    CHECK(net.edges()[1] == Edge{1, 0, 0.2});
}

TEST_CASE("build_network min_weight is strict") {
    const std::vector<std::vector<double>> rows = {
        {0, 0.01, 0.01}, {0.01, 0, 0.01}, {0.01, 0.01, 0}};
    const auto t = table_of({"A", "B", "C"}, rows);
    CHECK(build_network(t, 0.05).edge_count() == 0);
    CHECK(build_network(t, 0.05).node_count() == 3);
    CHECK(build_network(t, 0.01).edge_count() == 0);
    CHECK(build_network(t, 0.0).edge_count() == 6);
}

TEST_CASE("network invariants are enforced") {
    const std::vector<IndustryMeta> nodes = {{"A", ""}, {"B", ""}};
    CHECK_THROWS_AS(ProductionNetwork(nodes, {{0, 0, 1.0}}), RangeError);
    CHECK_THROWS_AS(ProductionNetwork(nodes, {{0, 1, 1.0}, {0, 1, 2.0}}), RangeError);
    CHECK_THROWS_AS(ProductionNetwork(nodes, {{0, 1, 0.0}}), RangeError);
    CHECK_THROWS_AS(ProductionNetwork(nodes, {{0, 2, 1.0}}), RangeError);
}

TEST_CASE("prune keeps weight >= zeta and drops isolated nodes") {
    const std::vector<IndustryMeta> nodes = {{"A", ""}, {"B", ""}, {"C", ""}, {"D", ""}};
    const ProductionNetwork net(nodes, {{0, 1, 0.5}, {1, 2, 0.2}, {2, 0, 0.7}, {3, 0, 0.1}});

    const auto p = prune(net, 0.5);
    CHECK(edge_codes(p) == std::set<std::pair<std::string, std::string>>{{"A", "B"}, {"C", "A"}});
    CHECK(node_codes(p) == std::set<std::string>{"A", "B", "C"});

    const auto strict = prune(net, 0.5, true, CutMode::greater_than);
    CHECK(edge_codes(strict) == std::set<std::pair<std::string, std::string>>{{"C", "A"}});
    CHECK(strict.node_count() == 2);

    const auto kept = prune(net, 0.5, false);
    CHECK(kept.node_count() == 4);
    CHECK(kept.nodes() == net.nodes());

    CHECK(prune(net, 0.0, false) == net);
    CHECK(prune(net, 10.0).empty());
}

TEST_CASE("degrees of a star") {
    const auto net = star(0.1);
    const auto out_s = degrees(net, Direction::out, true);
    const auto in_s = degrees(net, Direction::in, true);
    CHECK(out_s.values[0] == doctest::Approx(0.5));
    for (std::size_t s = 1; s <= 5; ++s) {
        CHECK(in_s.values[s] == doctest::Approx(0.1));
        CHECK(out_s.values[s] == 0.0);
    }
    CHECK(degrees(net, Direction::out, false).values[0] == 5.0);
}

TEST_CASE("degrees of an empty graph are zero") {
    const ProductionNetwork net({{"A", ""}, {"B", ""}}, {});
    for (auto d : {Direction::in, Direction::out}) {
        for (bool w : {false, true}) {
            const auto v = degrees(net, d, w).values;
            CHECK(v == std::vector<double>{0.0, 0.0});
        }
    }
    CHECK(degrees(ProductionNetwork{}, Direction::in, true).values.empty());
}

TEST_CASE("degrees match the brute-force edge scan on a random 20-node, 50-edge graph") {
    std::mt19937_64 gen(20);
    std::vector<IndustryMeta> nodes;
    for (std::size_t v = 0; v < 20; ++v)
        nodes.push_back({testing::node_code(v), ""});
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    while (pairs.size() < 50) {
        const std::size_t s = gen() % 20;
        const std::size_t t = gen() % 20;
        if (s != t)
            pairs.emplace(s, t);
    }
    std::vector<Edge> edges;
    for (auto [s, t] : pairs)
        edges.push_back({s, t, 0.001 * static_cast<double>(1 + gen() % 1000)});
    const ProductionNetwork net(nodes, edges);

    for (bool w : {false, true}) {
        const auto in = degrees(net, Direction::in, w).values;
        const auto out = degrees(net, Direction::out, w).values;
        const auto in_ref = testing::brute_degrees(net, true, w);
        const auto out_ref = testing::brute_degrees(net, false, w);
        for (std::size_t v = 0; v < 20; ++v) {
            CHECK(in[v] == doctest::Approx(in_ref[v]).epsilon(1e-12));
            CHECK(out[v] == doctest::Approx(out_ref[v]).epsilon(1e-12));
        }
    }
}

TEST_CASE("global balance and prune properties on random graphs") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 40; ++trial) {
        const auto net = testing::random_network(gen, 1 + gen() % 40, 0.2);
        const double total = net.total_weight();
        CHECK(degrees(net, Direction::in, false).sum() == static_cast<double>(net.edge_count()));
        CHECK(degrees(net, Direction::out, false).sum() == static_cast<double>(net.edge_count()));
        CHECK(degrees(net, Direction::in, true).sum() == doctest::Approx(total).epsilon(1e-9));
        CHECK(degrees(net, Direction::out, true).sum() == doctest::Approx(total).epsilon(1e-9));

        // build_network(min_weight = m) equals prune(build_network(0), m, >).
        const std::size_t n = net.node_count();
        std::vector<double> cells(n * n, 0.0);
        for (const auto& e : net.edges())
            cells[e.target * n + e.source] = e.weight;
        const InputOutputTable table(net.nodes(), cells);
        CHECK(build_network(table) == net);
        for (double m : {0.0, 1e-3, 0.01, 0.3}) {
            CHECK(build_network(table, m) ==
                  prune(build_network(table), m, false, CutMode::greater_than));
        }
    }
}

TEST_CASE("reverse swaps endpoints and is an involution") {
    std::mt19937_64 gen(3);
    const auto net = testing::random_network(gen, 15, 0.3);
    const auto r = reverse(net);
    CHECK(r.edge_count() == net.edge_count());
    CHECK(reverse(r) == net);
    CHECK(degrees(r, Direction::in, true).values == degrees(net, Direction::out, true).values);
}

TEST_CASE("edge and node list export") {
    const ProductionNetwork net({{"B", "Bee"}, {"A", "Ay, Inc"}, {"C", "Cee"}},
                                {{0, 1, 0.25}, {1, 2, 0.5}, {1, 0, 1.0 / 3.0}});
    std::ostringstream edges;
    write_edge_list(edges, net);
    CHECK(edges.str() ==
          "source_code,target_code,weight\n"
          "A,B,0.3333333333333333\n"
          "A,C,0.5\n"
          "B,A,0.25\n");
    std::ostringstream nodes;
    write_node_list(nodes, net);
    CHECK(nodes.str() == "code,name\nB,Bee\nA,\"Ay, Inc\"\nC,Cee\n");
}
