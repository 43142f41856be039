#include "prodnet/error.hpp"
#include "prodnet/nullmodels.hpp"

#include "support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace prodnet;

namespace {

std::string export_edges(const ProductionNetwork& g) {
    std::ostringstream o;
    write_edge_list(o, g);
    return o.str();
}

double median_positive(std::vector<double> v) {
    std::erase_if(v, [](double x) { return x < 1.0; });
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

// Forward exponent relations of the growth process.
std::pair<double, double> exponents(const ScaleFreeParams& p) {
    const double c_in = 1.0 + (1.0 + p.delta_in * (p.alpha + p.gamma)) / (p.alpha + p.beta);
    const double c_out = 1.0 + (1.0 + p.delta_out * (p.alpha + p.gamma)) / (p.beta + p.gamma);
    return {c_in, c_out};
}

} // namespace

TEST_CASE("gen_random: capacity-forced complete graph") {
    for (std::uint64_t seed : {0ULL, 1ULL, 12345ULL}) {
        const auto g = gen_random(3, 6, seed);
        CHECK(g.graph.node_count() == 3);
        CHECK(g.graph.edge_count() == 6);
        CHECK(testing::edge_codes(g.graph).size() == 6);
    }
    CHECK_THROWS_AS(gen_random(3, 7, 1), CapacityError);
    CHECK_THROWS_AS(gen_random(1, 1, 1), CapacityError);
    CHECK(gen_random(1, 0, 1).graph.node_count() == 1);
}

TEST_CASE("gen_random: exact sizes and determinism") {
    const auto g = gen_random(70, 60, 5);
    CHECK(g.graph.node_count() == 70);
    CHECK(g.graph.edge_count() == 60);
    CHECK(g.raw_edges == 60);
    CHECK(std::get<GraphSize>(g.params).edges == 60);

    CHECK(export_edges(gen_random(10, 20, 77).graph) == export_edges(gen_random(10, 20, 77).graph));
    CHECK(export_edges(gen_random(10, 20, 77).graph) != export_edges(gen_random(10, 20, 78).graph));

    // Dense requests go through the complement path.
    const auto dense = gen_random(30, 800, 3);
    CHECK(dense.graph.edge_count() == 800);
    for (const auto& e : dense.graph.edges())
        CHECK(e.source != e.target);
}

TEST_CASE("gen_scale_free degenerate and forced cases") {
    const auto one = gen_scale_free(1, ScaleFreeParams{}, 9);
    CHECK(one.graph.node_count() == 1);
    CHECK(one.graph.edge_count() == 0);
    CHECK(one.raw_edges == 0);

    const ScaleFreeParams tree{1.0, 0.0, 0.0, 1.0, 0.0};
    const auto t = gen_scale_free(50, tree, 4);
    CHECK(t.raw_edges == 49);
    CHECK(t.graph.edge_count() == 49);
    // Every node except the root has exactly one out-edge.
    const auto out = degrees(t.graph, Direction::out, false).values;
    CHECK(out[0] == 0.0);
    CHECK(std::all_of(out.begin() + 1, out.end(), [](double d) { return d == 1.0; }));

    // Zero deltas with an empty graph fall back to uniform choices.
    const auto gamma_only = gen_scale_free(20, ScaleFreeParams{0.0, 0.0, 1.0, 0.0, 0.0}, 2);
    CHECK(gamma_only.graph.node_count() == 20);
}

TEST_CASE("gen_scale_free invariants") {
    const ScaleFreeParams p{};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 1 + seed * 37;
        const auto g = gen_scale_free(n, p, seed);
        CHECK(g.graph.node_count() == n);
        CHECK(g.graph.edge_count() <= g.raw_edges);
        // Each step adds one edge and new nodes come from alpha/gamma steps only.
        CHECK(g.raw_edges >= n - 1);
    }
    CHECK(export_edges(gen_scale_free(300, p, 8).graph) ==
          export_edges(gen_scale_free(300, p, 8).graph));
    CHECK_THROWS_AS(gen_scale_free(10, ScaleFreeParams{0.0, 1.0, 0.0, 0.2, 0.0}, 1), RangeError);
    CHECK_THROWS_AS(gen_scale_free(10, ScaleFreeParams{0.5, 0.6, -0.1, 0.2, 0.0}, 1), RangeError);
}

TEST_CASE("gen_scale_free out-degree is heavy tailed at n=405") {
    const ScaleFreeParams p{};
    int heavy = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto g = gen_scale_free(405, p, 1000 + seed);
        const auto out = degrees(g.graph, Direction::out, false).values;
        const double mx = *std::max_element(out.begin(), out.end());
        if (mx >= 10.0 * median_positive(out))
            ++heavy;
    }
    CHECK(heavy >= 27);
}

TEST_CASE("hurwitz_zeta against independent references") {
    CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-14));
    CHECK(hurwitz_zeta(3.0, 1.0) == doctest::Approx(boost::math::zeta(3.0)).epsilon(1e-14));
    CHECK(hurwitz_zeta(1.5, 1.0) == doctest::Approx(boost::math::zeta(1.5)).epsilon(1e-13));
    CHECK(hurwitz_zeta(2.0, 2.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0 - 1.0).epsilon(1e-14));

    // Direct summation with an integral tail.
    for (auto [s, q] : {std::pair{2.5, 3.7}, std::pair{1.2, 1.0}, std::pair{7.0, 0.5}, std::pair{2.05, 40.0}}) {
        const long terms = 2000000;
        double sum = 0.0;
        for (long k = terms - 1; k >= 0; --k)
            sum += std::pow(q + static_cast<double>(k), -s);
        const double a = q + static_cast<double>(terms);
        sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
        CHECK(hurwitz_zeta(s, q) == doctest::Approx(sum).epsilon(1e-10));
    }
    CHECK_THROWS_AS(hurwitz_zeta(1.0, 1.0), RangeError);
}

TEST_CASE("fit_power_law recovers a discrete power law") {
    // Approximate discrete sampler: round a continuous Pareto from x_min - 1/2.
    std::mt19937_64 gen(31);
    std::vector<double> data;
    for (int i = 0; i < 20000; ++i) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        data.push_back(std::floor(0.5 * std::pow(1.0 - u, -1.0 / 1.5) + 0.5));
    }
    const auto fit = fit_power_law(data);
    CHECK(fit.exponent == doctest::Approx(2.5).epsilon(0.1 / 2.5));
    CHECK(fit.x_min >= 1);
    CHECK(fit.tail_size >= 10);
}

TEST_CASE("fit_power_law rejects degenerate samples") {
    const std::vector<double> flat(100, 1.0);
    CHECK_THROWS_AS(fit_power_law(flat), FitError);
    const std::vector<double> zeros(100, 0.0);
    CHECK_THROWS_AS(fit_power_law(zeros), FitError);
    CHECK_THROWS_AS(power_law_mle(flat, 1), FitError);
}

TEST_CASE("solve_params inverts the exponent relations") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        double a = u(gen), b = u(gen), c = u(gen);
        const double s = a + b + c;
        const ScaleFreeParams truth{a / s, b / s, c / s, 2.0 * u(gen), 2.0 * u(gen)};
        const auto [c_in, c_out] = exponents(truth);
        const auto fit = solve_params(c_in, c_out, truth.delta_in, truth.delta_out);
        CHECK_FALSE(fit.clamped);
        CHECK(fit.params.alpha == doctest::Approx(truth.alpha).epsilon(1e-9));
        CHECK(fit.params.beta == doctest::Approx(truth.beta).epsilon(1e-9));
        CHECK(fit.params.gamma == doctest::Approx(truth.gamma).epsilon(1e-9));
        CHECK_NOTHROW(fit.params.validate());
    }
}

TEST_CASE("solve_params clamps onto the simplex boundary") {
    // c_in = c_out = 2 with zero deltas forces beta = 1, alpha = gamma = 0.
    const auto fit = solve_params(2.0, 2.0, 0.0, 0.0);
    CHECK(fit.clamped);
    CHECK_FALSE(fit.warnings.empty());
    CHECK(fit.params.alpha == doctest::Approx(fit.params.gamma));
    CHECK(fit.params.alpha > 0.0);
    CHECK(fit.params.alpha == doctest::Approx(simplex_floor).epsilon(0.01));
    CHECK(fit.params.beta == doctest::Approx(1.0).epsilon(0.01));
    CHECK_NOTHROW(fit.params.validate());

    CHECK_THROWS_AS(solve_params(1.0, 2.0, 0.2, 0.0), FitError);
    CHECK_THROWS_AS(solve_params(2.0, 0.5, 0.2, 0.0), FitError);
    CHECK_THROWS_AS(solve_params(std::nan(""), 2.0, 0.2, 0.0), FitError);
}

TEST_CASE("fit_params rejects graphs without a power-law tail") {
    std::vector<IndustryMeta> nodes;
    std::vector<Edge> edges;
    for (std::size_t v = 0; v < 30; ++v) {
        nodes.push_back({testing::node_code(v), ""});
        edges.push_back({v, (v + 1) % 30, 1.0});
    }
    CHECK_THROWS_AS(fit_params(ProductionNetwork(nodes, edges)), FitError);

    const auto small = gen_scale_free(8, ScaleFreeParams{}, 1);
    CHECK_THROWS_AS(fit_params(small.graph), FitError);
}

TEST_CASE("fit_params on a generated graph yields valid parameters and JSON") {
    const auto g = gen_scale_free(3000, ScaleFreeParams{}, 99);
    const auto fit = fit_params(g.graph, 0.2, 0.0);
    CHECK_NOTHROW(fit.params.validate());
    CHECK(fit.c_in > 1.0);
    CHECK(fit.c_out > 1.0);

    const auto j = nlohmann::json::parse(fit_to_json(fit));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items())
        keys.push_back(k);
    CHECK(keys.size() == 9);
    CHECK(j.at("delta_in").get<double>() == 0.2);
    CHECK(j.at("x_min_out").get<int>() == fit.x_min_out);
}
