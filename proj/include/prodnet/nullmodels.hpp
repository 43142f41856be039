#pragma once

#include "prodnet/graph.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace prodnet {

// Parameters of the directed preferential-attachment growth process.
//   alpha: new node with an edge to an existing node
//   beta:  edge between two existing nodes
//   gamma: new node with an edge from an existing node
// delta_in / delta_out bias the in- and out-degree attachment weights.
struct ScaleFreeParams {
    double alpha = 0.41;
    double beta = 0.54;
    double gamma = 0.05;
    double delta_in = 0.2;
    double delta_out = 0.0;

    // Throws RangeError unless all are in [0,1], sum to 1 within 1e-9,
    // alpha + gamma > 0 and both deltas are non-negative.
    void validate() const;

    bool operator==(const ScaleFreeParams&) const = default;
};

enum class NullModel { random, scale_free };

const char* to_string(NullModel m);

struct GraphSize {
    std::size_t nodes = 0;
    std::size_t edges = 0;
};

struct GeneratedGraph {
    ProductionNetwork graph; // unit weights, node codes "0".."n-1"
    NullModel model = NullModel::random;
    std::uint64_t seed = 0;
    std::variant<GraphSize, ScaleFreeParams> params;
    // Edges drawn before self-loops and parallel edges were removed. Equals
    // the edge count for the random model.
    std::size_t raw_edges = 0;
};

// Uniform sample from all simple directed graphs with n nodes and m edges.
GeneratedGraph gen_random(std::size_t n, std::size_t m, std::uint64_t seed);

// Grows from a single isolated node, one edge per step, until n nodes exist,
// then drops self-loops and collapses parallel edges.
GeneratedGraph gen_scale_free(std::size_t n, const ScaleFreeParams& params, std::uint64_t seed);

// Hurwitz zeta sum_{k>=0} (q+k)^-s for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

// Discrete power law P(x) = x^-exponent / zeta(exponent, x_min), x >= x_min.
struct PowerLawFit {
    double exponent = 0.0;
    int x_min = 1;
    std::size_t tail_size = 0;
    double ks_distance = 0.0;
};

// Maximum-likelihood exponent for the tail x >= x_min of positive integer
// data; x_min minimizes the KS distance between the tail and its fit.
// Candidate x_min values keep at least min_tail points. Throws FitError when
// no candidate tail has two distinct values or the likelihood has no interior
// maximum.
PowerLawFit fit_power_law(std::span<const double> degrees, std::size_t min_tail = 10);

// Exponent MLE for a fixed x_min.
double power_law_mle(std::span<const double> tail, int x_min);

struct ScaleFreeFit {
    ScaleFreeParams params;
    double c_in = 0.0;
    double c_out = 0.0;
    int x_min_in = 1;
    int x_min_out = 1;
    bool clamped = false;
    std::vector<std::string> warnings;
};

// Lower bound applied to each of alpha, beta, gamma when clamping.
inline constexpr double simplex_floor = 1e-3;

// Inverts the tail-exponent relations of the growth process
//   c_in  = 1 + (1 + delta_in  (alpha+gamma)) / (alpha+beta)
//   c_out = 1 + (1 + delta_out (alpha+gamma)) / (beta+gamma)
// under alpha+beta+gamma = 1, then clamps into the simplex.
ScaleFreeFit solve_params(double c_in, double c_out, double delta_in, double delta_out);

// Fits in/out tail exponents of net's unweighted degrees and solves for the
// growth probabilities. Needs at least 10 nodes with positive out-degree.
ScaleFreeFit fit_params(const ProductionNetwork& net, double delta_in = 0.2,
                        double delta_out = 0.0);

// JSON {alpha, beta, gamma, delta_in, delta_out, c_in, c_out, x_min_in, x_min_out}.
std::string fit_to_json(const ScaleFreeFit& fit);

} // namespace prodnet
