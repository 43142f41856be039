#pragma once

#include "prodnet/graph.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace prodnet {

struct KSResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

// Two-sample Kolmogorov-Smirnov test. The statistic is sup |F_a - F_b| over
// the pooled sample, evaluated after every run of tied values is consumed.
// The p-value is the asymptotic Kolmogorov tail at sqrt(n1*n2/(n1+n2)) * D.
KSResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Asymptotic Kolmogorov survival function Q(lambda) = P(K > lambda).
double kolmogorov_survival(double lambda);

// Per-node degree (or strength) values of every node in the graph. With
// exclude_zeros, nodes whose value is 0 are left out.
std::vector<double> degree_sample(const ProductionNetwork& net, Direction direction,
                                  bool weighted, bool exclude_zeros = false);

enum class BinScale { linear, log };

struct BinnedDistribution {
    std::vector<double> bin_edges;
    std::vector<double> densities;
    std::vector<std::size_t> counts;
    BinScale scale = BinScale::log;
    Direction direction = Direction::out;
    bool weighted = true;
    // Non-positive values that were dropped before binning.
    std::size_t excluded_zeros = 0;
};

// Bins of equal width in log10 space, bins_per_decade per decade, aligned to
// powers of ten (edges at 10^(k/bins_per_decade)) and covering [min, max].
// Bins are left-closed. density = count / (n * width), so the density
// integrates to 1.
BinnedDistribution log_binned(std::span<const double> sample, int bins_per_decade);

// CSV [bin_left, bin_right, density].
void write_distribution(std::ostream& out, const BinnedDistribution& dist);

} // namespace prodnet
