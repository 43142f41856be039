#include "prodnet/stats.hpp"

#include "prodnet/csv.hpp"
#include "prodnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace prodnet {

KSResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw EmptySampleError("KS test needs two non-empty samples");

    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());

    const auto n1 = x.size();
    const auto n2 = y.size();
    std::size_t i = 0;
    std::size_t j = 0;
    // |i/n1 - j/n2| is tracked as the integer |i*n2 - j*n1| so the supremum is
    // found exactly; the single division happens at the end.
    std::size_t best = 0;
    while (i < n1 || j < n2) {
        double v;
        if (j == n2 || (i < n1 && x[i] <= y[j]))
            v = x[i];
        else
            v = y[j];
        while (i < n1 && x[i] == v)
            ++i;
        while (j < n2 && y[j] == v)
            ++j;
        const std::size_t lhs = i * n2;
        const std::size_t rhs = j * n1;
        best = std::max(best, lhs > rhs ? lhs - rhs : rhs - lhs);
    }
    const double d = static_cast<double>(best) /
                     (static_cast<double>(n1) * static_cast<double>(n2));

    KSResult r;
    r.statistic = std::clamp(d, 0.0, 1.0);
    r.n1 = n1;
    r.n2 = n2;
    const double ne = static_cast<double>(n1) * static_cast<double>(n2) /
                      static_cast<double>(n1 + n2);
    r.p_value = kolmogorov_survival(std::sqrt(ne) * r.statistic);
    return r;
}

double kolmogorov_survival(double lambda) {
    constexpr double eps = 1e-12;
    if (lambda <= 0.0)
        return 1.0;
    if (lambda < 1.18) {
        // Jacobi theta form of the CDF converges fast for small lambda.
        constexpr double pi2_8 = std::numbers::pi * std::numbers::pi / 8.0;
        const double w = std::sqrt(2.0 * std::numbers::pi) / lambda;
        double cdf = 0.0;
        for (int k = 1; k < 100; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = w * std::exp(-odd * odd * pi2_8 / (lambda * lambda));
            cdf += term;
            if (term < eps)
                break;
        }
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double q = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 100; ++k) {
        const double term = 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
        q += sign * term;
        sign = -sign;
        if (term < eps)
            break;
    }
    return std::clamp(q, 0.0, 1.0);
}

std::vector<double> degree_sample(const ProductionNetwork& net, Direction direction,
                                  bool weighted, bool exclude_zeros) {
    auto values = degrees(net, direction, weighted).values;
    if (exclude_zeros)
        std::erase_if(values, [](double v) { return v == 0.0; });
    return values;
}

BinnedDistribution log_binned(std::span<const double> sample, int bins_per_decade) {
    if (bins_per_decade <= 0)
        throw RangeError("bins_per_decade must be positive");
    BinnedDistribution dist;
    dist.scale = BinScale::log;

    std::vector<double> values;
    values.reserve(sample.size());
    for (double v : sample) {
        if (v > 0.0)
            values.push_back(v);
        else
            ++dist.excluded_zeros;
    }
    if (values.empty())
        throw EmptySampleError("no positive values to bin (" +
                               std::to_string(dist.excluded_zeros) + " zeros excluded)");

    const double bpd = bins_per_decade;
    const auto edge = [bpd](long k) { return std::pow(10.0, static_cast<double>(k) / bpd); };
    // Index of the bin containing v, corrected for log10 rounding.
    const auto index_of = [&](double v) {
        auto k = static_cast<long>(std::floor(std::log10(v) * bpd));
        while (v < edge(k))
            --k;
        while (v >= edge(k + 1))
            ++k;
        return k;
    };

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const long first = index_of(*lo_it);
    const long last = index_of(*hi_it);
    const auto bins = static_cast<std::size_t>(last - first + 1);

    dist.bin_edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
        dist.bin_edges[b] = edge(first + static_cast<long>(b));
    dist.counts.assign(bins, 0);
    for (double v : values)
        ++dist.counts[static_cast<std::size_t>(index_of(v) - first)];

    const double n = static_cast<double>(values.size());
    dist.densities.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const double width = dist.bin_edges[b + 1] - dist.bin_edges[b];
        dist.densities[b] = static_cast<double>(dist.counts[b]) / (n * width);
    }
    return dist;
}

void write_distribution(std::ostream& out, const BinnedDistribution& dist) {
    csv::write_row(out, {"bin_left", "bin_right", "density"});
    for (std::size_t b = 0; b < dist.densities.size(); ++b) {
        csv::write_row(out, {csv::format_report(dist.bin_edges[b]),
                             csv::format_report(dist.bin_edges[b + 1]),
                             csv::format_report(dist.densities[b])});
    }
}

} // namespace prodnet
