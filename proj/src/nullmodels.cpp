#include "prodnet/nullmodels.hpp"

#include "prodnet/csv.hpp"
#include "prodnet/error.hpp"
#include "prodnet/rng.hpp"

#include <json.hpp>

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_set>

namespace prodnet {

void ScaleFreeParams::validate() const {
    for (double p : {alpha, beta, gamma}) {
        if (!(p >= 0.0 && p <= 1.0))
            throw RangeError("alpha, beta, gamma must lie in [0, 1]");
    }
    if (std::abs(alpha + beta + gamma - 1.0) > 1e-9)
        throw RangeError("alpha + beta + gamma must equal 1");
    if (!(alpha + gamma > 0.0))
        throw RangeError("alpha + gamma must be positive or the graph never grows");
    if (!(delta_in >= 0.0) || !(delta_out >= 0.0))
        throw RangeError("delta_in and delta_out must be non-negative");
}

const char* to_string(NullModel m) { return m == NullModel::random ? "random" : "scale_free"; }

namespace {

std::vector<IndustryMeta> index_nodes(std::size_t n) {
    std::vector<IndustryMeta> nodes(n);
    for (std::size_t v = 0; v < n; ++v)
        nodes[v].code = nodes[v].name = std::to_string(v);
    return nodes;
}

} // namespace

GeneratedGraph gen_random(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n == 0)
        throw RangeError("random graph needs at least one node");
    const std::uint64_t capacity = static_cast<std::uint64_t>(n) * (n - 1);
    if (m > capacity) {
        throw CapacityError("cannot place " + std::to_string(m) + " edges on " +
                            std::to_string(n) + " nodes (at most " + std::to_string(capacity) +
                            ")");
    }

    Rng rng(seed);
    // Floyd's sampling of m distinct slot indices; past half capacity the
    // complement is sampled instead.
    const bool complement = m > capacity / 2;
    const std::uint64_t draws = complement ? capacity - m : m;
    std::unordered_set<std::uint64_t> picked;
    picked.reserve(draws * 2);
    for (std::uint64_t j = capacity - draws; j < capacity; ++j) {
        const std::uint64_t t = rng.below(j + 1);
        if (!picked.insert(t).second)
            picked.insert(j);
    }

    std::vector<std::uint64_t> slots;
    slots.reserve(m);
    if (complement) {
        for (std::uint64_t s = 0; s < capacity; ++s) {
            if (!picked.contains(s))
                slots.push_back(s);
        }
    } else {
        slots.assign(picked.begin(), picked.end());
    }

    // Slot s encodes source s / (n-1) and the s % (n-1)-th other node.
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::uint64_t s : slots) {
        const auto u = static_cast<std::size_t>(s / (n - 1));
        const auto r = static_cast<std::size_t>(s % (n - 1));
        edges.push_back({u, r < u ? r : r + 1, 1.0});
    }

    GeneratedGraph g;
    g.graph = ProductionNetwork(index_nodes(n), std::move(edges));
    g.model = NullModel::random;
    g.seed = seed;
    g.params = GraphSize{n, m};
    g.raw_edges = m;
    return g;
}

GeneratedGraph gen_scale_free(std::size_t n, const ScaleFreeParams& params, std::uint64_t seed) {
    params.validate();
    if (n == 0)
        throw RangeError("scale-free graph needs at least one node");

    Rng rng(seed);
    // Each edge's head (tail) is listed once in `heads` (`tails`), so a uniform
    // pick from the list is a pick proportional to in-degree (out-degree).
    std::vector<std::size_t> heads;
    std::vector<std::size_t> tails;
    std::size_t count = 1;

    const auto attach = [&](const std::vector<std::size_t>& endpoints, double delta) {
        const double degree_mass = static_cast<double>(endpoints.size());
        const double total = degree_mass + delta * static_cast<double>(count);
        if (total <= 0.0)
            return static_cast<std::size_t>(rng.below(count));
        if (rng.uniform01() * total < degree_mass)
            return endpoints[rng.below(endpoints.size())];
        return static_cast<std::size_t>(rng.below(count));
    };

    while (count < n) {
        const double r = rng.uniform01();
        std::size_t v;
        std::size_t w;
        if (r < params.alpha) {
            w = attach(heads, params.delta_in);
            v = count++;
        } else if (r < params.alpha + params.beta) {
            v = attach(tails, params.delta_out);
            w = attach(heads, params.delta_in);
        } else {
            v = attach(tails, params.delta_out);
            w = count++;
        }
        tails.push_back(v);
        heads.push_back(w);
    }

    std::vector<Edge> edges;
    edges.reserve(heads.size());
    for (std::size_t k = 0; k < heads.size(); ++k) {
        if (tails[k] != heads[k])
            edges.push_back({tails[k], heads[k], 1.0});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const Edge& a, const Edge& b) {
                                return a.source == b.source && a.target == b.target;
                            }),
                edges.end());

    GeneratedGraph g;
    g.graph = ProductionNetwork(index_nodes(n), std::move(edges));
    g.model = NullModel::scale_free;
    g.seed = seed;
    g.params = params;
    g.raw_edges = heads.size();
    return g;
}

double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0))
        throw RangeError("hurwitz_zeta needs s > 1 and q > 0");
    // Euler-Maclaurin: direct sum of the first terms, integral tail, then
    // Bernoulli corrections B_2 .. B_16.
    constexpr int direct = 12;
    constexpr std::array<double, 8> bernoulli_over_factorial = {
        1.0 / 6.0 / 2.0,
        -1.0 / 30.0 / 24.0,
        1.0 / 42.0 / 720.0,
        -1.0 / 30.0 / 40320.0,
        5.0 / 66.0 / 3628800.0,
        -691.0 / 2730.0 / 479001600.0,
        7.0 / 6.0 / 87178291200.0,
        -3617.0 / 510.0 / 20922789888000.0,
    };
    double sum = 0.0;
    for (int k = 0; k < direct; ++k)
        sum += std::pow(q + k, -s);
    const double a = q + direct;
    sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
    double rising = s;                // s (s+1) ... (s+2j-2)
    double power = std::pow(a, -s - 1.0); // a^(-s-2j+1)
    for (std::size_t j = 0; j < bernoulli_over_factorial.size(); ++j) {
        const double term = bernoulli_over_factorial[j] * rising * power;
        sum += term;
        if (std::abs(term) < 1e-17 * sum)
            break;
        const double next = 2.0 * static_cast<double>(j) + 1.0;
        rising *= (s + next) * (s + next + 1.0);
        power /= a * a;
    }
    return sum;
}

namespace {

constexpr double exponent_lo = 1.0 + 1e-6;
constexpr double exponent_hi = 50.0;

double tail_ks_distance(const std::vector<double>& tail, int x_min, double exponent) {
    // tail is sorted ascending, all integers >= x_min. Compare the empirical
    // and fitted CDFs at every integer in [x_min, max].
    const double z = hurwitz_zeta(exponent, x_min);
    const double n = static_cast<double>(tail.size());
    const auto x_max = static_cast<long>(tail.back());
    double mass = 0.0;
    double d = 0.0;
    std::size_t i = 0;
    for (long x = x_min; x <= x_max; ++x) {
        mass += std::pow(static_cast<double>(x), -exponent);
        while (i < tail.size() && tail[i] <= static_cast<double>(x))
            ++i;
        const double fitted = std::min(1.0, mass / z);
        d = std::max(d, std::abs(static_cast<double>(i) / n - fitted));
    }
    return d;
}

} // namespace

double power_law_mle(std::span<const double> tail, int x_min) {
    if (tail.empty())
        throw EmptySampleError("power-law fit needs a non-empty tail");
    double log_sum = 0.0;
    bool all_at_min = true;
    for (double x : tail) {
        all_at_min = all_at_min && x == x_min;
        if (x < x_min)
            throw RangeError("tail value below x_min");
        log_sum += std::log(x);
    }
    // The likelihood increases without bound in c when nothing exceeds x_min.
    if (all_at_min)
        throw FitError("power-law tail has no values above x_min", exponent_hi, exponent_hi);
    const double n = static_cast<double>(tail.size());
    const auto negative_log_likelihood = [&](double c) {
        return n * std::log(hurwitz_zeta(c, x_min)) + c * log_sum;
    };
    const auto [c, value] =
        boost::math::tools::brent_find_minima(negative_log_likelihood, exponent_lo, exponent_hi, 52);
    (void)value;
    if (c > exponent_hi - 0.1)
        throw FitError("power-law likelihood has no interior maximum", c, c);
    return c;
}

PowerLawFit fit_power_law(std::span<const double> degrees, std::size_t min_tail) {
    std::vector<double> values;
    for (double v : degrees) {
        if (v > 0.0)
            values.push_back(std::round(v));
    }
    std::sort(values.begin(), values.end());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (values.empty() || values.front() == values.back())
        throw FitError("degree sample has no power-law tail (fewer than two distinct values)",
                       nan, nan);

    std::optional<PowerLawFit> best;
    for (std::size_t start = 0; start < values.size();) {
        const double x_min = values[start];
        const std::size_t tail_size = values.size() - start;
        if (tail_size < std::max<std::size_t>(min_tail, 2) || x_min == values.back())
            break;
        std::vector<double> tail(values.begin() + static_cast<long>(start), values.end());
        const int xm = static_cast<int>(x_min);
        try {
            const double c = power_law_mle(tail, xm);
            const double d = tail_ks_distance(tail, xm, c);
            if (!best || d < best->ks_distance)
                best = PowerLawFit{c, xm, tail_size, d};
        } catch (const FitError&) {
        }
        while (start < values.size() && values[start] == x_min)
            ++start;
    }
    if (!best)
        throw FitError("no candidate tail admits a power-law fit", nan, nan);
    return *best;
}

ScaleFreeFit solve_params(double c_in, double c_out, double delta_in, double delta_out) {
    const double a = c_in - 1.0;
    const double b = c_out - 1.0;
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw FitError("tail exponents must be finite and greater than 1", c_in, c_out);
    if (!(delta_in >= 0.0) || !(delta_out >= 0.0))
        throw RangeError("delta_in and delta_out must be non-negative");

    // With s = alpha + gamma: alpha + beta = 1 - gamma, beta + gamma = 1 - alpha,
    // and summing the two relations gives a linear equation in s.
    const double s = (2.0 - 1.0 / a - 1.0 / b) / (1.0 + delta_in / a + delta_out / b);
    const double alpha = 1.0 - (1.0 + delta_out * s) / b;
    const double gamma = 1.0 - (1.0 + delta_in * s) / a;
    const double beta = 1.0 - s;

    ScaleFreeFit fit;
    fit.c_in = c_in;
    fit.c_out = c_out;
    fit.params.delta_in = delta_in;
    fit.params.delta_out = delta_out;

    std::array<double, 3> p = {alpha, beta, gamma};
    for (double v : p) {
        if (!std::isfinite(v))
            throw FitError("exponent relations have no finite solution", c_in, c_out);
    }
    if (std::any_of(p.begin(), p.end(), [](double v) { return v < simplex_floor || v > 1.0; })) {
        fit.clamped = true;
        fit.warnings.push_back("raw solution (alpha=" + csv::format_report(alpha) +
                               ", beta=" + csv::format_report(beta) +
                               ", gamma=" + csv::format_report(gamma) +
                               ") clamped into the simplex");
        double total = 0.0;
        for (double& v : p) {
            v = std::clamp(v, simplex_floor, 1.0);
            total += v;
        }
        for (double& v : p)
            v /= total;
    }
    fit.params.alpha = p[0];
    fit.params.beta = p[1];
    fit.params.gamma = 1.0 - p[0] - p[1];
    try {
        fit.params.validate();
    } catch (const RangeError& e) {
        throw FitError(std::string("no valid parameters after clamping: ") + e.what(), c_in, c_out);
    }
    return fit;
}

ScaleFreeFit fit_params(const ProductionNetwork& net, double delta_in, double delta_out) {
    const auto out = degrees(net, Direction::out, false).values;
    const auto in = degrees(net, Direction::in, false).values;
    const auto positive_out =
        static_cast<std::size_t>(std::count_if(out.begin(), out.end(), [](double v) { return v > 0; }));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (positive_out < 10) {
        throw FitError("need at least 10 nodes with positive out-degree, have " +
                           std::to_string(positive_out),
                       nan, nan);
    }

    PowerLawFit fit_in;
    PowerLawFit fit_out;
    try {
        fit_out = fit_power_law(out);
    } catch (const FitError& e) {
        throw FitError(std::string("out-degree: ") + e.what(), nan, nan);
    }
    try {
        fit_in = fit_power_law(in);
    } catch (const FitError& e) {
        throw FitError(std::string("in-degree: ") + e.what(), nan, fit_out.exponent);
    }

    auto result = solve_params(fit_in.exponent, fit_out.exponent, delta_in, delta_out);
    result.x_min_in = fit_in.x_min;
    result.x_min_out = fit_out.x_min;
    return result;
}

std::string fit_to_json(const ScaleFreeFit& fit) {
    nlohmann::ordered_json j;
    j["alpha"] = fit.params.alpha;
    j["beta"] = fit.params.beta;
    j["gamma"] = fit.params.gamma;
    j["delta_in"] = fit.params.delta_in;
    j["delta_out"] = fit.params.delta_out;
    j["c_in"] = fit.c_in;
    j["c_out"] = fit.c_out;
    j["x_min_in"] = fit.x_min_in;
    j["x_min_out"] = fit.x_min_out;
    return j.dump(2);
}

} // namespace prodnet
