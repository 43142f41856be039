#include "prodnet/sweep.hpp"

#include "prodnet/csv.hpp"
#include "prodnet/error.hpp"
#include "prodnet/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace prodnet {

using json = nlohmann::ordered_json;

ThresholdGrid make_grid(double start, double stop, std::size_t count) {
    if (!(start >= 0.0) || !(stop > start) || !std::isfinite(stop))
        throw RangeError("grid needs 0 <= start < stop");
    if (count < 2)
        throw RangeError("grid needs at least two points");
    ThresholdGrid grid;
    grid.spec = GridSpec{start, stop, count};
    grid.values.resize(count);
    const double span = stop - start;
    const double steps = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        grid.values[i] = start + span * static_cast<double>(i) / steps;
    grid.values.back() = stop;
    return grid;
}

ThresholdGrid grid_from_values(std::vector<double> values) {
    if (values.empty())
        throw RangeError("grid needs at least one value");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
            throw RangeError("grid values must be finite and non-negative");
        if (i > 0 && !(values[i] > values[i - 1]))
            throw RangeError("grid values must be strictly ascending");
    }
    return ThresholdGrid{std::move(values), std::nullopt};
}

ThresholdGrid default_sweep_grid() { return make_grid(0.00001, 0.5, 100); }

ThresholdGrid default_centrality_grid() { return make_grid(0.0, 0.1, 6); }

ScaleFreeParams fallback_params(double delta_in, double delta_out) {
    return ScaleFreeParams{0.41, 0.54, 0.05, delta_in, delta_out};
}

namespace {

std::optional<KSSummary> summarize(const std::vector<KSResult>& runs) {
    if (runs.empty())
        return std::nullopt;
    KSSummary s;
    s.n1 = runs.front().n1;
    s.n2 = runs.front().n2;
    double sum = 0.0;
    double p_sum = 0.0;
    for (const auto& r : runs) {
        sum += r.statistic;
        p_sum += r.p_value;
    }
    const double n = static_cast<double>(runs.size());
    s.statistic = sum / n;
    s.p_value = p_sum / n;
    if (runs.size() > 1) {
        double ss = 0.0;
        for (const auto& r : runs)
            ss += (r.statistic - s.statistic) * (r.statistic - s.statistic);
        s.stddev = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

void add_flag(std::vector<std::string>& flags, const std::string& flag) {
    if (std::find(flags.begin(), flags.end(), flag) == flags.end())
        flags.push_back(flag);
}

SweepRecord sweep_one(const ProductionNetwork& net, double zeta, std::size_t index,
                      const SweepOptions& opts, const ScaleFreeParams& base_params,
                      bool base_fit_failed, bool base_fit_clamped) {
    SweepRecord rec;
    rec.zeta = zeta;
    rec.params = base_params;
    if (base_fit_failed)
        add_flag(rec.flags, "fit_fallback");
    // The assumed deltas could not reproduce the fitted exponents.
    if (base_fit_clamped && !opts.refit_per_zeta)
        add_flag(rec.flags, "fit_clamped");

    const auto pruned = prune(net, zeta, opts.drop_isolated, opts.cut);
    rec.nodes = pruned.node_count();
    rec.edges = pruned.edge_count();
    if (pruned.empty()) {
        add_flag(rec.flags, "empty_graph");
        return rec;
    }

    if (opts.refit_per_zeta) {
        try {
            const auto fit = fit_params(pruned, opts.delta_in, opts.delta_out);
            rec.params = fit.params;
            if (fit.clamped)
                add_flag(rec.flags, "fit_clamped");
        } catch (const FitError&) {
            add_flag(rec.flags, "refit_fallback");
        }
    }

    const auto observed_in = degree_sample(pruned, Direction::in, false, opts.exclude_zeros);
    const auto observed_out = degree_sample(pruned, Direction::out, false, opts.exclude_zeros);

    std::vector<KSResult> in_rand, out_rand, in_sf, out_sf;
    const auto compare = [&](const std::vector<double>& observed, const ProductionNetwork& g,
                             Direction d, std::vector<KSResult>& into) {
        const auto generated = degree_sample(g, d, false, opts.exclude_zeros);
        if (observed.empty() || generated.empty()) {
            add_flag(rec.flags, "empty_sample");
            return;
        }
        into.push_back(ks_two_sample(observed, generated));
    };

    for (int r = 0; r < opts.replicates; ++r) {
        const auto rep = static_cast<std::uint64_t>(r);
        const std::uint64_t seed_random = substream_seed(opts.seed, index, rep, 0);
        const std::uint64_t seed_sf = substream_seed(opts.seed, index, rep, 1);
        rec.seeds_random.push_back(seed_random);
        rec.seeds_sf.push_back(seed_sf);

        const auto random = gen_random(rec.nodes, rec.edges, seed_random);
        compare(observed_in, random.graph, Direction::in, in_rand);
        compare(observed_out, random.graph, Direction::out, out_rand);

        const auto sf = gen_scale_free(rec.nodes, rec.params, seed_sf);
        compare(observed_in, sf.graph, Direction::in, in_sf);
        compare(observed_out, sf.graph, Direction::out, out_sf);
    }
    // A partially empty comparison set is reported as missing.
    const auto complete = [&](const std::vector<KSResult>& runs) {
        return runs.size() == static_cast<std::size_t>(opts.replicates) ? summarize(runs)
                                                                         : std::nullopt;
    };
    rec.ks_in_random = complete(in_rand);
    rec.ks_out_random = complete(out_rand);
    rec.ks_in_sf = complete(in_sf);
    rec.ks_out_sf = complete(out_sf);
    return rec;
}

} // namespace

SweepResult run_sweep(const ProductionNetwork& net, const ThresholdGrid& grid,
                      const SweepOptions& options) {
    if (options.replicates < 1)
        throw RangeError("replicates must be at least 1");
    if (grid.values.empty())
        throw RangeError("empty threshold grid");
    grid_from_values(grid.values);

    SweepResult result;
    result.options = options;
    result.grid = grid;

    ScaleFreeParams base = fallback_params(options.delta_in, options.delta_out);
    bool fit_failed = false;
    try {
        result.base_fit = fit_params(net, options.delta_in, options.delta_out);
        base = result.base_fit->params;
    } catch (const FitError& e) {
        fit_failed = true;
        result.fit_error = e.what();
    }

    const std::size_t count = grid.values.size();
    result.records.resize(count);
    const auto workers = static_cast<std::size_t>(
        std::clamp<int>(options.threads, 1, static_cast<int>(std::min<std::size_t>(count, 256))));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                result.records[i] = sweep_one(net, grid.values[i], i, options, base, fit_failed,
                                              result.base_fit && result.base_fit->clamped);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);

    for (std::size_t i = 1; i < count; ++i) {
        if (result.records[i].nodes > result.records[i - 1].nodes ||
            result.records[i].edges > result.records[i - 1].edges) {
            throw std::logic_error("sweep counts increased along an ascending grid");
        }
    }
    return result;
}

namespace {

double r10(double v) { return csv::round_report(v); }

json ks_json(const std::optional<KSSummary>& ks) {
    if (!ks)
        return nullptr;
    json j;
    j["statistic"] = r10(ks->statistic);
    j["stddev"] = r10(ks->stddev);
    j["p_value"] = r10(ks->p_value);
    j["n1"] = ks->n1;
    j["n2"] = ks->n2;
    return j;
}

std::optional<KSSummary> ks_from_json(const json& j) {
    if (j.is_null())
        return std::nullopt;
    KSSummary s;
    s.statistic = j.at("statistic").get<double>();
    s.stddev = j.at("stddev").get<double>();
    s.p_value = j.at("p_value").get<double>();
    s.n1 = j.at("n1").get<std::size_t>();
    s.n2 = j.at("n2").get<std::size_t>();
    return s;
}

json params_json(const ScaleFreeParams& p) {
    json j;
    j["alpha"] = r10(p.alpha);
    j["beta"] = r10(p.beta);
    j["gamma"] = r10(p.gamma);
    j["delta_in"] = r10(p.delta_in);
    j["delta_out"] = r10(p.delta_out);
    return j;
}

ScaleFreeParams params_from_json(const json& j) {
    return ScaleFreeParams{j.at("alpha").get<double>(), j.at("beta").get<double>(),
                           j.at("gamma").get<double>(), j.at("delta_in").get<double>(),
                           j.at("delta_out").get<double>()};
}

std::string ks_cell(const std::optional<KSSummary>& ks) {
    return ks ? csv::format_report(ks->statistic) : std::string{};
}

} // namespace

std::string emit_report(const SweepResult& result, ReportFormat format) {
    if (result.records.empty())
        throw RangeError("no sweep records to report");

    if (format == ReportFormat::csv) {
        std::ostringstream out;
        csv::write_row(out, {"zeta", "nodes", "edges", "ks_in_rand", "ks_out_rand", "ks_in_sf",
                             "ks_out_sf", "flags"});
        for (const auto& r : result.records) {
            std::string flags;
            for (const auto& f : r.flags)
                flags += (flags.empty() ? "" : ";") + f;
            csv::write_row(out, {csv::format_report(r.zeta), std::to_string(r.nodes),
                                 std::to_string(r.edges), ks_cell(r.ks_in_random),
                                 ks_cell(r.ks_out_random), ks_cell(r.ks_in_sf),
                                 ks_cell(r.ks_out_sf), flags});
        }
        return out.str();
    }

    const auto& o = result.options;
    json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["seed"] = o.seed;
    json options;
    options["replicates"] = o.replicates;
    options["drop_isolated"] = o.drop_isolated;
    options["strict_cut"] = o.cut == CutMode::greater_than;
    options["exclude_zeros"] = o.exclude_zeros;
    options["refit_per_zeta"] = o.refit_per_zeta;
    options["delta_in"] = r10(o.delta_in);
    options["delta_out"] = r10(o.delta_out);
    options["ks_degrees"] = "unweighted";
    options["rng"] = "mt19937_64";
    j["options"] = std::move(options);

    json grid;
    if (result.grid.spec) {
        grid["start"] = r10(result.grid.spec->start);
        grid["stop"] = r10(result.grid.spec->stop);
        grid["count"] = result.grid.spec->count;
    } else {
        grid["start"] = nullptr;
        grid["stop"] = nullptr;
        grid["count"] = result.grid.values.size();
    }
    grid["values"] = json::array();
    for (double z : result.grid.values)
        grid["values"].push_back(r10(z));
    j["grid"] = std::move(grid);

    if (result.base_fit) {
        const auto& f = *result.base_fit;
        json fit = params_json(f.params);
        fit["c_in"] = r10(f.c_in);
        fit["c_out"] = r10(f.c_out);
        fit["x_min_in"] = f.x_min_in;
        fit["x_min_out"] = f.x_min_out;
        fit["clamped"] = f.clamped;
        fit["warnings"] = f.warnings;
        j["fit"] = std::move(fit);
    } else {
        j["fit"] = nullptr;
    }
    j["fit_error"] = result.fit_error;

    json records = json::array();
    for (const auto& r : result.records) {
        json rec;
        rec["zeta"] = r10(r.zeta);
        rec["nodes"] = r.nodes;
        rec["edges"] = r.edges;
        rec["ks_in_random"] = ks_json(r.ks_in_random);
        rec["ks_out_random"] = ks_json(r.ks_out_random);
        rec["ks_in_sf"] = ks_json(r.ks_in_sf);
        rec["ks_out_sf"] = ks_json(r.ks_out_sf);
        rec["seeds_random"] = r.seeds_random;
        rec["seeds_sf"] = r.seeds_sf;
        rec["params"] = params_json(r.params);
        rec["flags"] = r.flags;
        records.push_back(std::move(rec));
    }
    j["records"] = std::move(records);
    return j.dump(2) + "\n";
}

SweepResult parse_report(const std::string& text) {
    const json j = json::parse(text);
    SweepResult result;
    auto& o = result.options;
    o.seed = j.at("seed").get<std::uint64_t>();
    const auto& opt = j.at("options");
    o.replicates = opt.at("replicates").get<int>();
    o.drop_isolated = opt.at("drop_isolated").get<bool>();
    o.cut = opt.at("strict_cut").get<bool>() ? CutMode::greater_than : CutMode::at_least;
    o.exclude_zeros = opt.at("exclude_zeros").get<bool>();
    o.refit_per_zeta = opt.at("refit_per_zeta").get<bool>();
    o.delta_in = opt.at("delta_in").get<double>();
    o.delta_out = opt.at("delta_out").get<double>();

    const auto& grid = j.at("grid");
    result.grid.values = grid.at("values").get<std::vector<double>>();
    if (!grid.at("start").is_null()) {
        result.grid.spec = GridSpec{grid.at("start").get<double>(), grid.at("stop").get<double>(),
                                    grid.at("count").get<std::size_t>()};
    }

    if (const auto& fit = j.at("fit"); !fit.is_null()) {
        ScaleFreeFit f;
        f.params = params_from_json(fit);
        f.c_in = fit.at("c_in").get<double>();
        f.c_out = fit.at("c_out").get<double>();
        f.x_min_in = fit.at("x_min_in").get<int>();
        f.x_min_out = fit.at("x_min_out").get<int>();
        f.clamped = fit.at("clamped").get<bool>();
        f.warnings = fit.at("warnings").get<std::vector<std::string>>();
        result.base_fit = std::move(f);
    }
    result.fit_error = j.at("fit_error").get<std::string>();

    for (const auto& rec : j.at("records")) {
        SweepRecord r;
        r.zeta = rec.at("zeta").get<double>();
        r.nodes = rec.at("nodes").get<std::size_t>();
        r.edges = rec.at("edges").get<std::size_t>();
        r.ks_in_random = ks_from_json(rec.at("ks_in_random"));
        r.ks_out_random = ks_from_json(rec.at("ks_out_random"));
        r.ks_in_sf = ks_from_json(rec.at("ks_in_sf"));
        r.ks_out_sf = ks_from_json(rec.at("ks_out_sf"));
        r.seeds_random = rec.at("seeds_random").get<std::vector<std::uint64_t>>();
        r.seeds_sf = rec.at("seeds_sf").get<std::vector<std::uint64_t>>();
        r.params = params_from_json(rec.at("params"));
        r.flags = rec.at("flags").get<std::vector<std::string>>();
        result.records.push_back(std::move(r));
    }
    return result;
}

} // namespace prodnet
