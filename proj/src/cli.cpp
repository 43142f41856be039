#include "prodnet/cli.hpp"

#include "prodnet/centrality.hpp"
#include "prodnet/csv.hpp"
#include "prodnet/error.hpp"
#include "prodnet/graph.hpp"
#include "prodnet/ingest.hpp"
#include "prodnet/nullmodels.hpp"
#include "prodnet/stats.hpp"
#include "prodnet/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace prodnet::cli {

namespace {

std::string toml_string(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\')
            out.push_back('\\');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string toml_array(const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ", ";
        out += csv::format_exact(values[i]);
    }
    return out + "]";
}

const char* toml_bool(bool b) { return b ? "true" : "false"; }

// Raised for problems with the files a command reads or writes.
class IoError : public Error {
public:
    using Error::Error;
};

// Output directory written under a staging name and renamed into place once
// every file is written, so a failed command leaves nothing behind.
class RunDirectory {
public:
    RunDirectory(const RunConfig& cfg, const std::string& command)
        : final_(fs::path(cfg.out) / (cfg.run_name.empty() ? command : cfg.run_name)),
          staging_(final_.string() + ".partial"),
          force_(cfg.force) {
        if (fs::exists(final_) && !force_) {
            throw IoError("output directory " + final_.string() +
                          " already exists (use --force to overwrite)");
        }
        std::error_code ec;
        fs::remove_all(staging_, ec);
        fs::create_directories(staging_, ec);
        if (ec)
            throw IoError("cannot create " + staging_.string() + ": " + ec.message());
    }

    RunDirectory(const RunDirectory&) = delete;
    RunDirectory& operator=(const RunDirectory&) = delete;

    ~RunDirectory() {
        if (!committed_) {
            std::error_code ec;
            fs::remove_all(staging_, ec);
        }
    }

    fs::path path(const std::string& relative) const { return staging_ / relative; }

    void write(const std::string& relative, const std::function<void(std::ostream&)>& body) const {
        const auto p = path(relative);
        fs::create_directories(p.parent_path());
        std::ofstream f(p, std::ios::binary);
        if (!f)
            throw IoError("cannot write " + p.string());
        body(f);
        f.flush();
        if (!f)
            throw IoError("failed writing " + p.string());
    }

    void write(const std::string& relative, const std::string& text) const {
        write(relative, [&](std::ostream& o) { o << text; });
    }

    std::string read(const std::string& relative) const {
        std::ifstream f(path(relative), std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    const fs::path& final_path() const { return final_; }

    void commit() {
        std::error_code ec;
        if (fs::exists(final_))
            fs::remove_all(final_, ec);
        fs::rename(staging_, final_, ec);
        if (ec)
            throw IoError("cannot move outputs into " + final_.string() + ": " + ec.message());
        committed_ = true;
    }

private:
    fs::path final_;
    fs::path staging_;
    bool force_;
    bool committed_ = false;
};

InputOutputTable load_input(const RunConfig& cfg) {
    if (cfg.table.empty())
        throw IoError("no input table given (--table)");
    if (!fs::is_regular_file(cfg.table))
        throw IoError("cannot open table file '" + cfg.table + "'");
    if (!cfg.meta.empty() && !fs::is_regular_file(cfg.meta))
        throw IoError("cannot open metadata file '" + cfg.meta + "'");
    const auto format = cfg.format == "tsv" ? TableFormat::tsv : TableFormat::csv;
    auto table = load_table(cfg.table, format).with_labels(cfg.year, cfg.table);
    if (!cfg.meta.empty())
        table = table.with_names(load_metadata(cfg.meta));
    return table;
}

CutMode cut_mode(const RunConfig& cfg) {
    return cfg.strict_cut ? CutMode::greater_than : CutMode::at_least;
}

PageRankOptions pagerank_options(const RunConfig& cfg) {
    return PageRankOptions{cfg.damping, cfg.tol, cfg.max_iter};
}

std::string zeta_label(double z) { return csv::format_report(z); }

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return io_error;
    } catch (const ValueError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const DuplicateCodeError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << '\n';
        return io_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
}

} // namespace

std::string RunConfig::to_toml() const {
    std::ostringstream o;
    o << "# prodnet " << tool_version << " run configuration\n";
    if (!table.empty())
        o << "table = " << toml_string(table) << '\n';
    if (!meta.empty())
        o << "meta = " << toml_string(meta) << '\n';
    o << "format = " << toml_string(format) << '\n';
    o << "year = " << year << '\n';
    o << "out = " << toml_string(out) << '\n';
    if (!run_name.empty())
        o << "run-name = " << toml_string(run_name) << '\n';
    o << "grid-start = " << csv::format_exact(grid_start) << '\n';
    o << "grid-stop = " << csv::format_exact(grid_stop) << '\n';
    o << "grid-count = " << grid_count << '\n';
    if (!grid.empty())
        o << "grid = " << toml_array(grid) << '\n';
    o << "seed = " << seed << '\n';
    o << "replicates = " << replicates << '\n';
    o << "cutoffs = " << toml_array(cutoffs) << '\n';
    o << "k = " << k << '\n';
    o << "damping = " << csv::format_exact(damping) << '\n';
    o << "tol = " << csv::format_exact(tol) << '\n';
    o << "max-iter = " << max_iter << '\n';
    o << "delta-in = " << csv::format_exact(delta_in) << '\n';
    o << "delta-out = " << csv::format_exact(delta_out) << '\n';
    o << "strict-cut = " << toml_bool(strict_cut) << '\n';
    o << "exclude-zeros = " << toml_bool(exclude_zeros) << '\n';
    o << "refit-per-zeta = " << toml_bool(refit_per_zeta) << '\n';
    o << "drop-isolated = " << toml_bool(drop_isolated) << '\n';
    o << "bins-per-decade = " << bins_per_decade << '\n';
    o << "threads = " << threads << '\n';
    return o.str();
}

int cmd_ingest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto table = load_input(cfg);
        const auto s = summary(table);
        out << "N=" << s.industries << '\n'
            << "positive_off_diagonal=" << s.positive_off_diagonal << '\n'
            << "positive_diagonal=" << s.positive_diagonal << '\n'
            << "min_positive=" << csv::format_report(s.min_positive) << '\n'
            << "max_positive=" << csv::format_report(s.max_positive) << '\n'
            << "mean_positive=" << csv::format_report(s.mean_positive) << '\n';

        const char* env = std::getenv("PRODNET_CACHE");
        const fs::path cache = env && *env ? fs::path(env) : fs::path(".prodnet-cache");
        std::error_code ec;
        fs::create_directories(cache, ec);
        if (ec)
            throw IoError("cannot create cache directory " + cache.string() + ": " + ec.message());
        const std::string stem = fs::path(cfg.table).stem().string();
        const fs::path table_path = cache / (stem + ".canonical.csv");
        const fs::path meta_path = cache / (stem + ".meta.csv");
        {
            std::ofstream f(table_path, std::ios::binary);
            if (!f)
                throw IoError("cannot write " + table_path.string());
            write_table(f, table);
        }
        {
            std::ofstream f(meta_path, std::ios::binary);
            if (!f)
                throw IoError("cannot write " + meta_path.string());
            write_metadata(f, table);
        }
        // Validate the cached copy by reading it back.
        std::ifstream check(table_path, std::ios::binary);
        const auto reread = parse_table(check);
        if (reread.coefficients() != table.coefficients())
            throw IoError("cached table " + table_path.string() + " does not round-trip");
        out << "cached " << table_path.string() << '\n';
        return static_cast<int>(ok);
    });
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto table = load_input(cfg);
        RunDirectory dir(cfg, "sweep");
        const auto net = build_network(table);
        const auto grid = cfg.grid.empty()
                              ? make_grid(cfg.grid_start, cfg.grid_stop, cfg.grid_count)
                              : grid_from_values(cfg.grid);

        SweepOptions opts;
        opts.seed = cfg.seed;
        opts.replicates = cfg.replicates;
        opts.drop_isolated = cfg.drop_isolated;
        opts.cut = cut_mode(cfg);
        opts.exclude_zeros = cfg.exclude_zeros;
        opts.refit_per_zeta = cfg.refit_per_zeta;
        opts.delta_in = cfg.delta_in;
        opts.delta_out = cfg.delta_out;
        opts.threads = cfg.threads;

        const auto result = run_sweep(net, grid, opts);
        if (!result.fit_error.empty())
            err << "warning: scale-free fit failed, using fallback parameters: "
                << result.fit_error << '\n';
        else if (result.base_fit && result.base_fit->clamped)
            for (const auto& w : result.base_fit->warnings)
                err << "warning: " << w << '\n';

        const auto json_text = emit_report(result, ReportFormat::json);
        dir.write("sweep.json", json_text);
        dir.write("sweep.csv", emit_report(result, ReportFormat::csv));
        if (result.base_fit)
            dir.write("fit.json", fit_to_json(*result.base_fit) + "\n");
        dir.write("config.toml", cfg.to_toml());

        if (parse_report(dir.read("sweep.json")).records.size() != grid.values.size())
            throw IoError("sweep.json failed validation");
        dir.commit();
        out << "wrote " << result.records.size() << " sweep records to "
            << dir.final_path().string() << '\n';
        return static_cast<int>(ok);
    });
}

int cmd_centrality(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto table = load_input(cfg);
        RunDirectory dir(cfg, "centrality");
        const auto net = build_network(table);
        const auto cutoffs = grid_from_values(cfg.cutoffs).values;
        const auto pr = pagerank_options(cfg);

        std::size_t files = 0;
        for (Metric metric : {Metric::out_strength, Metric::pagerank_out}) {
            std::vector<CentralityReport> reports;
            for (double z : cutoffs) {
                const auto pruned = prune(net, z, cfg.drop_isolated, cut_mode(cfg));
                CentralityReport report;
                if (pruned.empty()) {
                    err << "warning: no nodes left at zeta=" << zeta_label(z) << '\n';
                    report.zeta = z;
                    report.metric = metric;
                    report.truncated = true;
                } else {
                    report = rank(pruned, metric, cfg.k, z, pr);
                    if (report.truncated) {
                        err << "warning: only " << report.top.size() << " nodes at zeta="
                            << zeta_label(z) << ", ranking truncated below k=" << cfg.k << '\n';
                    }
                }
                dir.write(std::string(to_string(metric)) + "/rankings/zeta_" + zeta_label(z) +
                              ".json",
                          report_to_json(report) + "\n");
                ++files;
                reports.push_back(std::move(report));
            }
            if (reports.size() >= 2) {
                const auto drift = ranking_drift(reports);
                dir.write(std::string(to_string(metric)) + "/drift.csv",
                          [&](std::ostream& o) { write_drift(o, drift); });
                ++files;
            }
        }
        dir.write("config.toml", cfg.to_toml());
        dir.commit();
        out << "wrote " << files << " ranking files to " << dir.final_path().string() << '\n';
        return static_cast<int>(ok);
    });
}

int cmd_dist(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto table = load_input(cfg);
        RunDirectory dir(cfg, "dist");
        const auto net = build_network(table);
        for (Direction d : {Direction::in, Direction::out}) {
            const auto sample = degree_sample(net, d, true);
            auto dist = log_binned(sample, cfg.bins_per_decade);
            dist.direction = d;
            dist.weighted = true;
            if (dist.excluded_zeros > 0) {
                err << "note: " << dist.excluded_zeros << " industries with zero " << to_string(d)
                    << "-strength left out of the log-binned distribution\n";
            }
            dir.write(std::string("degree_dist_") + to_string(d) + ".csv",
                      [&](std::ostream& o) { write_distribution(o, dist); });
        }
        dir.write("config.toml", cfg.to_toml());
        dir.commit();
        out << "wrote degree distributions to " << dir.final_path().string() << '\n';
        return static_cast<int>(ok);
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Production network threshold analysis", "prodnet"};
    app.set_config("--config", "", "Read options from a key = value file; flags override it");
    app.require_subcommand(1);

    app.add_option("--table", cfg.table, "Industry-by-industry requirements table (CSV)");
    app.add_option("--meta", cfg.meta, "Industry metadata CSV [code, name]");
    app.add_option("--format", cfg.format, "Table format")->check(CLI::IsMember({"csv", "tsv"}));
    app.add_option("--year", cfg.year, "Year label of the table");
    app.add_option("--out", cfg.out, "Output root directory");
    app.add_option("--run-name", cfg.run_name, "Run directory name under --out");
    app.add_option("--grid-start", cfg.grid_start, "First cut-off of the sweep grid");
    app.add_option("--grid-stop", cfg.grid_stop, "Last cut-off of the sweep grid");
    app.add_option("--grid-count", cfg.grid_count, "Number of sweep cut-offs");
    app.add_option("--grid", cfg.grid, "Explicit sweep cut-offs (overrides start/stop/count)")
        ->delimiter(',');
    app.add_option("--seed", cfg.seed, "Random seed");
    app.add_option("--replicates", cfg.replicates, "Null graphs per cut-off and model")
        ->check(CLI::PositiveNumber);
    app.add_option("--cutoffs", cfg.cutoffs, "Centrality cut-offs")->delimiter(',');
    app.add_option("-k,--k", cfg.k, "Ranking length")->check(CLI::PositiveNumber);
    app.add_option("--damping", cfg.damping, "PageRank damping factor");
    app.add_option("--tol", cfg.tol, "PageRank L1 tolerance");
    app.add_option("--max-iter", cfg.max_iter, "PageRank iteration limit");
    app.add_option("--delta-in", cfg.delta_in, "In-degree attachment offset");
    app.add_option("--delta-out", cfg.delta_out, "Out-degree attachment offset");
    app.add_flag("--strict-cut", cfg.strict_cut, "Keep edges with weight > zeta instead of >=");
    app.add_flag("--exclude-zeros", cfg.exclude_zeros, "Leave zero-degree nodes out of KS samples");
    app.add_flag("--refit-per-zeta", cfg.refit_per_zeta, "Refit scale-free parameters per cut-off");
    app.add_flag("--drop-isolated,!--keep-isolated", cfg.drop_isolated,
                 "Remove nodes without edges after pruning");
    app.add_option("--bins-per-decade", cfg.bins_per_decade, "Log bins per decade")
        ->check(CLI::PositiveNumber);
    app.add_option("--threads", cfg.threads, "Worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    app.add_flag("--force", cfg.force, "Overwrite an existing run directory");

    auto* ingest = app.add_subcommand("ingest", "Validate a table, print its summary, cache it");
    auto* sweep = app.add_subcommand("sweep", "Threshold sweep with null-model KS comparison");
    auto* centrality = app.add_subcommand("centrality", "Top-k rankings and drift across cut-offs");
    auto* dist = app.add_subcommand("dist", "Log-binned weighted degree distributions");
    for (auto* sub : {ingest, sweep, centrality, dist})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    if (*ingest)
        return cmd_ingest(cfg, out, err);
    if (*sweep)
        return cmd_sweep(cfg, out, err);
    if (*centrality)
        return cmd_centrality(cfg, out, err);
    return cmd_dist(cfg, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("prodnet");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace prodnet::cli
