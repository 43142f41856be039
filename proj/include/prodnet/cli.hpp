#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace prodnet::cli {

// Effective configuration of one run. Keys of to_toml() are the long flag
// names, so a snapshot can be fed back with --config.
struct RunConfig {
    std::string table;
    std::string meta;
    std::string format = "csv";
    int year = 0;
    std::string out = "runs";
    std::string run_name; // defaults to the subcommand name

    double grid_start = 0.00001;
    double grid_stop = 0.5;
    std::size_t grid_count = 100;
    std::vector<double> grid; // explicit grid, overrides start/stop/count

    std::uint64_t seed = 42;
    int replicates = 1;

    std::vector<double> cutoffs = {0.0, 0.02, 0.04, 0.06, 0.08, 0.1};
    std::size_t k = 20;
    double damping = 0.85;
    double tol = 1e-9;
    int max_iter = 1000;

    double delta_in = 0.2;
    double delta_out = 0.0;

    bool strict_cut = false;
    bool exclude_zeros = false;
    bool refit_per_zeta = false;
    bool drop_isolated = true;

    int bins_per_decade = 5;
    int threads = 1;
    bool force = false;

    std::string to_toml() const;
};

enum ExitCode : int {
    ok = 0,
    failure = 1,     // computation failed
    io_error = 2,    // missing input, unwritable or existing output
    input_error = 3, // malformed table or metadata
};

// Parses argv (argv[0] is the program name) and runs the selected subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_ingest(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_centrality(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_dist(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace prodnet::cli
