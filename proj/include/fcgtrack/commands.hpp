#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fcgtrack/config.hpp"
#include "fcgtrack/metrics.hpp"
#include "fcgtrack/synthgen.hpp"

// Batch entry points behind the `fcgtrack` executable: track, eval, synth,
// sweep. Each writes a JSON manifest next to its main output.

namespace fcgtrack::cli {

/// Full command line (argv[0] included). Returns the process exit code;
/// diagnostics go to `err`, reports to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// preset < config file < overrides (applied in order).
TrackerConfig resolve_config(const std::string& preset, const std::optional<std::filesystem::path>& config_file,
                             const std::vector<std::pair<std::string, std::string>>& overrides);

/// "key=v1,v2,..." -> (key, {v1, v2, ...}).
std::pair<std::string, std::vector<std::string>> parse_grid_axis(const std::string& spec);

/// Accepts "1,2,5" and "1..20" (inclusive) and mixes of both.
std::vector<std::uint64_t> parse_seed_list(const std::string& spec);

struct SweepAxis {
    std::string key;  // any TrackerConfig key accepted by set_config_value
    std::vector<std::string> values;
};

struct SweepInput {
    // Either a synthetic scenario run once per seed ...
    std::optional<Scenario> scenario;
    std::vector<std::uint64_t> seeds;
    // ... or a fixed dataset.
    std::optional<std::filesystem::path> det_path;
    std::optional<std::filesystem::path> emb_path;
    std::optional<std::filesystem::path> gt_path;
};

struct SweepRow {
    std::string param;  // axis keys joined with '|'
    std::string value;  // axis values joined with '|'
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
    int runs = 0;
    int failed = 0;
    std::string error;
};

/// One tracking + evaluation run per grid point (cartesian product of the
/// axes) and per seed; rows are in grid order, metrics in a fixed order.
/// Failing grid points are reported through `failed`/`error`.
std::vector<SweepRow> run_sweep(const TrackerConfig& base, const std::vector<SweepAxis>& axes,
                                const SweepInput& input, int jobs = 1);

std::string format_sweep_csv(const std::vector<SweepRow>& rows);

/// Tracks a synthetic scenario in memory and evaluates it against its truth.
EvalReport run_synthetic(const Scenario& scenario, const TrackerConfig& config);

}  // namespace fcgtrack::cli
