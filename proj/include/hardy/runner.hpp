#pragma once

// Experiment runner behind the hardylab command line: JSON configs in,
// JSON reports and CSV tables out.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hardy/random_signs.hpp"
#include "hardy/sequences.hpp"
#include "json.hpp"

namespace hardy::io {

using nlohmann::json;

struct KhintchineSweep {
    std::vector<double> q{2.0, 4.0};
    int max_length = 12;
    int vectors = 10;
};

struct ShPair {
    double p = 2.0;
    double s = 1.0;
};

struct RunConfig {
    /// Effective configuration, echoed in every report.
    json echo;
    Domain domain = Domain::disc();
    std::vector<Point> points;
    double s = 1.0;
    double p = 2.0;
    double q = 2.0;
    std::vector<cplx> nu;
    std::vector<double> exponents;
    std::vector<double> carleson_q{1.0, 2.0, 4.0};
    std::vector<double> sh_q;
    std::vector<ShPair> sh_ps{{2.0, 1.0}};
    std::vector<double> radii;
    int angles = 1;
    DualMethod dual_method = DualMethod::Gram;
    bool tikhonov = false;
    std::optional<int> resolution;
    std::optional<std::uint64_t> seed;
    int batch = 64;
    int restarts = 32;
    std::uint64_t samples = 1 << 16;
    /// Auto enumerates up to the exact cap and samples above it.
    ExpectMethod sign_method = ExpectMethod::Auto;
    double infty_route_p = 4.0;
    KhintchineSweep khintchine;
    int bergman_n = 1;
    int bergman_k = 0;
};

/// Throws Config error on malformed or inconsistent input. Relative CSV
/// paths are resolved against base_dir.
RunConfig parse_config(const json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Applies command-line overrides and refreshes the echo.
void apply_overrides(RunConfig& cfg, std::optional<std::uint64_t> seed, std::optional<int> resolution);

/// Rule snapshot: {domain, description, resolution, volume, weights,
/// coords: [{re: [...], im: [...]} per coordinate]}.
json rule_to_json(const QuadratureRule& rule);

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& t);

struct RunResult {
    json report;
    std::vector<Table> tables;
    /// Checked properties that failed; the report is still complete.
    std::vector<std::string> violations;
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand. The report holds "command", "config", "results",
/// "violations" and "wall_clock_seconds" (the only non-deterministic field).
RunResult run(const std::string& command, const RunConfig& cfg);

/// 2 config, 3 capacity, 4 numeric, 5 invariant, 1 anything else.
int exit_code(ErrorKind kind);

}  // namespace hardy::io
