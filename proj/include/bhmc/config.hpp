#pragma once

// Run configuration: a single JSON document.
//
//   {
//     "model":   { "catalog": "mm1", "params": { "lambda": 1, "mu": 2 } }
//            or  { "blocks": { "levels": [ { "0": [[...]], "1": [[...]] },
//                                          { "-1": [[...]], "0": [[...]], "1": [[...]] } ] } },
//     "solver":  { "variant": "mip_new", "epsilon": 1e-8, "k_set": [0], "max_level": 10000,
//                  "schedule": "every" | "stride:5" | "geometric:1.5", "exec": "parallel",
//                  "drift": { "v": { "linear": [1, 1] } | { "table": [[...], ...] },
//                             "b": 1, "C": [[0, 1]] },
//                  "varpi": [0.5, 0.5], "varpi_from_level": 0 },
//     "compare": ["lbcl_direct", "bright_taylor", "brute_force"],
//     "compare_options": { "depth_factor": 4, "weight": "unit" | "level" },
//     "output":  { "distribution": "pi.csv", "report": "report.json" },
//     "validate": { "levels": 20, "tol": 1e-12 }
//   }
//
// Inline block tables: entry k of "levels" maps level offsets (l - k, as
// strings) to the blocks Q_{k,l}; the last entry repeats for all deeper
// levels. Phases in "C" are 1-based, as in every file the CLI writes.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bhmc/generator.hpp"
#include "bhmc/lfp.hpp"
#include "bhmc/models.hpp"
#include "bhmc/solver.hpp"

namespace bhmc::cli {

enum class Baseline { lbcl_direct, bright_taylor, brute_force };

const char* to_string(Baseline b) noexcept;

struct BlockTable {
    std::vector<std::vector<std::pair<int, Matrix>>> levels;  // (offset, Q_{k,k+offset})
};

struct DriftSpec {
    std::optional<std::pair<double, double>> linear;  // v_l = (a + b l) e
    std::vector<Vector> table;                       // v_l; last entry repeats
    double b = 1.0;
    std::vector<std::pair<std::size_t, std::size_t>> C;  // 0-based (level, phase)
};

struct RunConfig {
    std::optional<models::ModelSpec> catalog;
    std::optional<BlockTable> blocks;
    SolverOptions solver;
    std::optional<DriftSpec> drift;
    std::optional<FixedDirection> direction;
    std::vector<Baseline> compare;
    double compare_depth_factor = 4.0;
    bool level_weighted_tv = false;
    std::optional<std::filesystem::path> distribution_path;
    std::optional<std::filesystem::path> report_path;
    std::size_t validate_levels = 20;
    double validate_tol = 1e-12;
    nlohmann::json source;  // the document as read, echoed into the report
};

/// Command-line overrides of solver fields.
struct Overrides {
    std::optional<double> epsilon;
    std::optional<std::string> k_set;  // "0,1,2"
    std::optional<std::size_t> max_level;
    std::optional<std::string> schedule;
};

/// Throws ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

void apply_overrides(RunConfig& cfg, const Overrides& o);

Schedule parse_schedule(const std::string& text);
std::vector<std::size_t> parse_k_set(const std::string& text);

BlockGenerator build_generator(const RunConfig& cfg);
/// Linear specs expand to (a + b l) over the phases of level l.
DriftCertificate build_certificate(const DriftSpec& spec, const BlockGenerator& gen);

}  // namespace bhmc::cli
