#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "bhmc/config.hpp"
#include "bhmc/solver.hpp"

namespace bhmc::cli {

/// Process exit codes.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// Runs the configured variant.
Approximation solve(const RunConfig& cfg, const BlockGenerator& gen);

/// Writes `level,phase,probability` rows, phases 1-based, 17 significant digits.
void write_distribution(std::ostream& out, const LevelVector& blocks);

/// Solve, run the requested baselines, write the output files. Returns the
/// report document (also written to cfg.report_path when set).
nlohmann::json run(const RunConfig& cfg, std::ostream& log);

/// The verbs behind the executable. Each catches library errors, prints them
/// with their level context to `err` and returns an exit code.
int run_command(const std::filesystem::path& config, const Overrides& o, std::ostream& out,
                std::ostream& err);
int inspect_command(const std::filesystem::path& config, const Overrides& o, std::size_t level,
                    std::ostream& out, std::ostream& err);
int validate_command(const std::filesystem::path& config, const Overrides& o, std::ostream& out,
                     std::ostream& err);

/// Full per-level diagnostic dump: U_n*, u_n*, u_{n,K}*, candidate sets,
/// maximizers, pivot, ratio and residual. Throws ConfigError if `level`
/// exceeds the configured max_level.
void inspect(const RunConfig& cfg, std::size_t level, std::ostream& out);

}  // namespace bhmc::cli
