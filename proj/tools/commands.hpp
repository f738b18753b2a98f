#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bsdeploy/search.hpp"
#include "json.hpp"
#include "run_config.hpp"

namespace bsdeploy::cli {

enum class ExitCode { Ok = 0, Failure = 1, BadInput = 2 };

enum class Sweep { PtCoverage, EpsNB, EpsCost, NuCost, PtNB, SchemeBars };

Sweep parse_sweep(const std::string& s);
// File stem of the sweep's output, e.g. "pt_coverage".
std::string sweep_name(Sweep s);
std::vector<double> default_grid(Sweep s);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Fixed-precision cell text so outputs are byte-identical across runs.
std::string cell(double v);
std::string cell(int v);
std::string cell(bool v);

void write_csv(const std::filesystem::path& path, const Table& t);
// The resolved config, library version and seed next to an output file.
void write_meta(const std::filesystem::path& path, const RunConfig& cfg, const std::string& command,
                const nlohmann::json& extra);

Table sweep_table(const RunConfig& cfg, Sweep sweep, const std::vector<double>& grid);

// Smallest epsilon in [limits.epsilon, 1) for which some N_B <= N_B,max meets
// P_t,max, by bisection on log epsilon; nullopt when none does below 1.
std::optional<double> tightest_feasible_epsilon(const DeploymentModel& model, const ChannelParams& ch,
                                                const OptimizationLimits& limits);

struct CheckResult {
    std::string name;
    bool analytic = true;  // false for checks that draw Monte Carlo samples
    bool pass = false;
    std::string detail;
};

std::vector<CheckResult> run_checks(const RunConfig& cfg);

ExitCode cmd_optimize(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
ExitCode cmd_curves(const RunConfig& cfg, Sweep sweep, const std::optional<std::vector<double>>& grid,
                    const std::filesystem::path& out, std::ostream& log);
ExitCode cmd_compare(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
ExitCode cmd_validate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

}  // namespace bsdeploy::cli
