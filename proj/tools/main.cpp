#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "run_config.hpp"

using namespace bsdeploy::cli;

int main(int argc, char** argv) {
    CLI::App app{"Joint base-station count, placement and power optimizer"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::string density_mode;
    std::string field;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_option("--density-mode", density_mode, "asymptotic or moderate");
    app.add_option("--field", field, "circular or square");

    auto* optimize = app.add_subcommand("optimize", "Jointly optimize N_B, placement and power");
    auto* curves = app.add_subcommand("curves", "Write one sweep as CSV");
    auto* compare = app.add_subcommand("compare", "Compare fixed, ONB, OPA and joint schemes");
    auto* validate = app.add_subcommand("validate", "Run invariant and Monte Carlo checks");

    std::string sweep;
    std::string grid;
    curves->add_option("--sweep", sweep, "PtCoverage, EpsNB, EpsCost, NuCost, PtNB or SchemeBars")->required();
    curves->add_option("--grid", grid, "a,b,c or lo:hi:n or log:lo:hi:n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::BadInput);
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (seed) cfg.mc.seed = *seed;
        if (!density_mode.empty()) cfg.density_mode = parse_density_mode(density_mode);
        if (!field.empty()) cfg.field.shape = parse_field_shape(field);
        cfg.validate();

        ExitCode code = ExitCode::Ok;
        if (optimize->parsed()) {
            code = cmd_optimize(cfg, out_dir, std::cout);
        } else if (curves->parsed()) {
            const Sweep s = parse_sweep(sweep);
            std::optional<std::vector<double>> g;
            if (!grid.empty()) g = parse_grid(grid);
            code = cmd_curves(cfg, s, g, out_dir, std::cout);
        } else if (compare->parsed()) {
            code = cmd_compare(cfg, out_dir, std::cout);
        } else if (validate->parsed()) {
            code = cmd_validate(cfg, out_dir, std::cout);
        }
        return static_cast<int>(code);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::BadInput);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Failure);
    }
}
