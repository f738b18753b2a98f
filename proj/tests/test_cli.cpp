#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "doctest.h"
#include "run_config.hpp"

using namespace bsdeploy;
using namespace bsdeploy::cli;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("bsdeploy_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(BSDEPLOY_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig quick_config() {
    RunConfig cfg;
    cfg.mc.deployments = 200;
    return cfg;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("grid specs") {
    CHECK(parse_grid("1,2.5,4") == std::vector<double>{1.0, 2.5, 4.0});
    CHECK(parse_grid("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
    const auto g = parse_grid("log:0.01:100:5");
    REQUIRE(g.size() == 5);
    CHECK(g[0] == 0.01);
    CHECK(g[2] == Approx(1.0));
    CHECK(g[4] == 100.0);
    CHECK(parse_grid("3:3:1") == std::vector<double>{3.0});
    CHECK_THROWS_AS(parse_grid(""), ConfigError);
    CHECK_THROWS_AS(parse_grid("1,x"), ConfigError);
    CHECK_THROWS_AS(parse_grid("0:1"), ConfigError);
    CHECK_THROWS_AS(parse_grid("0:1:2.5"), ConfigError);
    CHECK_THROWS_AS(parse_grid("log:0:1:3"), ConfigError);
    CHECK_THROWS_AS(parse_grid("1,"), ConfigError);
}

TEST_CASE("config defaults and overrides") {
    const RunConfig d = parse_config(nlohmann::json::object());
    CHECK(d.field.radius == 500.0);
    CHECK(d.field.side == Approx(500.0 * std::sqrt(std::numbers::pi)));
    CHECK(d.field.num_users == 120);
    CHECK(d.channel().threshold == Approx(0.1));
    CHECK(d.channel().noise_power == Approx(1e-10));
    CHECK(d.channel().path_loss_exp == 4.0);
    CHECK(d.cost.a_b == 5.5);
    CHECK(d.cost.b_b == 32.0);
    CHECK(d.limits.max_power == 5.0);
    CHECK(d.limits.max_bs == 35);
    CHECK(d.density_mode == DensityMode::Moderate);

    const RunConfig c = parse_config(nlohmann::json::parse(R"({
        "field": {"shape": "square", "radius": 100, "num_users": 50},
        "channel": {"threshold_db": 0, "noise_dbm": -80, "path_loss_exp": 3},
        "limits": {"epsilon": 0.01},
        "mc": {"deployments": 10, "seed": 7},
        "density_mode": "asymptotic"})"));
    CHECK(c.field.shape == FieldShape::Square);
    CHECK(c.field.side == Approx(100.0 * std::sqrt(std::numbers::pi)));
    CHECK(c.channel().threshold == Approx(1.0));
    CHECK(c.channel().noise_power == Approx(1e-11));
    CHECK(c.limits.epsilon == 0.01);
    CHECK(c.mc.seed == 7u);
    CHECK(c.density_mode == DensityMode::Asymptotic);

    const RunConfig round = parse_config(to_json(c));
    CHECK(to_json(round) == to_json(c));
}

TEST_CASE("config errors") {
    using nlohmann::json;
    CHECK_THROWS_AS(parse_config(json::parse(R"({"limits": {"epsilon": 0}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"limits": {"epsilon": 1}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"field": {"radius": -1}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"field": {"num_users": 1.5}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"channel": {"path_loss_exp": "four"}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"channel": {"alpha": 4}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"density_mode": "sparse"})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"mc": {"seed": -3}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse("[1, 2]")), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("names") {
    CHECK(parse_sweep("PtCoverage") == Sweep::PtCoverage);
    CHECK(parse_sweep("eps_nb") == Sweep::EpsNB);
    CHECK(parse_sweep("SchemeBars") == Sweep::SchemeBars);
    CHECK(sweep_name(Sweep::NuCost) == "nu_cost");
    CHECK_THROWS_AS(parse_sweep("Nonsense"), ConfigError);
    CHECK(default_grid(Sweep::NuCost).size() == 20);
    CHECK(default_grid(Sweep::NuCost).back() == 200.0);
    CHECK(cell(0.1) == "0.1");
    CHECK(cell(3) == "3");
    CHECK(cell(true) == "true");
}

TEST_CASE("optimize writes a plan and is deterministic") {
    const fs::path a = scratch("opt_a");
    const fs::path b = scratch("opt_b");
    std::ostringstream log;
    const RunConfig cfg = quick_config();
    CHECK(cmd_optimize(cfg, a, log) == ExitCode::Ok);
    CHECK(cmd_optimize(cfg, b, log) == ExitCode::Ok);
    for (const char* f : {"plan.csv", "cells.csv", "trace.csv", "optimize.meta.json"}) {
        REQUIRE(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(slurp(a / "plan.csv").rfind("field,density_mode,n_b_star,", 0) == 0);
    const auto meta = nlohmann::json::parse(slurp(a / "optimize.meta.json"));
    CHECK(meta.at("seed") == cfg.mc.seed);
    CHECK(meta.at("config") == to_json(cfg));

    const DeploymentModel model(cfg.field, cfg.density_mode);
    const SearchResult r = optimize_deployment(model, cfg.channel(), cfg.cost, cfg.limits);
    CHECK(log.str().find("N_B* = " + std::to_string(r.num_bs())) != std::string::npos);
}

TEST_CASE("favourable channel needs one base station") {
    RunConfig cfg = quick_config();
    cfg.path_loss_exp = 3.0;
    cfg.limits.epsilon = 0.5;
    const fs::path out = scratch("opt_one");
    std::ostringstream log;
    CHECK(cmd_optimize(cfg, out, log) == ExitCode::Ok);
    CHECK(slurp(out / "plan.csv").find("\ncircular,moderate,1,") != std::string::npos);
}

TEST_CASE("infeasible plans report the tightest feasible epsilon") {
    RunConfig cfg = quick_config();
    cfg.limits.epsilon = 1e-5;
    const fs::path out = scratch("opt_inf");
    std::ostringstream log;
    CHECK(cmd_optimize(cfg, out, log) == ExitCode::Failure);
    const auto meta = nlohmann::json::parse(slurp(out / "optimize.meta.json"));
    REQUIRE(meta.at("tightest_feasible_epsilon").is_number());
    const double tight = meta.at("tightest_feasible_epsilon").get<double>();
    CHECK(tight > 1e-5);
    const DeploymentModel model(cfg.field, cfg.density_mode);
    const ChannelParams ch = cfg.channel();
    CHECK(fewest_bs_at_power(model, ch, tight, cfg.limits.max_power, cfg.limits.max_bs).has_value());
    CHECK_FALSE(fewest_bs_at_power(model, ch, tight * 0.999, cfg.limits.max_power, cfg.limits.max_bs).has_value());
}

TEST_CASE("sweeps") {
    const RunConfig cfg = quick_config();

    const Table pt = sweep_table(cfg, Sweep::PtCoverage, {0.1, 1.0, 10.0});
    CHECK(pt.header.front() == "n_b");
    CHECK(pt.rows.size() == 12);
    for (std::size_t i = 0; i < 3; ++i) {
        const double c1 = std::stod(pt.rows[i][3]);
        const double c2 = std::stod(pt.rows[3 + i][3]);
        CHECK(std::abs(c1 - c2) < 0.01);
    }

    const Table nb = sweep_table(cfg, Sweep::PtNB, {0.25, 5.0});
    REQUIRE(nb.rows.size() == 4);
    CHECK(nb.header == std::vector<std::string>{"epsilon", "p_t_w", "n_b_star", "feasible"});
    CHECK(std::stoi(nb.rows[1][2]) <= std::stoi(nb.rows[0][2]));

    const Table bars = sweep_table(cfg, Sweep::SchemeBars, {0.01});
    REQUIRE(bars.rows.size() == 4);
    CHECK(bars.rows[0][1] == "fixed");
    CHECK(bars.rows[0][4] == "1890");

    CHECK_THROWS_AS(sweep_table(cfg, Sweep::EpsNB, {0.0}), ConfigError);
    CHECK_THROWS_AS(sweep_table(cfg, Sweep::NuCost, {12.5}), ConfigError);
    CHECK_THROWS_AS(sweep_table(cfg, Sweep::PtNB, {}), ConfigError);
}

TEST_CASE("square field costs no more than the circular field for N_U >= 40") {
    const Table t = sweep_table(quick_config(), Sweep::NuCost, {40, 120, 200});
    std::map<std::pair<std::string, std::string>, double> cost;
    for (const auto& r : t.rows) {
        if (r[1] == "0.001") cost[{r[0], r[2]}] = std::stod(r[5]);
    }
    for (const char* nu : {"40", "120", "200"}) {
        CAPTURE(nu);
        CHECK(cost.at({"square", nu}) <= cost.at({"circular", nu}));
    }
}

TEST_CASE("curves output is byte-identical across runs") {
    const fs::path a = scratch("curves_a");
    const fs::path b = scratch("curves_b");
    std::ostringstream log;
    const RunConfig cfg = quick_config();
    const std::vector<double> grid{0.1, 1.0};
    CHECK(cmd_curves(cfg, Sweep::PtCoverage, grid, a, log) == ExitCode::Ok);
    CHECK(cmd_curves(cfg, Sweep::PtCoverage, grid, b, log) == ExitCode::Ok);
    CHECK(slurp(a / "pt_coverage.csv") == slurp(b / "pt_coverage.csv"));
    CHECK(slurp(a / "pt_coverage.meta.json") == slurp(b / "pt_coverage.meta.json"));
}

TEST_CASE("analytic checks do not depend on the seed") {
    RunConfig a = quick_config();
    RunConfig b = quick_config();
    b.mc.seed = 99;
    const auto ra = run_checks(a);
    const auto rb = run_checks(b);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
        CAPTURE(ra[i].name);
        if (!ra[i].analytic) continue;
        CHECK(ra[i].pass == rb[i].pass);
        CHECK(ra[i].detail == rb[i].detail);
    }
    const fs::path out = scratch("validate");
    std::ostringstream log;
    const ExitCode code = cmd_validate(a, out, log);
    const auto summary = nlohmann::json::parse(slurp(out / "validate.json"));
    CHECK(summary.at("passed").get<bool>() == (code == ExitCode::Ok));
    CHECK(summary.at("checks").size() == ra.size());
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch("exit");
    std::ofstream(dir / "bad.json") << R"({"limits": {"epsilon": 0}})";
    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK(run_binary("optimize --config " + (dir / "bad.json").string() + " --out " + dir.string()) == 2);
    CHECK(run_binary("optimize --config " + (dir / "broken.json").string() + " --out " + dir.string()) == 2);
    CHECK(run_binary("curves --sweep Nope --out " + dir.string()) == 2);
    CHECK(run_binary("frobnicate") == 2);
    CHECK(run_binary("optimize --density-mode dense --out " + dir.string()) == 2);
    std::ofstream(dir / "tight.json") << R"({"limits": {"epsilon": 1e-5}})";
    CHECK(run_binary("optimize --config " + (dir / "tight.json").string() + " --out " + dir.string()) == 1);
    CHECK(run_binary("compare --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "compare.csv"));
}

}
