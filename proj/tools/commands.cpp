#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <tuple>

#include "bsdeploy/allocation.hpp"
#include "bsdeploy/coverage.hpp"
#include "bsdeploy/geometry.hpp"

#ifndef BSDEPLOY_VERSION
#define BSDEPLOY_VERSION "unknown"
#endif

namespace bsdeploy::cli {
namespace {

using nlohmann::json;

template <typename F>
auto parallel_map(std::size_t n, F f) -> std::vector<decltype(f(std::size_t{}))> {
    std::vector<std::future<decltype(f(std::size_t{}))>> jobs;
    for (std::size_t i = 0; i < n; ++i) jobs.push_back(std::async(std::launch::async, f, i));
    std::vector<decltype(f(std::size_t{}))> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        out.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

void require_epsilons(const std::vector<double>& grid) {
    for (double e : grid) {
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("epsilon grid values must lie in (0, 1), got " + cell(e));
    }
}

void require_positive(const std::vector<double>& grid, const char* what) {
    for (double v : grid) {
        if (!(v > 0.0)) throw ConfigError(std::string(what) + " grid values must be positive, got " + cell(v));
    }
}

std::vector<int> require_counts(const std::vector<double>& grid) {
    std::vector<int> out;
    for (double v : grid) {
        if (!(v >= 1.0 && v <= 1e7 && v == std::floor(v))) {
            throw ConfigError("user-count grid values must be positive integers, got " + cell(v));
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::string cell_or_empty(const std::optional<int>& v) { return v ? cell(*v) : std::string(); }

std::string family_name(SectoringFamily f) { return f == SectoringFamily::MK ? "mk" : "mk+1"; }

std::vector<std::string> scheme_cells(const SchemeRow& r) {
    return {scheme_name(r.scheme), cell(r.num_bs),       cell(r.tx_power),         cell(r.cost),
            cell(r.reduction_pct),  cell(r.coverage_ok), cell(r.within_power_limit)};
}

Table pt_coverage(const RunConfig& cfg, const std::vector<double>& grid) {
    require_positive(grid, "power");
    const ChannelParams ch = cfg.channel();
    const DeploymentModel model(cfg.field, cfg.density_mode);
    struct Job {
        int n;
        int cell;
    };
    std::vector<Job> jobs;
    for (int n = 1; n <= std::min(4, cfg.limits.max_bs); ++n) {
        for (std::size_t c = 0; c < model.cells(n).size(); ++c) jobs.push_back({n, static_cast<int>(c)});
    }
    const auto blocks = parallel_map(jobs.size(), [&](std::size_t i) {
        const Job job = jobs[i];
        const FarthestUEDistribution& dist = model.cells(job.n)[job.cell];
        const CellRegion region = cfg.field.shape == FieldShape::Circular
                                      ? build_cells(model.layout(job.n), cfg.field.radius)[job.cell]
                                      : square_cell(model.division(job.n), cfg.field.side);
        const std::vector<double> far = mc_farthest_distances(region, cfg.field, cfg.mc);
        std::vector<std::vector<std::string>> rows;
        for (double p : grid) {
            const McEstimate mc = collapsed_coverage(far, ch, p);
            rows.push_back({cell(job.n), cell(job.cell), cell(p), cell(coverage_far(dist, ch, p)),
                            cell(coverage_far_linearized(dist, ch, p).value), cell(mc.mean), cell(mc.std_error)});
        }
        return rows;
    });
    Table t{{"n_b", "cell", "p_t_w", "coverage_analytic", "coverage_linearized", "coverage_mc", "mc_std_error"}, {}};
    for (const auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
    return t;
}

Table eps_nb(const RunConfig& cfg, const std::vector<double>& grid) {
    require_epsilons(grid);
    const DeploymentModel model(cfg.field, cfg.density_mode);
    const std::vector<std::pair<double, double>> channels{{3.0, -70.0}, {3.0, -50.0}, {4.0, -70.0}};
    const auto rows = parallel_map(channels.size() * grid.size(), [&](std::size_t i) {
        const auto [alpha, noise] = channels[i / grid.size()];
        ChannelParams ch = cfg.channel();
        ch.path_loss_exp = alpha;
        ch.noise_power = dbm_to_watts(noise);
        OptimizationLimits lim = cfg.limits;
        lim.epsilon = grid[i % grid.size()];
        const SearchResult r = optimize_deployment(model, ch, cfg.cost, lim);
        return std::vector<std::string>{cell(alpha),      cell(noise),
                                        cell(lim.epsilon), cell(r.num_bs()),
                                        cell(r.evaluation.allocation.tx_power), cell(r.evaluation.cost),
                                        cell(r.feasible())};
    });
    return {{"alpha", "noise_dbm", "epsilon", "n_b_star", "p_t_w", "cost_w", "feasible"}, rows};
}

Table eps_cost(const RunConfig& cfg, const std::vector<double>& grid) {
    require_epsilons(grid);
    ChannelParams ch = cfg.channel();
    ch.noise_power = dbm_to_watts(-80.0);
    const DeploymentModel circ(cfg.circular_field(), cfg.density_mode);
    const DeploymentModel sq(cfg.square_field(), cfg.density_mode);
    const std::vector<const DeploymentModel*> models{&circ, &sq};
    const std::vector<double> powers{1.0, 5.0};
    const std::size_t per_model = powers.size() * grid.size();
    const auto rows = parallel_map(models.size() * per_model, [&](std::size_t i) {
        const DeploymentModel& m = *models[i / per_model];
        const double p = powers[(i % per_model) / grid.size()];
        const double eps = grid[i % grid.size()];
        const auto n = fewest_bs_at_power(m, ch, eps, p, cfg.limits.max_bs);
        return std::vector<std::string>{field_shape_name(m.field().shape), cell(p), cell(eps), cell_or_empty(n),
                                        n ? cell(total_cost(*n, p, cfg.cost)) : std::string(),
                                        cell(n.has_value())};
    });
    return {{"field", "p_t_w", "epsilon", "n_b_star", "cost_w", "feasible"}, rows};
}

Table nu_cost(const RunConfig& cfg, const std::vector<double>& grid) {
    const std::vector<int> users = require_counts(grid);
    const ChannelParams ch = cfg.channel();
    const std::vector<FieldShape> shapes{FieldShape::Circular, FieldShape::Square};
    const std::vector<double> epsilons{1e-2, 1e-3};
    const auto blocks = parallel_map(shapes.size() * users.size(), [&](std::size_t i) {
        FieldSpec f = shapes[i / users.size()] == FieldShape::Circular ? cfg.circular_field() : cfg.square_field();
        f.num_users = users[i % users.size()];
        const DeploymentModel model(f, cfg.density_mode);
        std::vector<std::vector<std::string>> rows;
        for (double eps : epsilons) {
            OptimizationLimits lim = cfg.limits;
            lim.epsilon = eps;
            const SearchResult r = optimize_deployment(model, ch, cfg.cost, lim);
            rows.push_back({field_shape_name(f.shape), cell(eps), cell(f.num_users), cell(r.num_bs()),
                            cell(r.evaluation.allocation.tx_power), cell(r.evaluation.cost), cell(r.feasible())});
        }
        return rows;
    });
    Table t{{"field", "epsilon", "num_users", "n_b_star", "p_t_w", "cost_w", "feasible"}, {}};
    for (const auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
    std::stable_sort(t.rows.begin(), t.rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a[0], a[1]) < std::tie(b[0], b[1]);
    });
    return t;
}

Table pt_nb(const RunConfig& cfg, const std::vector<double>& grid) {
    require_positive(grid, "power");
    const ChannelParams ch = cfg.channel();
    const DeploymentModel model(cfg.field, cfg.density_mode);
    const std::vector<double> epsilons{1e-2, 1e-3};
    const auto rows = parallel_map(epsilons.size() * grid.size(), [&](std::size_t i) {
        const double eps = epsilons[i / grid.size()];
        const double p = grid[i % grid.size()];
        const auto n = fewest_bs_at_power(model, ch, eps, p, cfg.limits.max_bs);
        return std::vector<std::string>{cell(eps), cell(p), cell_or_empty(n), cell(n.has_value())};
    });
    return {{"epsilon", "p_t_w", "n_b_star", "feasible"}, rows};
}

Table scheme_bars(const RunConfig& cfg, const std::vector<double>& grid) {
    require_epsilons(grid);
    const ChannelParams ch = cfg.channel();
    const DeploymentModel model(cfg.circular_field(), cfg.density_mode);
    const auto blocks = parallel_map(grid.size(), [&](std::size_t i) {
        OptimizationLimits lim = cfg.limits;
        lim.epsilon = grid[i];
        std::vector<std::vector<std::string>> rows;
        for (const SchemeRow& r : compare_schemes(model, ch, cfg.cost, lim)) {
            std::vector<std::string> row{cell(lim.epsilon)};
            const auto rest = scheme_cells(r);
            row.insert(row.end(), rest.begin(), rest.end());
            rows.push_back(std::move(row));
        }
        return rows;
    });
    Table t{{"epsilon", "scheme", "n_b", "p_t_w", "cost_w", "reduction_pct", "coverage_ok", "within_power_limit"},
            {}};
    for (const auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
    return t;
}

std::filesystem::path prepare(const std::filesystem::path& out) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw ConfigError("cannot create output directory " + out.string() + ": " + ec.message());
    return out;
}

}  // namespace

Sweep parse_sweep(const std::string& s) {
    std::string n;
    for (char c : s) {
        if (c != '_' && c != '-') n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (n == "ptcoverage") return Sweep::PtCoverage;
    if (n == "epsnb") return Sweep::EpsNB;
    if (n == "epscost") return Sweep::EpsCost;
    if (n == "nucost") return Sweep::NuCost;
    if (n == "ptnb") return Sweep::PtNB;
    if (n == "schemebars") return Sweep::SchemeBars;
    throw ConfigError("unknown sweep '" + s + "'; expected PtCoverage, EpsNB, EpsCost, NuCost, PtNB or SchemeBars");
}

std::string sweep_name(Sweep s) {
    switch (s) {
        case Sweep::PtCoverage: return "pt_coverage";
        case Sweep::EpsNB: return "eps_nb";
        case Sweep::EpsCost: return "eps_cost";
        case Sweep::NuCost: return "nu_cost";
        case Sweep::PtNB: return "pt_nb";
        case Sweep::SchemeBars: return "scheme_bars";
    }
    return "unknown";
}

std::vector<double> default_grid(Sweep s) {
    switch (s) {
        case Sweep::PtCoverage: return logspace(1e-2, 1e2, 20);
        case Sweep::EpsNB:
        case Sweep::EpsCost: return logspace(1e-4, 1e-1, 13);
        case Sweep::NuCost: {
            std::vector<double> g;
            for (int n = 10; n <= 200; n += 10) g.push_back(n);
            return g;
        }
        case Sweep::PtNB: return logspace(0.25, 5.0, 14);
        case Sweep::SchemeBars: return {1e-1, 1e-2, 1e-3, 1e-4};
    }
    return {};
}

std::string cell(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt("%.10g", v);
}

std::string cell(int v) { return std::to_string(v); }

std::string cell(bool v) { return v ? "true" : "false"; }

void write_csv(const std::filesystem::path& path, const Table& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

void write_meta(const std::filesystem::path& path, const RunConfig& cfg, const std::string& command,
                const json& extra) {
    json meta{{"command", command}, {"version", BSDEPLOY_VERSION}, {"seed", cfg.mc.seed}, {"config", to_json(cfg)}};
    for (const auto& [k, v] : extra.items()) meta[k] = v;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << meta.dump(2) << '\n';
}

Table sweep_table(const RunConfig& cfg, Sweep sweep, const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError("empty grid");
    switch (sweep) {
        case Sweep::PtCoverage: return pt_coverage(cfg, grid);
        case Sweep::EpsNB: return eps_nb(cfg, grid);
        case Sweep::EpsCost: return eps_cost(cfg, grid);
        case Sweep::NuCost: return nu_cost(cfg, grid);
        case Sweep::PtNB: return pt_nb(cfg, grid);
        case Sweep::SchemeBars: return scheme_bars(cfg, grid);
    }
    throw ConfigError("unknown sweep");
}

std::optional<double> tightest_feasible_epsilon(const DeploymentModel& model, const ChannelParams& ch,
                                                const OptimizationLimits& limits) {
    auto feasible = [&](double eps) {
        return fewest_bs_at_power(model, ch, eps, limits.max_power, limits.max_bs).has_value();
    };
    if (feasible(limits.epsilon)) return limits.epsilon;
    double lo = std::log(limits.epsilon);
    double hi = std::log(1.0 - 1e-9);
    if (!feasible(std::exp(hi))) return std::nullopt;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(std::exp(mid))) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return std::exp(hi);
}

ExitCode cmd_optimize(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
    prepare(out);
    const ChannelParams ch = cfg.channel();
    const DeploymentModel model(cfg.field, cfg.density_mode);
    const SearchResult r = optimize_deployment(model, ch, cfg.cost, cfg.limits);
    const CostEvaluation& e = r.evaluation;

    Table plan{{"field", "density_mode", "n_b_star", "family", "m", "k", "columns", "rows", "p_t_w", "cost_w",
                "feasible", "evaluations"},
               {}};
    std::vector<std::string> row{field_shape_name(cfg.field.shape), density_mode_name(cfg.density_mode),
                                 cell(r.num_bs())};
    if (e.layout) {
        row.insert(row.end(), {family_name(e.layout->sectoring.family), cell(e.layout->sectoring.m),
                               cell(e.layout->sectoring.k), "", ""});
    } else {
        row.insert(row.end(), {"", "", "", cell(e.division->columns), cell(e.division->rows)});
    }
    row.insert(row.end(), {cell(e.allocation.tx_power), cell(e.cost), cell(e.feasible), cell(r.evaluations)});
    plan.rows.push_back(row);
    write_csv(out / "plan.csv", plan);

    Table cells{{"cell", "distance_m", "farthest_point_m", "multiplicity", "min_power_w", "binding"}, {}};
    const auto& dists = model.cells(r.num_bs());
    for (std::size_t i = 0; i < dists.size(); ++i) {
        const double p = min_power_cell(dists[i], ch, cfg.limits.epsilon);
        const bool binding = static_cast<int>(i) == e.allocation.binding_cell;
        if (e.layout) {
            const bool central = e.layout->sectoring.family == SectoringFamily::MKPlus1 && i == 0;
            cells.rows.push_back({cell(static_cast<int>(i)), cell(e.layout->distances[i]),
                                  cell(e.layout->farthest[i]), cell(central ? 1 : e.layout->sectoring.k), cell(p),
                                  cell(binding)});
        } else {
            cells.rows.push_back({cell(static_cast<int>(i)), "", cell(e.division->farthest), cell(r.num_bs()),
                                  cell(p), cell(binding)});
        }
    }
    write_csv(out / "cells.csv", cells);

    Table trace{{"step", "lower", "upper", "probe_p", "probe_q"}, {}};
    for (std::size_t i = 0; i < r.golden.trace.size(); ++i) {
        const GoldenStep& s = r.golden.trace[i];
        trace.rows.push_back({cell(static_cast<int>(i)), cell(s.lower), cell(s.upper), cell(s.probe_p),
                              cell(s.probe_q)});
    }
    write_csv(out / "trace.csv", trace);

    json extra{{"feasible", e.feasible}, {"search_range", {r.range_lower, r.range_upper}}};
    if (r.seed) extra["seed_n_b"] = *r.seed;

    log << "N_B* = " << r.num_bs();
    if (e.layout) log << " (" << e.layout->sectoring.label() << ")";
    if (e.division) log << " (" << e.division->columns << " x " << e.division->rows << ")";
    log << ", P_t* = " << cell(e.allocation.tx_power) << " W, cost = " << cell(e.cost) << " W, "
        << r.evaluations << " evaluations\n";
    if (e.layout) {
        log << "d* =";
        for (double d : e.layout->distances) log << ' ' << cell(d);
        log << " m\n";
    }

    ExitCode code = ExitCode::Ok;
    if (!e.feasible) {
        const auto tight = tightest_feasible_epsilon(model, ch, cfg.limits);
        extra["tightest_feasible_epsilon"] = tight ? json(*tight) : json(nullptr);
        log << "infeasible: P_t* exceeds P_t,max = " << cell(cfg.limits.max_power) << " W for every N_B <= "
            << cfg.limits.max_bs;
        if (tight) log << "; tightest feasible epsilon = " << cell(*tight);
        log << '\n';
        code = ExitCode::Failure;
    }
    write_meta(out / "optimize.meta.json", cfg, "optimize", extra);
    return code;
}

ExitCode cmd_curves(const RunConfig& cfg, Sweep sweep, const std::optional<std::vector<double>>& grid,
                    const std::filesystem::path& out, std::ostream& log) {
    prepare(out);
    const std::vector<double> g = grid ? *grid : default_grid(sweep);
    const Table t = sweep_table(cfg, sweep, g);
    const std::string stem = sweep_name(sweep);
    write_csv(out / (stem + ".csv"), t);
    write_meta(out / (stem + ".meta.json"), cfg, "curves", json{{"sweep", stem}, {"grid", g}});
    log << "wrote " << t.rows.size() << " rows to " << (out / (stem + ".csv")).string() << '\n';
    return ExitCode::Ok;
}

ExitCode cmd_compare(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
    prepare(out);
    const DeploymentModel model(cfg.circular_field(), cfg.density_mode);
    const auto rows = compare_schemes(model, cfg.channel(), cfg.cost, cfg.limits);
    Table t{{"scheme", "n_b", "p_t_w", "cost_w", "reduction_pct", "coverage_ok", "within_power_limit"}, {}};
    for (const SchemeRow& r : rows) {
        t.rows.push_back(scheme_cells(r));
        log << scheme_name(r.scheme) << ": N_B = " << r.num_bs << ", P_t = " << cell(r.tx_power)
            << " W, cost = " << cell(r.cost) << " W, reduction = " << cell(r.reduction_pct) << "%"
            << (r.coverage_ok ? "" : ", misses coverage") << (r.within_power_limit ? "" : ", above P_t,max")
            << '\n';
    }
    write_csv(out / "compare.csv", t);
    write_meta(out / "compare.meta.json", cfg, "compare", json::object());
    return ExitCode::Ok;
}

std::vector<CheckResult> run_checks(const RunConfig& cfg) {
    const ChannelParams ch = cfg.channel();
    const FieldSpec circ = cfg.circular_field();
    const double radius = circ.radius;
    const DeploymentModel model(circ, cfg.density_mode);
    const int max_n = cfg.limits.max_bs;
    std::vector<std::function<CheckResult()>> checks;

    checks.push_back([&] {
        CheckResult c{"table_layout_matches_bruteforce", true, true, ""};
        double worst = 0.0;
        int mismatches = 0;
        for (int n = 3; n <= std::min(35, max_n); ++n) {
            const RadialLayout t = table1_layout(n, radius);
            const RadialLayout b = minimax_layout_bruteforce(n, radius);
            if (!(t.sectoring == b.sectoring)) {
                ++mismatches;
                continue;
            }
            for (std::size_t i = 0; i < t.distances.size(); ++i) {
                worst = std::max(worst, std::abs(t.distances[i] - b.distances[i]));
            }
            worst = std::max(worst, std::abs(t.max_farthest() - b.max_farthest()));
        }
        c.pass = mismatches == 0 && worst <= 1e-6 * radius;
        c.detail = fmt("family mismatches %d, max deviation %.3e m", mismatches, worst);
        return c;
    });

    checks.push_back([&] {
        CheckResult c{"cells_partition_field", true, true, ""};
        double worst = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            double total = 0.0;
            for (const CellRegion& cell : build_cells(model.layout(n), radius)) total += cell.area * cell.multiplicity;
            worst = std::max(worst, std::abs(total / circ.area() - 1.0));
        }
        c.pass = worst <= 1e-9;
        c.detail = fmt("max relative area error %.3e", worst);
        return c;
    });

    checks.push_back([&] {
        CheckResult c{"farthest_user_binomial_identity", true, true, ""};
        double worst = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            for (const auto& d : model.cells(n)) {
                if (d.is_point_mass()) continue;
                const int nu = d.num_users();
                const double a = d.area_fraction();
                for (int i = 0; i <= 20; ++i) {
                    const double r = d.r_max() * i / 20.0;
                    const double f = d.base()->cdf(r);
                    double sum = 0.0;
                    for (int z = 0; z <= nu; ++z) {
                        const double lb = std::lgamma(nu + 1.0) - std::lgamma(z + 1.0) - std::lgamma(nu - z + 1.0);
                        sum += std::exp(lb) * std::pow(a * f, z) * std::pow(1.0 - a, nu - z);
                    }
                    worst = std::max(worst, std::abs(sum - d.cdf_far(r)));
                }
            }
        }
        c.pass = worst <= 1e-10;
        c.detail = fmt("max |binomial sum - closed form| %.3e", worst);
        return c;
    });

    checks.push_back([&] {
        CheckResult c{"allocation_meets_target", true, true, ""};
        double worst = 1.0;
        for (int n = 1; n <= max_n; ++n) {
            const auto& cells = model.cells(n);
            const double p = optimal_power(cells, ch, cfg.limits.epsilon).tx_power;
            for (const auto& d : cells) worst = std::min(worst, coverage_far(d, ch, p));
        }
        c.pass = worst >= 1.0 - cfg.limits.epsilon - 1e-9;
        c.detail = fmt("min coverage at P_t* %.9f, target %.9f", worst, 1.0 - cfg.limits.epsilon);
        return c;
    });

    checks.push_back([&] {
        CheckResult c{"optimizer_matches_exhaustive", true, true, ""};
        const DeploymentModel m(cfg.field, cfg.density_mode);
        const SearchResult r = optimize_deployment(m, ch, cfg.cost, cfg.limits);
        int best = 1;
        SearchKey key = cost_function(1, m, ch, cfg.cost, cfg.limits).key();
        for (int n = 2; n <= max_n; ++n) {
            const SearchKey k = cost_function(n, m, ch, cfg.cost, cfg.limits).key();
            if (k < key) {
                key = k;
                best = n;
            }
        }
        c.pass = !(key < r.evaluation.key()) && !(r.evaluation.key() < key);
        c.detail = fmt("search N_B* %d (%s), exhaustive N_B* %d (%s)", r.num_bs(),
                      cell(r.evaluation.cost).c_str(), best, cell(key.feasible ? key.value : std::numeric_limits<double>::infinity()).c_str());
        return c;
    });

    checks.push_back([&] {
        CheckResult c{"coverage_matches_monte_carlo", false, true, ""};
        double worst = 0.0;
        for (int n = 1; n <= std::min(4, max_n); ++n) {
            const auto regions = build_cells(model.layout(n), radius);
            const auto far = mc_farthest_distances(regions[0], circ, cfg.mc);
            for (double p : logspace(1e-2, 1e2, 5)) {
                const double a = coverage_far(model.cells(n)[0], ch, p);
                const McEstimate e = collapsed_coverage(far, ch, p);
                const double excess = std::abs(a - e.mean) - std::max(0.005, 3.0 * e.std_error);
                worst = std::max(worst, excess);
            }
        }
        c.pass = worst <= 0.0;
        c.detail = fmt("max excess over max(0.005, 3 se) %.4f", worst);
        return c;
    });

    checks.push_back([&] {
        CheckResult c{"farthest_user_cdf_matches_monte_carlo", false, true, ""};
        OptimizationLimits lim = cfg.limits;
        const int n = optimize_deployment(model, ch, cfg.cost, lim).num_bs();
        const auto regions = build_cells(model.layout(n), radius);
        double worst = 0.0;
        double band = 0.0;
        for (std::size_t i = 0; i < regions.size(); ++i) {
            const auto& d = model.cells(n)[i];
            const EmpiricalCdf e(mc_farthest_distances(regions[i], circ, cfg.mc));
            band = e.dkw_band(1e-3);
            worst = std::max(worst, e.ks_distance([&](double r) { return d.cdf_far(r); }));
        }
        c.pass = worst <= band;
        c.detail = fmt("N_B %d, max KS %.4f, DKW band %.4f", n, worst, band);
        return c;
    });

    return parallel_map(checks.size(), [&](std::size_t i) { return checks[i](); });
}

ExitCode cmd_validate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
    prepare(out);
    const auto results = run_checks(cfg);
    json summary = json::array();
    bool all = true;
    for (const CheckResult& c : results) {
        all = all && c.pass;
        summary.push_back(
            {{"name", c.name}, {"kind", c.analytic ? "analytic" : "monte_carlo"}, {"pass", c.pass}, {"detail", c.detail}});
        log << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
    }
    std::ofstream f(out / "validate.json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (out / "validate.json").string());
    f << json{{"passed", all}, {"checks", summary}}.dump(2) << '\n';
    write_meta(out / "validate.meta.json", cfg, "validate", json::object());
    return all ? ExitCode::Ok : ExitCode::Failure;
}

}  // namespace bsdeploy::cli
