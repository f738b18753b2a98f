#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "bsdeploy/search.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bsdeploy;
using doctest::Approx;

namespace {
constexpr double kR = 500.0;
}

TEST_SUITE("search") {

TEST_CASE("search key ordering") {
    CHECK(SearchKey::of(5.0) < SearchKey::of(6.0));
    CHECK(SearchKey::of(1e9) < SearchKey{false, 0.1});
    CHECK(SearchKey{false, 1.0} < SearchKey{false, 2.0});
    CHECK(SearchKey::of(3.0) <= SearchKey::of(3.0));
}

TEST_CASE("cost function pipeline") {
    const DeploymentModel model(FieldSpec::circular(kR, 120), DensityMode::Moderate);
    const ChannelParams ch;
    const CostModel cm;
    OptimizationLimits lim;
    lim.epsilon = 1e-2;
    const CostEvaluation e = cost_function(35, model, ch, cm, lim);
    CHECK(e.feasible);
    CHECK(std::isfinite(e.cost));
    CHECK(e.cost == Approx(35 * (cm.a_b * e.allocation.tx_power + cm.b_b)));
    const CostEvaluation one = cost_function(1, model, ch, cm, lim);
    CHECK(one.layout->distances[0] == 0.0);
    CHECK(model.cells(1).size() == 1);
    CHECK_THROWS_AS(cost_function(0, model, ch, cm, lim), std::out_of_range);
    CHECK_THROWS_AS(cost_function(36, model, ch, cm, lim), std::out_of_range);

    lim.epsilon = 1e-4;
    const CostEvaluation inf = cost_function(3, model, ch, cm, lim);
    CHECK_FALSE(inf.feasible);
    CHECK(inf.cost == std::numeric_limits<double>::infinity());
    CHECK_FALSE(inf.key().feasible);
    CHECK(inf.unconstrained_cost(cm) == Approx(3 * cm.per_bs(inf.allocation.tx_power)));

    const CostEvaluation standalone = cost_function(7, FieldSpec::circular(kR, 120), ch, cm, OptimizationLimits{},
                                                    DensityMode::Moderate);
    CHECK(standalone.allocation.tx_power == Approx(cost_function(7, model, ch, cm, OptimizationLimits{}).allocation.tx_power));
}

TEST_CASE("square dense-user cost matches the objective") {
    const FieldSpec f = FieldSpec::equal_area_square(kR, 120);
    const DeploymentModel model(f, DensityMode::Asymptotic);
    const ChannelParams ch;
    const CostModel cm;
    const OptimizationLimits lim;
    const double c_b = ch.noise_threshold() / lim.epsilon;
    for (int n = 1; n <= 35; ++n) {
        const SquareDivision d = square_division(n, f.side);
        const double r = 0.5 * f.side * std::sqrt(1.0 / (d.columns * d.columns) + 1.0 / (d.rows * d.rows));
        const CostEvaluation e = cost_function(n, model, ch, cm, lim);
        INFO("N_B = ", n);
        CHECK(e.unconstrained_cost(cm) == Approx(n * (cm.a_b * c_b * std::pow(r, 4.0) + cm.b_b)));
    }
}

TEST_CASE("golden section on simple functions") {
    const GoldenResult r = golden_section([](int n) { return std::pow(n - 7.0, 2.0); }, 1, 35, 2);
    CHECK(r.best == 7);
    CHECK(r.evaluations() <= 15);
    CHECK_FALSE(r.trace.empty());

    const GoldenResult flat = golden_section([](int) { return 4.0; }, 1, 35, 2);
    CHECK(flat.best_key.value == 4.0);
    CHECK(flat.best >= flat.final_lower);
    CHECK(flat.best <= flat.final_upper);

    const GoldenResult tiny = golden_section([](int n) { return -n; }, 3, 5, 2);
    CHECK(tiny.trace.empty());
    CHECK(tiny.best == 5);
    CHECK(tiny.final_lower == 3);
    CHECK(tiny.final_upper == 5);

    CHECK_THROWS_AS(golden_section([](int n) { return n * 1.0; }, 5, 3, 2), std::invalid_argument);
}

TEST_CASE("golden section with bracket scan matches exhaustive search on unimodal functions") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const double c = 1.0 + 34.0 * u(rng);
        const double p = 0.5 + 3.0 * u(rng);
        const double slope = u(rng) < 0.3 ? 0.0 : u(rng);
        auto f = [&](int n) { return std::pow(std::abs(n - c), p) + slope * n; };
        const GoldenResult r = golden_section(f, 1, 35, 2);
        const int ex = oracle::exhaustive_argmin([&](int n) { return SearchKey::of(f(n)); }, 1, 35);
        CHECK(f(r.best) == Approx(f(ex)));
        CHECK(r.evaluations() <= 15);
    }
}

TEST_CASE("probes are memoized") {
    std::atomic<int> calls{0};
    const GoldenResult r = golden_section(
        [&](int n) {
            ++calls;
            return std::abs(n - 20.0);
        },
        1, 35, 2);
    CHECK(calls.load() == r.evaluations());
    CHECK(r.verbatim_best == (r.final_lower + r.final_upper + 1) / 2);
}

TEST_CASE("square closed-form seed") {
    const ChannelParams ch;
    CostModel cm;
    const double a = FieldSpec::equal_area_square(kR, 120).side;
    const double seed = square_closed_form_seed(a, ch, cm, 1e-3);
    CHECK(seed == Approx(6.94).epsilon(0.01 / 6.94));
    cm.b_b *= 4.0;
    CHECK(square_closed_form_seed(a, ch, cm, 1e-3) == Approx(0.5 * seed));
    ChannelParams two = ch;
    two.path_loss_exp = 2.0;
    CHECK_THROWS_AS(square_closed_form_seed(a, two, cm, 1e-3), std::invalid_argument);

    // The p = q objective is discretely convex.
    const double c_b = ch.noise_threshold() / 1e-3;
    auto obj = [&](double n) { return n * (c_b * std::pow(a / std::sqrt(2.0 * n), 4.0) + 32.0); };
    for (int n = 2; n < 100; ++n) CHECK(obj(n + 1) - 2.0 * obj(n) + obj(n - 1) > 0.0);
}

TEST_CASE("square optimizer") {
    const FieldSpec f = FieldSpec::equal_area_square(kR, 120);
    const ChannelParams ch;
    const CostModel cm;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        OptimizationLimits lim;
        lim.epsilon = eps;
        const DeploymentModel asy(f, DensityMode::Asymptotic);
        const DeploymentModel mod(f, DensityMode::Moderate);
        const SearchResult ra = square_optimize(asy, ch, cm, lim);
        const SearchResult rm = square_optimize(mod, ch, cm, lim);
        CHECK(ra.num_bs() == oracle::exhaustive_optimum(asy, ch, cm, lim));
        CHECK(rm.num_bs() == oracle::exhaustive_optimum(mod, ch, cm, lim));
        CHECK(rm.evaluation.cost <= ra.evaluation.cost);
    }
    OptimizationLimits lim;
    const SearchResult r = square_optimize(DeploymentModel(f, DensityMode::Asymptotic), ch, cm, lim);
    REQUIRE(r.seed);
    CHECK(*r.seed == Approx(6.942).epsilon(1e-3));

    ChannelParams two;
    two.path_loss_exp = 2.0;
    lim.max_power = 1e12;
    const SearchResult r2 = square_optimize(DeploymentModel(f, DensityMode::Asymptotic), two, cm, lim);
    CHECK(r2.num_bs() == 1);
    CHECK_THROWS_AS(square_optimize(DeploymentModel(FieldSpec::circular(kR, 10), DensityMode::Asymptotic), ch, cm,
                                    OptimizationLimits{}),
                    std::invalid_argument);
}

TEST_CASE("optimal N_B follows the channel and the target") {
    const DeploymentModel model(FieldSpec::circular(kR, 120), DensityMode::Moderate);
    const CostModel cm;
    auto n_star = [&](double alpha, double noise_dbm, double eps) {
        ChannelParams ch;
        ch.path_loss_exp = alpha;
        ch.noise_power = dbm_to_watts(noise_dbm);
        OptimizationLimits lim;
        lim.epsilon = eps;
        return optimize_deployment(model, ch, cm, lim).num_bs();
    };
    for (double eps : {1e-1, 1e-2}) {
        int prev = 0;
        for (double s : {-80.0, -75.0, -70.0, -65.0, -60.0}) {
            const int n = n_star(4.0, s, eps);
            CHECK(n >= prev);
            prev = n;
        }
    }
    int prev = 0;
    for (double a : {3.0, 3.5, 4.0}) {
        const int n = n_star(a, -70.0, 1e-3);
        CHECK(n >= prev);
        prev = n;
    }
    prev = 0;
    for (double eps : {1e-1, 3e-2, 1e-2, 3e-3}) {
        const int n = n_star(4.0, -70.0, eps);
        CHECK(n >= prev);
        prev = n;
    }
    CHECK(n_star(3.0, -70.0, 0.5) == 1);
}

TEST_CASE("scheme comparison") {
    const DeploymentModel model(FieldSpec::circular(kR, 120), DensityMode::Moderate);
    const ChannelParams ch;
    const CostModel cm;
    OptimizationLimits lim;
    lim.epsilon = 1e-2;
    const auto rows = compare_schemes(model, ch, cm, lim);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].scheme == Scheme::Fixed);
    CHECK(rows[0].cost == 1890.0);
    CHECK(rows[0].reduction_pct == 0.0);
    CHECK(scheme_name(rows[1].scheme) == "onb");
    CHECK(rows[1].tx_power == 4.0);
    CHECK(rows[1].coverage_ok);
    CHECK(optimal_power(model.cells(rows[1].num_bs), ch, lim.epsilon).tx_power <= 4.0);
    if (rows[1].num_bs > 1) CHECK(optimal_power(model.cells(rows[1].num_bs - 1), ch, lim.epsilon).tx_power > 4.0);
    CHECK(rows[2].num_bs == 35);
    CHECK(rows[3].cost <= rows[1].cost);
    CHECK(rows[3].cost <= rows[2].cost);

    const RadialLayout fl = fixed_layout(FixedScheme{}, kR);
    CHECK(fl.sectoring.k == 35);
    CHECK(fl.distances[0] == 250.0);
}

}
