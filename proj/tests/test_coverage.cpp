#include <cmath>
#include <memory>
#include <numbers>

#include "bsdeploy/allocation.hpp"
#include "bsdeploy/coverage.hpp"
#include "bsdeploy/sim.hpp"
#include "doctest.h"

using namespace bsdeploy;
using doctest::Approx;

namespace {
constexpr double kR = 500.0;

std::shared_ptr<const CellDistanceDistribution> disk() {
    CellRegion c;
    c.disk = Disk{{0.0, 0.0}, kR};
    c.area = std::numbers::pi * kR * kR;
    return std::make_shared<const CellDistanceDistribution>(c);
}
}  // namespace

TEST_SUITE("coverage") {

TEST_CASE("limits") {
    const FarthestUEDistribution d(disk(), 10, 0.4);
    ChannelParams ch;
    CHECK(coverage_far(d, ch, 1e12) == Approx(1.0).epsilon(1e-9));
    CHECK(coverage_far(d, ch, 1e-12) == Approx(d.empty_atom()).epsilon(1e-9));
    CHECK(coverage_far_linearized(d, ch, 1e12).value == Approx(1.0).epsilon(1e-9));
    const FarthestUEDistribution pm = FarthestUEDistribution::point_mass(250.0);
    CHECK(coverage_far(pm, ch, 2.0) == Approx(std::exp(-ch.noise_threshold() * std::pow(250.0, 4) / 2.0)));
}

TEST_CASE("moments") {
    const FarthestUEDistribution pm = FarthestUEDistribution::point_mass(250.0);
    CHECK(alpha_moment(pm, 4.0) == Approx(std::pow(250.0, 4)));
    for (int n : {1, 5, 50}) {
        const FarthestUEDistribution d(disk(), n, 1.0);
        CHECK(alpha_moment(d, 2.0) == Approx(kR * kR * n / (n + 1.0)).epsilon(1e-9));
    }
    const FarthestUEDistribution part(disk(), 12, 0.25);
    CHECK(alpha_moment(part, 0.0) == Approx(1.0 - part.empty_atom()).epsilon(1e-9));
}

TEST_CASE("monotonicity in power, threshold and noise") {
    const FieldSpec field = FieldSpec::circular(kR, 120);
    const auto dists = layout_distributions(table1_layout(7, kR), field, DensityMode::Moderate);
    for (const auto& d : dists) {
        ChannelParams ch;
        double prev = 0.0;
        for (double p = 0.05; p < 50.0; p *= 1.7) {
            const double c = coverage_far(d, ch, p);
            CHECK(c > prev);
            prev = c;
        }
        double last = 1.0;
        for (double t = 0.01; t < 10.0; t *= 2.0) {
            ch.threshold = t;
            const double c = coverage_far(d, ch, 1.0);
            CHECK(c < last);
            last = c;
        }
        ch = ChannelParams{};
        last = 1.0;
        for (double s = 1e-12; s < 1e-8; s *= 3.0) {
            ch.noise_power = s;
            const double c = coverage_far(d, ch, 1.0);
            CHECK(c < last);
            last = c;
        }
    }
}

TEST_CASE("linearized form is a lower bound within its regime") {
    const FieldSpec field = FieldSpec::circular(kR, 120);
    const ChannelParams ch;
    const auto dists = layout_distributions(table1_layout(4, kR), field, DensityMode::Moderate);
    for (double eps : {0.1, 0.03, 0.01, 0.001}) {
        const double p = optimal_power(dists, ch, eps).tx_power;
        for (const auto& d : dists) {
            const LinearizedCoverage lin = coverage_far_linearized(d, ch, p);
            const double exact = coverage_far(d, ch, p);
            CHECK(exact >= lin.value);
            if (!lin.outside_regime) CHECK(exact - lin.value <= 0.5 * lin.max_argument * lin.max_argument + 1e-12);
        }
    }
}

TEST_CASE("N_B = 4 analytic curve matches simulated farthest distances") {
    const FieldSpec field = FieldSpec::circular(kR, 120);
    const ChannelParams ch;
    const RadialLayout l = table1_layout(4, kR);
    const auto dists = layout_distributions(l, field, DensityMode::Moderate);
    McConfig mc;
    mc.deployments = 100000;
    mc.seed = 8;
    const auto far = mc_farthest_distances(build_cells(l, kR)[0], field, mc);
    for (double p = 0.02; p < 60.0; p *= 2.0) {
        const McEstimate e = collapsed_coverage(far, ch, p);
        CHECK(std::abs(coverage_far(dists[0], ch, p) - e.mean) <= std::max(0.005, 3.0 * e.std_error));
    }
}

TEST_CASE("query validation") {
    CoverageQuery q;
    CHECK_THROWS(q.validate());
    const FarthestUEDistribution pm = FarthestUEDistribution::point_mass(10.0);
    q.dist = &pm;
    q.tx_power = -1.0;
    CHECK_THROWS(q.validate());
    q.tx_power = 1.0;
    CHECK_NOTHROW(q.validate());
    CHECK(coverage_far(q) == Approx(coverage_far(pm, q.channel, 1.0)));
}

}
