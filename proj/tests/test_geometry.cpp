#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bsdeploy/geometry.hpp"
#include "doctest.h"

using namespace bsdeploy;
using doctest::Approx;

namespace {
constexpr double kR = 500.0;
constexpr double kPi = std::numbers::pi;

double total_area(const std::vector<CellRegion>& cells) {
    double s = 0.0;
    for (const auto& c : cells) s += c.area * c.multiplicity;
    return s;
}
}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("table rows at small N_B") {
    RadialLayout l = table1_layout(3, kR);
    CHECK(l.sectoring.label() == "k");
    CHECK(l.distances[0] == Approx(250.0));
    CHECK(l.max_farthest() == Approx(500.0 * std::sin(kPi / 3.0)));
    l = table1_layout(4, kR);
    CHECK(l.sectoring.label() == "k");
    CHECK(l.distances[0] == Approx(353.553390593));
    CHECK(l.max_farthest() == Approx(353.553390593));
    l = table1_layout(1, kR);
    CHECK(l.distances[0] == 0.0);
    CHECK(l.max_farthest() == Approx(kR));
    CHECK(table1_layout(19, kR).sectoring.label() == "k+1");
    CHECK(table1_layout(18, kR).sectoring.label() == "2k");
}

TEST_CASE("minimax oracle agrees with the table") {
    const RadialLayout t4 = table1_layout(4, kR);
    const RadialLayout b4 = minimax_layout_bruteforce(4, kR);
    CHECK(b4.sectoring == t4.sectoring);
    CHECK(b4.distances[0] == Approx(t4.distances[0]).epsilon(1e-6));
    const RadialLayout b18 = minimax_layout_bruteforce(18, kR);
    CHECK(b18.sectoring.label() == "2k");
    const RadialLayout t18 = table1_layout(18, kR);
    for (std::size_t i = 0; i < t18.distances.size(); ++i) CHECK(b18.distances[i] == Approx(t18.distances[i]).epsilon(1e-8));
    const RadialLayout b2 = minimax_layout_bruteforce(2, kR);
    CHECK(b2.max_farthest() == Approx(kR));
    CHECK(b2.distances[0] == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("table layouts are internally consistent") {
    for (int n = 1; n <= 35; ++n) {
        const RadialLayout l = table1_layout(n, kR);
        const auto cells = build_cells(l, kR);
        CHECK(total_area(cells) == Approx(kPi * kR * kR).epsilon(1e-6));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            CHECK(l.distances[i] >= 0.0);
            CHECK(l.distances[i] <= kR);
            CHECK(std::abs(farthest_point_distance(cells[i]) - l.farthest[i]) <= 1e-9 * kR);
        }
    }
}

TEST_CASE("farthest-point envelope") {
    // Non-increasing while one family dominates; from 20 on the 2k rows sit
    // above the neighbouring 2k+1 rows, so the envelope alternates.
    for (int n = 2; n <= 21; ++n) {
        CHECK(table1_layout(n, kR).max_farthest() <= table1_layout(n - 1, kR).max_farthest() + 1e-9);
    }
    CHECK(table1_layout(22, kR).max_farthest() > table1_layout(21, kR).max_farthest());
    CHECK(table1_layout(34, kR).max_farthest() > table1_layout(33, kR).max_farthest());
    for (int n = 23; n <= 35; n += 2) {
        CHECK(table1_layout(n, kR).max_farthest() < table1_layout(n - 2, kR).max_farthest());
        CHECK(table1_layout(n + 1, kR).max_farthest() < table1_layout(n - 1, kR).max_farthest());
    }
}

TEST_CASE("global minimax search finds a tighter 2k+1 placement at 19") {
    const RadialLayout eq = minimax_layout_bruteforce(19, kR);
    const RadialLayout gl = minimax_layout_global(19, kR);
    CHECK(eq.sectoring.label() == "k+1");
    CHECK(gl.sectoring.label() == "2k+1");
    CHECK(gl.max_farthest() < eq.max_farthest() - 1.0);
    CHECK(gl.max_farthest() == Approx(171.0172).epsilon(1e-5));
}

TEST_CASE("3k beats 2k beyond the table's 2k range start") {
    for (int n : {36, 42}) {
        const RadialLayout b = minimax_layout_bruteforce(n, kR);
        CHECK(b.sectoring.label() == "3k");
        CHECK(b.max_farthest() < table1_layout(n, kR).max_farthest());
    }
}

TEST_CASE("cell shapes") {
    auto cells = build_cells(table1_layout(1, kR), kR);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].area == Approx(kPi * kR * kR));
    CHECK(farthest_point_distance(cells[0]) == Approx(kR));
    CHECK(cell_boundary(cells[0]).full_disk);

    cells = build_cells(table1_layout(3, kR), kR);
    CHECK(cells[0].area == Approx(kPi * kR * kR / 3.0));
    CHECK(cells[0].multiplicity == 3);

    const RadialLayout l18 = table1_layout(18, kR);
    cells = build_cells(l18, kR);
    const double phi = l18.sectoring.half_angle();
    const double s = l18.distances[1] + l18.distances[0];
    CHECK(cells[1].area == Approx(phi * kR * kR - 0.25 * std::tan(phi) * s * s));
    CHECK(cell_area(cells[1]) == Approx(cells[1].area));

    cells = build_cells(table1_layout(4, kR), kR);
    CHECK(farthest_point_distance(cells[0]) == Approx(kR / (2.0 * std::cos(kPi / 4.0))));
}

TEST_CASE("contains and bounding box") {
    const auto cells = build_cells(table1_layout(7, kR), kR);
    CHECK(cells[0].contains({0.0, 0.0}));
    CHECK(cells[1].contains(cells[1].bs));
    CHECK_FALSE(cells[1].contains({0.0, 0.0}));
    const auto [lo, hi] = bounding_box(cells[0]);
    CHECK(lo.x < 0.0);
    CHECK(hi.x > 0.0);
}

TEST_CASE("square division") {
    SquareDivision d = square_division(9, 1.0);
    CHECK(d.columns == 3);
    CHECK(d.rows == 3);
    d = square_division(12, 1.0);
    CHECK(d.num_bs() == 12);
    CHECK(std::max(d.columns, d.rows) == 4);
    d = square_division(7, 1.0);
    CHECK(std::max(d.columns, d.rows) == 7);
    for (int n = 1; n <= 200; ++n) {
        d = square_division(n, 2.0);
        double best = std::numeric_limits<double>::infinity();
        for (int p = 1; p <= n; ++p) {
            if (n % p) continue;
            const int q = n / p;
            best = std::min(best, std::sqrt(1.0 / (p * p) + 1.0 / (q * q)));
        }
        CHECK(d.num_bs() == n);
        CHECK(d.farthest == Approx(best).epsilon(1e-12));
    }
    const CellRegion c = square_cell(square_division(4, 2.0), 2.0);
    CHECK(farthest_point_distance(c) == Approx(std::sqrt(2.0) / 2.0));
    CHECK(c.multiplicity == 4);
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS(table1_layout(0, kR));
    CHECK_THROWS(table1_layout(3, -1.0));
}

}
