#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bsdeploy/geometry.hpp"

namespace bsdeploy {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_table_range(int n) { return n >= 1 && n <= 45; }

void add_wedge(CellRegion& cell, int k, double phi) {
    if (k < 2) return;
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    cell.half_planes.push_back(HalfPlane{{-s, c}, 0.0});   // y <= x tan(phi)
    cell.half_planes.push_back(HalfPlane{{-s, -c}, 0.0});  // -y <= x tan(phi)
    cell.wedge = Wedge{{0.0, 0.0}, phi, 0.0};
}

// Max farthest-point distance over all cells; +inf for an invalid placement.
double minimax_objective(const SectoringType& s, const std::vector<double>& d, double radius) {
    for (double x : d) {
        if (!(x >= 0.0 && x <= radius)) return kInf;
    }
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (!(d[i] > d[i - 1])) return kInf;
    }
    RadialLayout probe{s, d, {}, false};
    try {
        const auto cells = build_cells(probe, radius);
        double worst = 0.0;
        for (const auto& c : cells) worst = std::max(worst, farthest_point_distance(c));
        return worst;
    } catch (const std::domain_error&) {
        return kInf;
    }
}

// Distances chained outward from d1 so that every cell corner on the sector
// edge sits at the common radius r (the bisector corner is shared by both
// neighbours). Returns the residual l_m - r and fills `out`; nullopt when the
// chain leaves the field or folds back.
std::optional<double> equalization_residual(const SectoringType& s, double d1, double radius,
                                            std::vector<double>& out) {
    const double phi = s.half_angle();
    const double c = std::cos(phi);
    const double t = std::tan(phi);
    const bool central = s.family == SectoringFamily::MKPlus1;
    const double r = central ? d1 / (2.0 * c) : d1;
    out.clear();
    if (central) out.push_back(0.0);
    out.push_back(d1);
    double d = d1;
    for (int j = 1; j < s.m; ++j) {
        const double disc = r * r * (1.0 + t * t) - t * t * d * d;
        if (disc < 0.0) return std::nullopt;
        const double b = (d + std::sqrt(disc)) / (1.0 + t * t);
        if (b <= d || b / c >= radius) return std::nullopt;
        const double next = 2.0 * b - d;
        if (next <= d || next > radius) return std::nullopt;
        out.push_back(next);
        d = next;
    }
    const double lm = std::sqrt(std::max(0.0, d * d + radius * radius - 2.0 * d * radius * c));
    return lm - r;
}

std::vector<std::vector<double>> equalization_candidates(const SectoringType& s, double radius) {
    std::vector<std::vector<double>> roots;
    if (s.k < 3) return roots;  // sector edges must form a convex wedge
    constexpr int kScan = 2000;
    std::vector<double> chain;
    std::optional<double> prev_g;
    double prev_x = 0.0;
    for (int i = 1; i <= kScan; ++i) {
        const double x = radius * i / kScan;
        const auto g = equalization_residual(s, x, radius, chain);
        if (g && prev_g && ((*prev_g > 0.0) != (*g > 0.0))) {
            double lo = prev_x;
            double hi = x;
            const bool lo_positive = *prev_g > 0.0;
            while (hi - lo > 1e-13 * radius) {
                const double mid = 0.5 * (lo + hi);
                const auto gm = equalization_residual(s, mid, radius, chain);
                if (!gm) break;
                if ((*gm > 0.0) == lo_positive) lo = mid; else hi = mid;
            }
            if (equalization_residual(s, 0.5 * (lo + hi), radius, chain)) roots.push_back(chain);
        }
        prev_g = g;
        prev_x = x;
    }
    return roots;
}

// Pattern search over all sign combinations of coordinate steps.
std::vector<double> polish(const SectoringType& s, std::vector<double> d, double radius) {
    const std::size_t first = s.family == SectoringFamily::MKPlus1 ? 1 : 0;
    const std::size_t dims = d.size() - first;
    if (dims == 0) return d;
    std::vector<std::vector<int>> dirs;
    const int total = static_cast<int>(std::pow(3, dims));
    for (int code = 0; code < total; ++code) {
        std::vector<int> dir(dims);
        int c = code;
        bool nonzero = false;
        for (std::size_t j = 0; j < dims; ++j) {
            dir[j] = c % 3 - 1;
            c /= 3;
            nonzero |= dir[j] != 0;
        }
        if (nonzero) dirs.push_back(dir);
    }
    double best = minimax_objective(s, d, radius);
    double step = radius / 32.0;
    while (step > 1e-13 * radius) {
        bool improved = false;
        for (const auto& dir : dirs) {
            std::vector<double> trial = d;
            for (std::size_t j = 0; j < dims; ++j) trial[first + j] += step * dir[j];
            const double v = minimax_objective(s, trial, radius);
            if (v < best) {
                best = v;
                d = std::move(trial);
                improved = true;
            }
        }
        if (!improved) step *= 0.5;
    }
    return d;
}

std::vector<double> grid_best(const SectoringType& s, double radius) {
    const bool central = s.family == SectoringFamily::MKPlus1;
    const int dims = s.m;
    const int per_axis = dims == 1 ? 400 : (dims == 2 ? 64 : 24);
    std::vector<double> best_d;
    double best = kInf;
    std::vector<int> idx(dims, 0);
    std::vector<double> d;
    while (true) {
        d.clear();
        if (central) d.push_back(0.0);
        for (int j = 0; j < dims; ++j) d.push_back(radius * idx[j] / (per_axis - 1));
        const double v = minimax_objective(s, d, radius);
        if (v < best) {
            best = v;
            best_d = d;
        }
        int j = 0;
        while (j < dims && ++idx[j] == per_axis) idx[j++] = 0;
        if (j == dims) break;
    }
    return best_d;
}

std::vector<SectoringType> families_for(int num_bs) {
    std::vector<SectoringType> out;
    for (int m = 1; m <= 3; ++m) {
        if (num_bs % m == 0) out.push_back({SectoringFamily::MK, m, num_bs / m});
    }
    for (int m = 1; m <= 2; ++m) {
        const int rest = num_bs - 1;
        if (rest >= m && rest % m == 0) out.push_back({SectoringFamily::MKPlus1, m, rest / m});
    }
    return out;
}

}  // namespace

double SectoringType::half_angle() const { return kPi / k; }

std::string SectoringType::label() const {
    std::string s = m == 1 ? "k" : std::to_string(m) + "k";
    if (family == SectoringFamily::MKPlus1) s += "+1";
    return s;
}

double RadialLayout::max_farthest() const {
    return farthest.empty() ? 0.0 : *std::max_element(farthest.begin(), farthest.end());
}

std::vector<CellRegion> build_cells(const RadialLayout& layout, double radius) {
    const SectoringType& s = layout.sectoring;
    const auto& d = layout.distances;
    const bool central = s.family == SectoringFamily::MKPlus1;
    const std::size_t expected = static_cast<std::size_t>(s.m) + (central ? 1 : 0);
    if (s.m < 1 || s.k < 1 || d.size() != expected) {
        throw std::invalid_argument("layout distances do not match its sectoring type");
    }
    if (central && d[0] != 0.0) throw std::domain_error("central BS must sit at the field center");
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (!(d[i] > d[i - 1])) throw std::domain_error("BS distances must be strictly increasing");
    }
    if (d.front() < 0.0 || d.back() > radius) throw std::domain_error("BS distance outside the field");

    const double phi = s.half_angle();
    const Disk field{{0.0, 0.0}, radius};
    std::vector<CellRegion> cells;
    cells.reserve(d.size());

    std::size_t first_ring = 0;
    if (central) {
        CellRegion c;
        c.bs = {0.0, 0.0};
        for (int j = 0; j < s.k; ++j) {
            const double ang = 2.0 * kPi * j / s.k;
            c.half_planes.push_back(HalfPlane{{std::cos(ang), std::sin(ang)}, 0.5 * d[1]});
        }
        c.disk = field;
        c.multiplicity = 1;
        cells.push_back(std::move(c));
        first_ring = 1;
    }
    for (std::size_t i = first_ring; i < d.size(); ++i) {
        CellRegion c;
        c.bs = {d[i], 0.0};
        add_wedge(c, s.k, phi);
        if (i > 0) {
            const double b = 0.5 * (d[i - 1] + d[i]);
            c.half_planes.push_back(HalfPlane{{-1.0, 0.0}, -b});
        }
        if (i + 1 < d.size()) {
            const double b = 0.5 * (d[i] + d[i + 1]);
            c.half_planes.push_back(HalfPlane{{1.0, 0.0}, b});
        }
        c.disk = field;
        c.multiplicity = s.k;
        cells.push_back(std::move(c));
    }
    for (auto& c : cells) {
        c.area = cell_area(c);
        if (!(c.area > 1e-12 * radius * radius)) throw std::domain_error("degenerate cell with empty interior");
        if (!c.contains(c.bs, 1e-9 * radius)) throw std::domain_error("BS lies outside its own cell");
    }
    return cells;
}

RadialLayout make_layout(const SectoringType& sectoring, std::vector<double> distances, double radius) {
    RadialLayout layout{sectoring, std::move(distances), {}, false};
    for (const auto& c : build_cells(layout, radius)) layout.farthest.push_back(farthest_point_distance(c));
    return layout;
}

SectoringType table1_family(int n) {
    if (!is_table_range(n)) {
        throw std::out_of_range("closed-form layout table covers 1 <= N_B <= 45, got " + std::to_string(n));
    }
    if (n <= 6) return {SectoringFamily::MK, 1, n};
    if (n <= 17 || n == 19) return {SectoringFamily::MKPlus1, 1, n - 1};
    if (n % 2 == 0) return {SectoringFamily::MK, 2, n / 2};
    return {SectoringFamily::MKPlus1, 2, (n - 1) / 2};
}

std::optional<RadialLayout> table1_row(const SectoringType& s, double radius) {
    const double R = radius;
    const int k = s.k;
    RadialLayout out{s, {}, {}, true};
    double r = 0.0;
    if (s.family == SectoringFamily::MK && s.m == 1) {
        if (k <= 2) {
            out.distances = {0.0};
            r = R;
        } else if (k == 3) {
            out.distances = {R * std::cos(kPi / 3)};
            r = R * std::sin(kPi / 3);
        } else {
            r = R / (2.0 * std::cos(kPi / k));
            out.distances = {r};
        }
    } else if (s.family == SectoringFamily::MKPlus1 && s.m == 1) {
        const double c = std::cos(kPi / k);
        const double den = 4.0 * c * c - 1.0;
        if (k < 3 || den <= 0.0) return std::nullopt;
        r = R / den;
        out.distances = {0.0, 2.0 * R * c / den};
    } else if (s.family == SectoringFamily::MK && s.m == 2) {
        // phi = 2 pi / N_B = pi / k
        const double c2 = std::cos(kPi / k);
        const double c4 = std::cos(2.0 * kPi / k);
        const double den = 4.0 * c2 * c4;
        if (k < 3 || den <= 0.0) return std::nullopt;
        r = R / den;
        // The outer BS sits at d1 (1 + 2 cos 2phi): mirror of d1 across the
        // bisector through the equidistant corner at x = 2 d1 cos^2 phi.
        out.distances = {r, R * (1.0 + 2.0 * c4) / den};
    } else if (s.family == SectoringFamily::MKPlus1 && s.m == 2) {
        const double c2 = std::cos(kPi / k);
        const double c4 = std::cos(2.0 * kPi / k);
        const double den = 16.0 * c2 * c2 * c4 * c4 - 1.0;
        if (k < 3 || den <= 0.0) return std::nullopt;
        const double num = R * (1.0 + 2.0 * c4);
        r = num / den;
        out.distances = {0.0, 2.0 * num * c2 / den, 4.0 * num * c4 * c2 / den};
    } else if (s.family == SectoringFamily::MK && s.m == 3) {
        const double c3 = std::cos(kPi / k);
        const double c6 = std::cos(2.0 * kPi / k);
        const double c12 = std::cos(4.0 * kPi / k);
        const double den = (2.0 * c6 + 1.0) * (c12 + c6);
        if (k < 3 || den <= 0.0) return std::nullopt;
        r = R * c3 / den;
        out.distances = {r, r * (1.0 + 2.0 * c6), r * (1.0 + 2.0 * c6 + 2.0 * c12)};
    } else {
        return std::nullopt;
    }
    out.farthest.assign(out.distances.size(), r);
    return out;
}

RadialLayout table1_layout(int num_bs, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
    const auto row = table1_row(table1_family(num_bs), radius);
    if (!row) throw std::logic_error("closed-form row undefined for N_B = " + std::to_string(num_bs));
    return *row;
}

std::optional<RadialLayout> minimax_layout_for(const SectoringType& s, double radius,
                                               MinimaxSearch search) {
    std::vector<std::vector<double>> candidates = equalization_candidates(s, radius);
    const std::size_t exact = candidates.size();
    if (s.m == 1 && s.family == SectoringFamily::MK) {
        // Boundary candidates: BS at the apex, and the stationary point of the
        // arc-endpoint distance when the apex distance is not binding.
        candidates.push_back({0.0});
        if (s.k >= 2) candidates.push_back({radius * std::cos(s.half_angle())});
    }
    if (search == MinimaxSearch::Global) {
        for (std::size_t i = 0; i < exact; ++i) candidates.push_back(polish(s, candidates[i], radius));
        const auto coarse = grid_best(s, radius);
        if (!coarse.empty()) candidates.push_back(polish(s, coarse, radius));
    }

    std::optional<std::vector<double>> best_d;
    double best = kInf;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double v = minimax_objective(s, candidates[i], radius);
        // Exact equalization roots win near-ties against numerically polished points.
        const double margin = i < exact ? 0.0 : 1e-10 * radius;
        if (v < best - margin || (!best_d && v < kInf)) {
            best = v;
            best_d = candidates[i];
        }
    }
    if (!best_d) return std::nullopt;
    return make_layout(s, *best_d, radius);
}

namespace {

RadialLayout best_over_families(int num_bs, double radius, MinimaxSearch search) {
    if (num_bs < 1) throw std::invalid_argument("N_B must be >= 1");
    std::optional<RadialLayout> best;
    for (const SectoringType& s : families_for(num_bs)) {
        auto layout = minimax_layout_for(s, radius, search);
        if (!layout) continue;
        // Ties within 1e-9 R keep the earlier family: MK by increasing m, then MK+1.
        if (!best || layout->max_farthest() < best->max_farthest() - 1e-9 * radius) best = std::move(layout);
    }
    if (!best) throw std::logic_error("no feasible sectoring for N_B = " + std::to_string(num_bs));
    return *best;
}

}  // namespace

RadialLayout minimax_layout_bruteforce(int num_bs, double radius) {
    return best_over_families(num_bs, radius, MinimaxSearch::Equalization);
}

RadialLayout minimax_layout_global(int num_bs, double radius) {
    return best_over_families(num_bs, radius, MinimaxSearch::Global);
}

RadialLayout optimal_layout(int num_bs, double radius) {
    if (is_table_range(num_bs)) return table1_layout(num_bs, radius);
    return minimax_layout_bruteforce(num_bs, radius);
}

}  // namespace bsdeploy
