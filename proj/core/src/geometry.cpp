#include "bsdeploy/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bsdeploy {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}

// Counter-clockwise angular distance from `from` to `to`, in [0, 2pi).
double ccw_diff(double from, double to) { return wrap_angle(to - from); }

double angle_of(Vec2 v) { return std::atan2(v.y, v.x); }

std::vector<Vec2> clip(const std::vector<Vec2>& poly, const HalfPlane& h) {
    std::vector<Vec2> out;
    const std::size_t n = poly.size();
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = poly[i];
        const Vec2 q = poly[(i + 1) % n];
        const double sp = h.slack(p);
        const double sq = h.slack(q);
        if (sp >= 0.0) out.push_back(p);
        if ((sp >= 0.0) != (sq >= 0.0)) {
            const double t = sp / (sp - sq);
            out.push_back(p + t * (q - p));
        }
    }
    // Drop near-duplicate consecutive vertices produced by clipping through a vertex.
    std::vector<Vec2> dedup;
    for (const Vec2& v : out) {
        if (dedup.empty() || norm(v - dedup.back()) > 1e-12 * (1.0 + norm(v))) dedup.push_back(v);
    }
    while (dedup.size() > 1 && norm(dedup.front() - dedup.back()) <= 1e-12 * (1.0 + norm(dedup.front()))) {
        dedup.pop_back();
    }
    return dedup.size() >= 3 ? dedup : std::vector<Vec2>{};
}

double box_half_size(const CellRegion& cell) {
    double scale = 1.0;
    if (cell.disk) scale = std::max(scale, cell.disk->radius + norm(cell.bs - cell.disk->center));
    for (const HalfPlane& h : cell.half_planes) scale = std::max(scale, std::abs(h.slack(cell.bs)));
    return 8.0 * scale;
}

// Polygon from the half-planes only, clipped to a box around the BS.
std::vector<Vec2> half_plane_polygon(const CellRegion& cell, double half) {
    const Vec2 c = cell.bs;
    std::vector<Vec2> poly{c + Vec2{-half, -half}, c + Vec2{half, -half}, c + Vec2{half, half},
                           c + Vec2{-half, half}};
    for (const HalfPlane& h : cell.half_planes) {
        poly = clip(poly, h);
        if (poly.empty()) break;
    }
    return poly;
}

double shoelace(const std::vector<Vec2>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * s;
}

}  // namespace

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }

HalfPlane HalfPlane::through(Vec2 point, Vec2 outward_normal) {
    const double len = norm(outward_normal);
    const Vec2 n{outward_normal.x / len, outward_normal.y / len};
    return HalfPlane{n, dot(n, point)};
}

bool CellRegion::contains(Vec2 p, double tol) const {
    for (const HalfPlane& h : half_planes) {
        if (h.slack(p) < -tol) return false;
    }
    if (disk && norm(p - disk->center) > disk->radius + tol) return false;
    return true;
}

CellBoundary cell_boundary(const CellRegion& cell) {
    CellBoundary out;
    out.disk = cell.disk;
    const double half = box_half_size(cell);
    std::vector<Vec2> poly = half_plane_polygon(cell, half);
    if (poly.empty()) return out;

    if (!cell.disk) {
        for (const Vec2& v : poly) {
            if (std::abs(v.x - cell.bs.x) >= half * (1 - 1e-12) ||
                std::abs(v.y - cell.bs.y) >= half * (1 - 1e-12)) {
                throw std::domain_error("cell is unbounded: add a disk or more half-planes");
            }
        }
        out.vertices = std::move(poly);
        out.arcs.assign(out.vertices.size(), std::nullopt);
        return out;
    }

    const Disk& disk = *cell.disk;
    const double rho = disk.radius;
    const double tol = 1e-12 * rho;
    auto inside = [&](Vec2 p) { return norm(p - disk.center) <= rho + tol; };

    struct Point {
        Vec2 p;
        bool exits;  // the boundary leaves along the circle after this point
    };
    std::vector<Point> pts;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = poly[i];
        const Vec2 q = poly[(i + 1) % n];
        const Vec2 d = q - p;
        const Vec2 f = p - disk.center;
        const double a = dot(d, d);
        const double b = 2.0 * dot(f, d);
        const double c = dot(f, f) - rho * rho;
        if (inside(p)) {
            const bool on_circle = std::abs(norm(f) - rho) <= tol;
            pts.push_back({p, on_circle && b > 1e-12 * std::sqrt(a) * rho});
        }
        const double disc = b * b - 4.0 * a * c;
        if (disc > 0.0) {
            const double s = std::sqrt(disc);
            const double t1 = (-b - s) / (2.0 * a);
            const double t2 = (-b + s) / (2.0 * a);
            constexpr double kEdgeTol = 1e-12;
            if (t1 > kEdgeTol && t1 < 1.0 - kEdgeTol) pts.push_back({p + t1 * d, false});
            if (t2 > kEdgeTol && t2 < 1.0 - kEdgeTol) pts.push_back({p + t2 * d, true});
        }
    }

    if (pts.empty()) {
        // Either the disk lies inside the polygon or they are disjoint.
        bool center_inside = true;
        for (const HalfPlane& h : cell.half_planes) {
            if (h.slack(disk.center) <= 0.0) center_inside = false;
        }
        out.full_disk = center_inside;
        return out;
    }

    for (std::size_t i = 0; i < pts.size(); ++i) {
        out.vertices.push_back(pts[i].p);
        if (pts[i].exits) {
            const Vec2 a = pts[i].p - disk.center;
            const Vec2 b = pts[(i + 1) % pts.size()].p - disk.center;
            double sweep = ccw_diff(angle_of(a), angle_of(b));
            if (pts.size() == 1 || sweep <= 0.0) sweep = kTwoPi;
            out.arcs.push_back(Arc{disk.center, rho, angle_of(a), sweep});
        } else {
            out.arcs.push_back(std::nullopt);
        }
    }
    return out;
}

double cell_area(const CellRegion& cell) {
    const CellBoundary b = cell_boundary(cell);
    if (b.full_disk) return std::numbers::pi * b.disk->radius * b.disk->radius;
    double area = shoelace(b.vertices);
    for (const auto& arc : b.arcs) {
        if (arc) area += 0.5 * arc->radius * arc->radius * (arc->sweep - std::sin(arc->sweep));
    }
    return area;
}

double farthest_point_distance(const CellRegion& cell) {
    const CellBoundary b = cell_boundary(cell);
    if (b.full_disk) return norm(cell.bs - b.disk->center) + b.disk->radius;
    double best = 0.0;
    for (const Vec2& v : b.vertices) best = std::max(best, norm(v - cell.bs));
    for (const auto& arc : b.arcs) {
        if (!arc) continue;
        const Vec2 away = arc->center - cell.bs;
        const double dist = norm(away);
        if (dist <= 1e-12 * arc->radius) {
            best = std::max(best, arc->radius);
            continue;
        }
        // The circle point farthest from the BS lies opposite the BS.
        if (ccw_diff(arc->start_angle, angle_of(away)) <= arc->sweep) {
            best = std::max(best, dist + arc->radius);
        }
    }
    return best;
}

std::pair<Vec2, Vec2> bounding_box(const CellRegion& cell) {
    const CellBoundary b = cell_boundary(cell);
    const double inf = std::numeric_limits<double>::infinity();
    Vec2 lo{inf, inf};
    Vec2 hi{-inf, -inf};
    auto add = [&](Vec2 p) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    };
    if (b.full_disk) {
        const Disk& d = *b.disk;
        add(d.center - Vec2{d.radius, d.radius});
        add(d.center + Vec2{d.radius, d.radius});
        return {lo, hi};
    }
    for (const Vec2& v : b.vertices) add(v);
    for (const auto& arc : b.arcs) {
        if (!arc) continue;
        for (int q = 0; q < 4; ++q) {
            const double ang = q * std::numbers::pi / 2.0;
            if (ccw_diff(arc->start_angle, ang) <= arc->sweep) {
                add(arc->center + arc->radius * Vec2{std::cos(ang), std::sin(ang)});
            }
        }
    }
    return {lo, hi};
}

SquareDivision square_division(int num_bs, double side) {
    if (num_bs < 1) throw std::invalid_argument("square_division requires num_bs >= 1");
    SquareDivision best;
    int best_gap = std::numeric_limits<int>::max();
    for (int q = 1; q * q <= num_bs; ++q) {
        if (num_bs % q != 0) continue;
        const int p = num_bs / q;  // p >= q
        if (p - q < best_gap) {
            best_gap = p - q;
            best.columns = p;
            best.rows = q;
        }
    }
    const double p = best.columns;
    const double q = best.rows;
    best.farthest = 0.5 * side * std::sqrt(1.0 / (p * p) + 1.0 / (q * q));
    return best;
}

CellRegion rectangle_cell(double width, double height) {
    if (!(width > 0.0 && height > 0.0)) throw std::invalid_argument("rectangle needs positive sides");
    CellRegion c;
    c.bs = {0.0, 0.0};
    c.half_planes = {HalfPlane{{1.0, 0.0}, 0.5 * width}, HalfPlane{{-1.0, 0.0}, 0.5 * width},
                     HalfPlane{{0.0, 1.0}, 0.5 * height}, HalfPlane{{0.0, -1.0}, 0.5 * height}};
    c.area = width * height;
    return c;
}

CellRegion square_cell(const SquareDivision& div, double side) {
    CellRegion c = rectangle_cell(side / div.columns, side / div.rows);
    c.multiplicity = div.num_bs();
    return c;
}

}  // namespace bsdeploy
