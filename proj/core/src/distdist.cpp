#include "bsdeploy/distdist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "bsdeploy/quadrature.hpp"

namespace bsdeploy {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kGridNodes = 2048;

// Total length of a union of arcs given as (start, end) with end - start < 2 pi.
double union_length(std::vector<std::pair<double, double>>& arcs) {
    std::vector<std::pair<double, double>> flat;
    flat.reserve(arcs.size() * 2);
    for (auto [s, e] : arcs) {
        const double shift = std::floor(s / kTwoPi) * kTwoPi;
        s -= shift;
        e -= shift;
        if (e > kTwoPi) {
            flat.emplace_back(s, kTwoPi);
            flat.emplace_back(0.0, e - kTwoPi);
        } else {
            flat.emplace_back(s, e);
        }
    }
    std::sort(flat.begin(), flat.end());
    double total = 0.0;
    double cur_s = flat.front().first;
    double cur_e = flat.front().second;
    for (std::size_t i = 1; i < flat.size(); ++i) {
        if (flat[i].first > cur_e) {
            total += cur_e - cur_s;
            cur_s = flat[i].first;
            cur_e = flat[i].second;
        } else {
            cur_e = std::max(cur_e, flat[i].second);
        }
    }
    return total + (cur_e - cur_s);
}

bool centered_disk(const CellRegion& cell) {
    return cell.half_planes.empty() && cell.disk &&
           norm(cell.bs - cell.disk->center) <= 1e-12 * cell.disk->radius;
}

}  // namespace

double angular_measure(const CellRegion& cell, double r) {
    if (r <= 0.0) return kTwoPi;
    std::vector<std::pair<double, double>> cut;
    cut.reserve(cell.half_planes.size() + 1);
    for (const HalfPlane& h : cell.half_planes) {
        const double slack = std::max(0.0, h.slack(cell.bs));
        if (r <= slack) continue;
        const double w = std::atan2(std::sqrt((r - slack) * (r + slack)), slack);
        const double c = std::atan2(h.normal.y, h.normal.x);
        cut.emplace_back(c - w, c + w);
    }
    if (cell.disk) {
        const Vec2 off = cell.bs - cell.disk->center;
        const double dn = norm(off);
        const double rad = cell.disk->radius;
        if (dn <= 1e-15 * rad) {
            if (r > rad) return 0.0;
        } else {
            const double c = (rad * rad - dn * dn - r * r) / (2.0 * r * dn);
            if (c <= -1.0) return 0.0;
            if (c < 1.0) {
                // Factored sine keeps the arc accurate near tangency.
                const double far = (r + dn - rad) * (r + dn + rad);
                const double near = (rad - r + dn) * (rad + r - dn);
                const double w = std::atan2(std::sqrt(std::max(0.0, far * near)), rad * rad - dn * dn - r * r);
                const double mid = std::atan2(off.y, off.x);
                cut.emplace_back(mid - w, mid + w);
            }
        }
    }
    if (cut.empty()) return kTwoPi;
    return std::max(0.0, kTwoPi - union_length(cut));
}

CellDistanceDistribution::CellDistanceDistribution(CellRegion cell) : cell_(std::move(cell)) {
    if (!(cell_.area > 0.0)) cell_.area = cell_area(cell_);
    if (!(cell_.area > 0.0)) throw std::domain_error("cell has empty interior");
    r_max_ = farthest_point_distance(cell_);
    centered_disk_ = centered_disk(cell_);
    if (centered_disk_) return;

    const double eps = 1e-12 * r_max_;
    auto add_break = [&](double r) {
        if (r > eps && r < r_max_ - eps) breaks_.push_back(r);
    };
    for (const HalfPlane& h : cell_.half_planes) add_break(h.slack(cell_.bs));
    if (cell_.disk) {
        const double dn = norm(cell_.bs - cell_.disk->center);
        add_break(cell_.disk->radius - dn);
    }
    for (const Vec2& v : cell_boundary(cell_).vertices) add_break(norm(v - cell_.bs));
    std::sort(breaks_.begin(), breaks_.end());
    breaks_.erase(std::unique(breaks_.begin(), breaks_.end(),
                              [&](double a, double b) { return b - a <= eps; }),
                  breaks_.end());

    nodes_.reserve(kGridNodes + breaks_.size());
    for (int j = 0; j < kGridNodes; ++j) {
        nodes_.push_back(0.5 * r_max_ * (1.0 - std::cos(kPi * j / (kGridNodes - 1))));
    }
    nodes_.insert(nodes_.end(), breaks_.begin(), breaks_.end());
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end(),
                             [&](double a, double b) { return b - a <= eps; }),
                 nodes_.end());
    nodes_.front() = 0.0;
    nodes_.back() = r_max_;

    const auto f = [this](double r) { return pdf(r); };
    QuadratureOptions opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-11;
    opts.max_panels = 500;
    cdf_nodes_.resize(nodes_.size());
    pdf_nodes_.resize(nodes_.size());
    double acc = 0.0;
    cdf_nodes_[0] = 0.0;
    pdf_nodes_[0] = pdf(0.0);
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        acc += require_converged(integrate(f, nodes_[i - 1], nodes_[i], opts), "cell cdf");
        cdf_nodes_[i] = acc;
        pdf_nodes_[i] = pdf(nodes_[i]);
    }
}

double CellDistanceDistribution::pdf(double r) const {
    if (r < 0.0 || r > r_max_) return 0.0;
    if (centered_disk_) return 2.0 * r / (r_max_ * r_max_);
    return r * angular_measure(cell_, r) / cell_.area;
}

double CellDistanceDistribution::cdf(double r) const {
    if (r <= 0.0) return 0.0;
    if (r >= r_max_) return 1.0;
    if (centered_disk_) return (r * r) / (r_max_ * r_max_);
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const double x0 = nodes_[i];
    const double h = nodes_[i + 1] - x0;
    const double c0 = cdf_nodes_[i];
    const double c1 = cdf_nodes_[i + 1];
    const double delta = (c1 - c0) / h;
    double m0 = pdf_nodes_[i];
    double m1 = pdf_nodes_[i + 1];
    if (delta <= 0.0) return c0;
    // Fritsch-Carlson limiter keeps each segment monotone.
    const double a = m0 / delta;
    const double b = m1 / delta;
    const double s = a * a + b * b;
    if (s > 9.0) {
        const double tau = 3.0 / std::sqrt(s);
        m0 = tau * a * delta;
        m1 = tau * b * delta;
    }
    const double t = (r - x0) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double v = (2 * t3 - 3 * t2 + 1) * c0 + (t3 - 2 * t2 + t) * h * m0 +
                     (-2 * t3 + 3 * t2) * c1 + (t3 - t2) * h * m1;
    return std::clamp(v, c0, c1);
}

CellDistanceDistribution cell_cdf_pdf(const CellRegion& cell) { return CellDistanceDistribution(cell); }

CellDistanceDistribution rectangle_distribution(double width, double height) {
    if (!(width > 0.0) || !(height > 0.0)) throw std::invalid_argument("rectangle sides must be positive");
    return CellDistanceDistribution(rectangle_cell(width, height));
}

CellDistanceDistribution square_cell_distribution(int p, int q, double side) {
    if (p < 1 || q < 1) throw std::invalid_argument("p and q must be >= 1");
    return rectangle_distribution(side / p, side / q);
}

FarthestUEDistribution::FarthestUEDistribution(std::shared_ptr<const CellDistanceDistribution> base,
                                               int num_users, double area_fraction)
    : base_(std::move(base)), num_users_(num_users), area_fraction_(area_fraction) {
    if (!base_) throw std::invalid_argument("null base distribution");
    if (num_users < 1) throw std::invalid_argument("N_U must be >= 1");
    if (!(area_fraction > 0.0 && area_fraction <= 1.0 + 1e-12)) {
        throw std::invalid_argument("area fraction must lie in (0, 1]");
    }
    area_fraction_ = std::min(area_fraction_, 1.0);
    r_max_ = base_->r_max();
}

FarthestUEDistribution FarthestUEDistribution::point_mass(double r_max) {
    if (!(r_max > 0.0)) throw std::invalid_argument("r_max must be positive");
    FarthestUEDistribution d;
    d.r_max_ = r_max;
    return d;
}

double FarthestUEDistribution::cdf_far(double r) const {
    if (r >= r_max_) return 1.0;
    if (!base_) return 0.0;
    if (r < 0.0) return 0.0;
    const double a = area_fraction_;
    return std::pow(a * base_->cdf(r) + 1.0 - a, num_users_);
}

double FarthestUEDistribution::pdf_far(double r) const {
    if (!base_ || r < 0.0 || r > r_max_) return 0.0;
    const double a = area_fraction_;
    const double f = base_->pdf(r);
    if (f == 0.0) return 0.0;
    return num_users_ * a * f * std::pow(a * base_->cdf(r) + 1.0 - a, num_users_ - 1);
}

double FarthestUEDistribution::empty_atom() const {
    if (!base_) return 0.0;
    return std::pow(1.0 - area_fraction_, num_users_);
}

std::vector<double> FarthestUEDistribution::breakpoints() const {
    return base_ ? base_->breakpoints() : std::vector<double>{};
}

FarthestUEDistribution farthest_distribution(std::shared_ptr<const CellDistanceDistribution> base,
                                             int num_users, double area_fraction) {
    return FarthestUEDistribution(std::move(base), num_users, area_fraction);
}

std::vector<FarthestUEDistribution> layout_distributions(const RadialLayout& layout,
                                                         const FieldSpec& field, DensityMode mode) {
    if (field.shape != FieldShape::Circular) throw std::invalid_argument("radial layout needs a circular field");
    const auto cells = build_cells(layout, field.radius);
    std::vector<FarthestUEDistribution> out;
    out.reserve(cells.size());
    for (const CellRegion& c : cells) {
        if (mode == DensityMode::Asymptotic) {
            out.push_back(FarthestUEDistribution::point_mass(farthest_point_distance(c)));
        } else {
            auto base = std::make_shared<const CellDistanceDistribution>(c);
            const double frac = c.area / field.area();
            out.emplace_back(std::move(base), field.num_users, frac);
        }
    }
    return out;
}

FarthestUEDistribution square_distribution(double columns, double rows, const FieldSpec& field,
                                           DensityMode mode) {
    if (field.shape != FieldShape::Square) throw std::invalid_argument("square division needs a square field");
    if (!(columns >= 1.0 && rows >= 1.0)) throw std::invalid_argument("p and q must be >= 1");
    const double w = field.side / columns;
    const double h = field.side / rows;
    if (mode == DensityMode::Asymptotic) return FarthestUEDistribution::point_mass(0.5 * std::hypot(w, h));
    auto base = std::make_shared<const CellDistanceDistribution>(rectangle_cell(w, h));
    return FarthestUEDistribution(std::move(base), field.num_users, 1.0 / (columns * rows));
}

double realm_width_q(const FarthestUEDistribution& dist, double psi) {
    if (!(psi > 0.0 && psi < 1.0)) throw std::invalid_argument("psi must lie in (0, 1)");
    const auto g = [&](double q) { return dist.cdf_far((1.0 - q) * dist.r_max()); };
    if (g(1.0) > psi) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) <= psi) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

// ---------------------------------------------------------------------------

double ArcSubfield::max_r() const {
    return std::sqrt(std::max(0.0, radius * radius + d_m * d_m - 2.0 * radius * d_m * std::cos(phi)));
}

double ArcSubfield::apex_angle() const {
    const double rho = max_r();
    return 2.0 * (kPi - std::acos(std::clamp((d_m - radius * std::cos(phi)) / rho, -1.0, 1.0)));
}

double ArcSubfield::cell_area() const {
    const double s = d_m + d_prev;
    return phi * radius * radius - 0.25 * std::tan(phi) * s * s;
}

namespace {

ArcSubfield checked_subfield(double d_m, double d_prev, double radius, double phi, double r) {
    if (!(radius > 0.0)) throw std::invalid_argument("R must be positive");
    if (!(phi > 0.0 && phi < 0.5 * kPi)) throw std::invalid_argument("phi must lie in (0, pi/2)");
    if (!(d_m >= 0.0 && d_m < radius)) throw std::invalid_argument("d_m must lie in [0, R)");
    ArcSubfield s{d_m, d_prev, radius, phi};
    const double rho = s.max_r();
    if (!(r >= 0.0 && r <= rho * (1.0 + 1e-12))) throw std::domain_error("r outside [0, r_max]");
    return s;
}

}  // namespace

double arc_subfield_area(double d_m, double d_prev, double radius, double phi, double r) {
    const ArcSubfield s = checked_subfield(d_m, d_prev, radius, phi, r);
    const double phi1 = s.apex_angle();
    r = std::min(r, s.max_r());
    if (r < radius - d_m || d_m == 0.0) return 0.5 * phi1 * r * r;
    const double x1 = (radius * radius - r * r - d_m * d_m) / (2.0 * d_m);
    const double y = std::sqrt(std::max(0.0, r * r - x1 * x1));
    const double theta = std::atan2(y, x1);         // arc crossing seen from the BS
    const double beta = std::atan2(y, x1 + d_m);    // same point seen from the center
    return r * r * (0.5 * phi1 - theta) + radius * radius * beta - d_m * y;
}

double arc_subfield_deriv(double d_m, double d_prev, double radius, double phi, double r) {
    const ArcSubfield s = checked_subfield(d_m, d_prev, radius, phi, r);
    const double phi1 = s.apex_angle();
    r = std::min(r, s.max_r());
    if (r < radius - d_m || d_m == 0.0) return phi1 * r;
    const double x1 = (radius * radius - r * r - d_m * d_m) / (2.0 * d_m);
    const double y = std::sqrt(std::max(0.0, r * r - x1 * x1));
    return (phi1 - 2.0 * std::atan2(y, x1)) * r;
}

}  // namespace bsdeploy
