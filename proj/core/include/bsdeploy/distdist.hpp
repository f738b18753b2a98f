#pragma once

#include <memory>
#include <vector>

#include "bsdeploy/geometry.hpp"
#include "bsdeploy/model.hpp"

namespace bsdeploy {

// Measure (radians) of the directions theta for which bs + r (cos, sin)
// lies inside the cell: 2 pi minus the union of the angular intervals cut
// out by each half-plane and by the disk.
double angular_measure(const CellRegion& cell, double r);

// Distance from the BS of a point uniformly distributed over one cell.
// pdf(r) = r Theta(r) / area; the CDF is integrated once onto a Chebyshev
// grid (plus every kink of Theta) and interpolated by monotone cubic Hermite
// segments using the exact pdf as slope.
class CellDistanceDistribution {
public:
    explicit CellDistanceDistribution(CellRegion cell);

    double cdf(double r) const;
    double pdf(double r) const;
    double r_max() const { return r_max_; }
    double area() const { return cell_.area; }
    const CellRegion& cell() const { return cell_; }
    // Radii in (0, r_max) where the pdf is not smooth.
    const std::vector<double>& breakpoints() const { return breaks_; }
    // True for the disk with its BS at the center, where cdf = r^2/R^2 exactly.
    bool is_centered_disk() const { return centered_disk_; }

private:
    CellRegion cell_;
    double r_max_ = 0.0;
    bool centered_disk_ = false;
    std::vector<double> breaks_;
    std::vector<double> nodes_;
    std::vector<double> cdf_nodes_;
    std::vector<double> pdf_nodes_;
};

CellDistanceDistribution cell_cdf_pdf(const CellRegion& cell);

// Uniform point in a width x height rectangle, distance from its center.
CellDistanceDistribution rectangle_distribution(double width, double height);
// Representative cell of the p x q division of a square of side a.
CellDistanceDistribution square_cell_distribution(int p, int q, double side);

// Distance of the farthest of num_users uniform users that fall in a cell
// covering area_fraction of the field:
//   cdf_far(r) = (A F(r) + 1 - A)^N,  pdf_far(r) = N A f(r) (A F(r) + 1 - A)^(N-1).
// cdf_far(0) is the empty-cell probability (1 - A)^N. The point-mass variant
// is the dense-user limit where the farthest user sits at r_max.
class FarthestUEDistribution {
public:
    FarthestUEDistribution(std::shared_ptr<const CellDistanceDistribution> base, int num_users,
                           double area_fraction);
    static FarthestUEDistribution point_mass(double r_max);

    double cdf_far(double r) const;
    double pdf_far(double r) const;
    // (1 - A)^N, the probability of no user in the cell.
    double empty_atom() const;
    double r_max() const { return r_max_; }
    int num_users() const { return num_users_; }
    double area_fraction() const { return area_fraction_; }
    bool is_point_mass() const { return !base_; }
    // Null for the point-mass variant.
    const CellDistanceDistribution* base() const { return base_.get(); }
    std::vector<double> breakpoints() const;

private:
    FarthestUEDistribution() = default;
    std::shared_ptr<const CellDistanceDistribution> base_;
    int num_users_ = 0;
    double area_fraction_ = 1.0;
    double r_max_ = 0.0;
};

FarthestUEDistribution farthest_distribution(std::shared_ptr<const CellDistanceDistribution> base,
                                             int num_users, double area_fraction);

// How the farthest user of a cell is modelled: dense users sit at the
// farthest point of the cell; moderate densities use the order statistic.
enum class DensityMode { Asymptotic, Moderate };

// Farthest-user distributions of the cells on one sector axis of a circular
// layout, aligned with layout.distances.
std::vector<FarthestUEDistribution> layout_distributions(const RadialLayout& layout,
                                                         const FieldSpec& field, DensityMode mode);
// Representative cell of a square field split into `columns` x `rows` equal
// rectangles (real-valued counts allowed for the p = q relaxation).
FarthestUEDistribution square_distribution(double columns, double rows, const FieldSpec& field,
                                           DensityMode mode);

// Smallest q in [0, 1] with cdf_far((1 - q) r_max) <= psi, by bisection.
// Returns 1 when even q = 1 leaves cdf_far(0) > psi.
double realm_width_q(const FarthestUEDistribution& dist, double psi);

// ---------------------------------------------------------------------------
// Outermost cell of a sector, sub-field bounded by the field arc: the region
// seen from the BS at distance d_m on the sector axis between the two rays
// through the arc end points R (cos phi, +-sin phi).

struct ArcSubfield {
    double d_m = 0.0;
    double d_prev = 0.0;  // BS distance of the adjacent inner cell
    double radius = 0.0;
    double phi = 0.0;     // sector half-angle

    // Apex angle of the sub-field at the BS.
    double apex_angle() const;
    // Distance from the BS to the arc end points.
    double max_r() const;
    // Area of the whole outermost cell: phi R^2 - tan(phi) (d_m + d_prev)^2 / 4.
    double cell_area() const;
};

// Area of the intersection of the disk of radius r about the BS with the
// sub-field. Throws std::domain_error outside [0, max_r].
double arc_subfield_area(double d_m, double d_prev, double radius, double phi, double r);
// Derivative of arc_subfield_area with respect to r.
double arc_subfield_deriv(double d_m, double d_prev, double radius, double phi, double r);

}  // namespace bsdeploy
