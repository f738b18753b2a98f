#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bsdeploy {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2, Vec2) = default;
};

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 a);

// {p : normal . p <= offset}; normal has unit length.
struct HalfPlane {
    Vec2 normal;
    double offset = 0.0;

    static HalfPlane through(Vec2 point, Vec2 outward_normal);
    double slack(Vec2 p) const { return offset - dot(normal, p); }
};

struct Wedge {
    Vec2 apex;
    double half_angle = 0.0;
    double axis_angle = 0.0;
};

struct Disk {
    Vec2 center;
    double radius = 0.0;
};

// A convex cell: intersection of half-planes and optionally the field disk.
// The sector wedge, when present, is already expanded into half_planes and is
// kept only as a description. multiplicity counts congruent copies of the cell
// in the field (sectors are identical up to rotation).
struct CellRegion {
    Vec2 bs;
    std::vector<HalfPlane> half_planes;
    std::optional<Wedge> wedge;
    std::optional<Disk> disk;
    double area = 0.0;
    int multiplicity = 1;

    bool contains(Vec2 p, double tol = 1e-9) const;
};

struct Arc {
    Vec2 center;
    double radius = 0.0;
    double start_angle = 0.0;  // counter-clockwise from start
    double sweep = 0.0;
};

// Boundary of a cell as a counter-clockwise vertex loop; arcs[i] (if set)
// replaces the straight edge vertices[i] -> vertices[i+1].
struct CellBoundary {
    std::vector<Vec2> vertices;
    std::vector<std::optional<Arc>> arcs;
    bool full_disk = false;  // region is the whole disk, vertices empty
    std::optional<Disk> disk;
};

CellBoundary cell_boundary(const CellRegion& cell);
double cell_area(const CellRegion& cell);
double farthest_point_distance(const CellRegion& cell);
// Axis-aligned bounding box {min, max}.
std::pair<Vec2, Vec2> bounding_box(const CellRegion& cell);

// ---------------------------------------------------------------------------
// Sectoring layouts on the circular field.

enum class SectoringFamily { MK, MKPlus1 };

struct SectoringType {
    SectoringFamily family = SectoringFamily::MK;
    int m = 1;  // BSs per sector axis
    int k = 1;  // sector count

    int num_bs() const { return family == SectoringFamily::MK ? m * k : m * k + 1; }
    double half_angle() const;  // phi = pi / k
    std::string label() const;  // "k", "k+1", "2k", "2k+1", ...
    friend bool operator==(const SectoringType&, const SectoringType&) = default;
};

struct RadialLayout {
    SectoringType sectoring;
    // BS distances from the field center along the representative sector
    // axis; distances[0] == 0 is the central BS for MK+1.
    std::vector<double> distances;
    // Farthest-point distance of each cell, aligned with distances.
    std::vector<double> farthest;
    // False when the layout came from the numerical minimax solver instead
    // of the closed-form table.
    bool closed_form = true;

    int num_bs() const { return sectoring.num_bs(); }
    double max_farthest() const;
};

// Closed-form optimal layout for 1 <= num_bs <= 45.
RadialLayout table1_layout(int num_bs, double radius);
// Closed-form row for an explicit family, used when comparing rows directly.
// Returns nullopt when the row's formula is undefined for num_bs.
std::optional<RadialLayout> table1_row(const SectoringType& sectoring, double radius);
// The family the closed-form table assigns to num_bs (1 <= num_bs <= 45).
SectoringType table1_family(int num_bs);

enum class MinimaxSearch {
    // Roots of the equalization system (every cell's farthest corner at the
    // same radius), found by bisection on d1 with outward propagation, plus
    // the boundary candidates for single-BS sectors.
    Equalization,
    // Equalization candidates plus a coarse grid over all distances refined
    // by pattern search; also finds placements where some cell is slack.
    Global,
};

// Numerical minimax placement over every family {k, k+1, 2k, 2k+1, 3k}
// whose factorization fits num_bs, using the equalization solver.
RadialLayout minimax_layout_bruteforce(int num_bs, double radius);
// Same family sweep with MinimaxSearch::Global.
RadialLayout minimax_layout_global(int num_bs, double radius);
// Minimax placement restricted to one family. nullopt if infeasible.
std::optional<RadialLayout> minimax_layout_for(const SectoringType& sectoring, double radius,
                                               MinimaxSearch search = MinimaxSearch::Equalization);

// Table when in range, brute force otherwise (closed_form flags which).
RadialLayout optimal_layout(int num_bs, double radius);

// Builds a layout from explicit distances; farthest[] is filled from the cells.
RadialLayout make_layout(const SectoringType& sectoring, std::vector<double> distances,
                         double radius);

// One cell per BS on the representative sector axis. Throws
// std::domain_error if a cell has empty interior.
std::vector<CellRegion> build_cells(const RadialLayout& layout, double radius);

// ---------------------------------------------------------------------------
// Square field.

struct SquareDivision {
    int columns = 1;  // p
    int rows = 1;     // q
    double farthest = 0.0;  // (a/2) sqrt(1/p^2 + 1/q^2)

    int num_bs() const { return columns * rows; }
};

SquareDivision square_division(int num_bs, double side);
// Axis-aligned width x height rectangle centred on its BS at the origin.
CellRegion rectangle_cell(double width, double height);
// Representative cell of a p x q division (multiplicity p*q).
CellRegion square_cell(const SquareDivision& div, double side);

}  // namespace bsdeploy
