#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "bsdeploy/geometry.hpp"
#include "bsdeploy/model.hpp"

namespace bsdeploy {

struct McConfig {
    long deployments = 1000;
    long fading_draws = 1000000;  // end-to-end mode only
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

using Rng = std::mt19937_64;

// Generator for deployment `index`: splitmix64 of (seed, index), so every
// deployment has its own stream and results do not depend on thread count.
Rng stream_rng(std::uint64_t seed, std::uint64_t index);

struct CellSamples {
    std::vector<Vec2> points;
    long proposals = 0;
    double acceptance_rate() const;
};

// Uniform points in the cell by rejection from its bounding box. Throws
// std::runtime_error when acceptance falls below 1% after 1000 proposals.
CellSamples sample_cell_points(const CellRegion& cell, int n, Rng& rng);

// Uniform point in the field. The circular field is the disk of radius R at
// the origin. The square field is placed so that its corner cell of size
// cell_width x cell_height is centred on the origin.
Vec2 sample_field_point(const FieldSpec& field, Rng& rng, double cell_width = 0.0, double cell_height = 0.0);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long samples = 0;
};

McEstimate summarize(const std::vector<double>& values);

// Distance from the BS of the farthest user in `cell`, per deployment of
// field.num_users users over the whole field; 0 when the cell is empty.
std::vector<double> mc_farthest_distances(const CellRegion& cell, const FieldSpec& field, const McConfig& mc);

enum class FadingMode { Collapsed, EndToEnd };

// Coverage of the farthest user. Collapsed averages exp(-T sigma^2 r^alpha / P_t)
// per deployment; end-to-end draws mc.fading_draws Rayleigh gains per
// deployment and counts SNR >= T. Empty cells count as covered.
McEstimate mc_coverage_far(const CellRegion& cell, const FieldSpec& field, const ChannelParams& ch,
                           double tx_power, const McConfig& mc, FadingMode mode = FadingMode::Collapsed);
McEstimate mc_coverage_far(const RadialLayout& layout, int cell_index, const FieldSpec& field,
                           const ChannelParams& ch, double tx_power, const McConfig& mc,
                           FadingMode mode = FadingMode::Collapsed);
// Collapsed estimator over precomputed farthest distances.
McEstimate collapsed_coverage(const std::vector<double>& farthest, const ChannelParams& ch, double tx_power);

// Distances from the BS of n uniform points in the cell.
std::vector<double> mc_cell_distances(const CellRegion& cell, long n, std::uint64_t seed);

class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);

    double operator()(double x) const;
    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& samples() const { return sorted_; }
    // Half-width of the Dvoretzky-Kiefer-Wolfowitz band at level 1 - alpha.
    double dkw_band(double alpha = 0.05) const;
    // sup |F_n - F| for a reference CDF that is continuous except possibly
    // for an atom at 0.
    double ks_distance(const std::function<double(double)>& cdf) const;

private:
    std::vector<double> sorted_;
};

EmpiricalCdf mc_distance_cdf(std::vector<double> samples);

struct ActualLocationOptions {
    double psi = 0.05;      // realm width threshold
    int grid_points = 41;   // candidates across [d* - q r_u, d* + q r_u]
    double z_score = 2.0;   // required significance of an improvement
};

struct ActualLocation {
    double fixed_distance = 0.0;
    double actual_distance = 0.0;
    double displacement = 0.0;
    double q = 0.0;
    double moment_fixed = 0.0;   // MC E[r_far^alpha] in the cell
    double moment_actual = 0.0;
    double moment_diff_se = 0.0;  // standard error of the paired difference
    // N_B a_B (P_act - P_fixed), network power from MC moments of every cell.
    double cost_delta = 0.0;
    double cost_fixed = 0.0;
};

// Neighbourhood search for the BS position that minimizes the MC estimate
// of E[r_far^alpha] in one cell, moving only that BS along the sector axis.
// Candidates share the same user drops; a candidate replaces d* only if its
// paired improvement exceeds z_score standard errors.
ActualLocation actual_optimal_location(int cell_index, const RadialLayout& layout, const FieldSpec& field,
                                       const ChannelParams& ch, const CostModel& cm, double epsilon,
                                       const McConfig& mc, const ActualLocationOptions& opts = {});

}  // namespace bsdeploy
