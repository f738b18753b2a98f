#pragma once

#include <span>
#include <vector>

#include "bsdeploy/distdist.hpp"
#include "bsdeploy/model.hpp"

namespace bsdeploy {

struct PowerAllocation {
    double tx_power = 0.0;      // P_t*, the largest per-cell bound
    int binding_cell = 0;       // index of the cell attaining it
    std::vector<double> per_cell_bounds;

    bool within(double max_power) const { return tx_power <= max_power; }
};

// Smallest P_t meeting the linearized coverage target 1 - epsilon in one cell:
// (T sigma^2 / epsilon) E[r_far^alpha].
double min_power_cell(const FarthestUEDistribution& dist, const ChannelParams& ch, double epsilon);

// Common power for all BSs: the maximum of the per-cell bounds. Ties keep
// the lowest index.
PowerAllocation optimal_power(std::span<const FarthestUEDistribution> cells, const ChannelParams& ch,
                              double epsilon);

// Dense-user power for a p x q division of a square of side a:
// (T sigma^2 / epsilon) ((a/2) sqrt(1/p^2 + 1/q^2))^alpha.
double square_asymptotic_power(double p, double q, double side, const ChannelParams& ch, double epsilon);

}  // namespace bsdeploy
