#include "bsdeploy/allocation.hpp"

#include <cmath>
#include <stdexcept>

#include "bsdeploy/coverage.hpp"

namespace bsdeploy {
namespace {

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
}

}  // namespace

double min_power_cell(const FarthestUEDistribution& dist, const ChannelParams& ch, double epsilon) {
    check_epsilon(epsilon);
    return ch.noise_threshold() / epsilon * alpha_moment(dist, ch.path_loss_exp);
}

PowerAllocation optimal_power(std::span<const FarthestUEDistribution> cells, const ChannelParams& ch,
                              double epsilon) {
    if (cells.empty()) throw std::invalid_argument("no cells to allocate power for");
    PowerAllocation out;
    out.per_cell_bounds.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double p = min_power_cell(cells[i], ch, epsilon);
        out.per_cell_bounds.push_back(p);
        if (i == 0 || p > out.tx_power) {
            out.tx_power = p;
            out.binding_cell = static_cast<int>(i);
        }
    }
    return out;
}

double square_asymptotic_power(double p, double q, double side, const ChannelParams& ch, double epsilon) {
    check_epsilon(epsilon);
    if (!(p > 0.0 && q > 0.0 && side > 0.0)) throw std::invalid_argument("p, q and a must be positive");
    const double r = 0.5 * side * std::sqrt(1.0 / (p * p) + 1.0 / (q * q));
    return ch.noise_threshold() / epsilon * std::pow(r, ch.path_loss_exp);
}

}  // namespace bsdeploy
