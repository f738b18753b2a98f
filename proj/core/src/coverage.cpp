#include "bsdeploy/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bsdeploy/quadrature.hpp"

namespace bsdeploy {

void CoverageQuery::validate() const {
    channel.validate();
    if (!(tx_power > 0.0)) throw std::invalid_argument("P_t must be positive");
    if (dist == nullptr) throw std::invalid_argument("coverage query without a distribution");
}

double coverage_far(const CoverageQuery& q) {
    q.validate();
    const FarthestUEDistribution& d = *q.dist;
    const double scale = q.channel.noise_threshold() / q.tx_power;
    const double alpha = q.channel.path_loss_exp;
    if (d.is_point_mass()) return std::exp(-scale * std::pow(d.r_max(), alpha));
    const auto f = [&](double r) { return std::exp(-scale * std::pow(r, alpha)) * d.pdf_far(r); };
    QuadratureOptions opts;
    opts.abs_tol = 1e-9;
    const auto bp = d.breakpoints();
    const double body = require_converged(integrate(f, 0.0, d.r_max(), bp, opts), "coverage_far");
    return std::clamp(body + d.empty_atom(), 0.0, 1.0);
}

double coverage_far(const FarthestUEDistribution& dist, const ChannelParams& ch, double tx_power) {
    return coverage_far(CoverageQuery{ch, tx_power, &dist});
}

LinearizedCoverage coverage_far_linearized(const CoverageQuery& q) {
    q.validate();
    const FarthestUEDistribution& d = *q.dist;
    const double scale = q.channel.noise_threshold() / q.tx_power;
    const double alpha = q.channel.path_loss_exp;
    LinearizedCoverage out;
    // The empty-cell atom counts as covered, so atom + continuous mass is 1.
    out.value = 1.0 - scale * alpha_moment(d, alpha);
    out.max_argument = scale * std::pow(d.r_max(), alpha);
    out.outside_regime = out.max_argument > 0.1;
    return out;
}

LinearizedCoverage coverage_far_linearized(const FarthestUEDistribution& dist, const ChannelParams& ch,
                                           double tx_power) {
    return coverage_far_linearized(CoverageQuery{ch, tx_power, &dist});
}

double alpha_moment(const FarthestUEDistribution& dist, double alpha) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
    if (dist.is_point_mass()) return std::pow(dist.r_max(), alpha);
    const auto f = [&](double r) { return std::pow(r, alpha) * dist.pdf_far(r); };
    QuadratureOptions opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = 1e-10;
    const auto bp = dist.breakpoints();
    return require_converged(integrate(f, 0.0, dist.r_max(), bp, opts), "alpha_moment");
}

}  // namespace bsdeploy
