#pragma once

#include "bsdeploy/distdist.hpp"
#include "bsdeploy/model.hpp"

namespace bsdeploy {

struct CoverageQuery {
    ChannelParams channel;
    double tx_power = 0.0;
    const FarthestUEDistribution* dist = nullptr;

    void validate() const;
};

// Average coverage probability of the farthest user under Rayleigh fading,
//   int_0^r_u exp(-T sigma^2 r^alpha / P_t) pdf_far(r) dr + empty-cell atom.
// Throws QuadratureError if the integral does not reach 1e-9.
double coverage_far(const CoverageQuery& q);
double coverage_far(const FarthestUEDistribution& dist, const ChannelParams& ch, double tx_power);

struct LinearizedCoverage {
    double value = 0.0;
    // T sigma^2 r_u^alpha / P_t, the largest exponent the integrand sees.
    double max_argument = 0.0;
    // max_argument exceeds 0.1, where 1 - x stops tracking exp(-x).
    bool outside_regime = false;
};

// First-order form 1 - (T sigma^2 / P_t) E[r_far^alpha].
LinearizedCoverage coverage_far_linearized(const CoverageQuery& q);
LinearizedCoverage coverage_far_linearized(const FarthestUEDistribution& dist, const ChannelParams& ch,
                                           double tx_power);

// int_0^r_u r^alpha pdf_far(r) dr; r_u^alpha for the point mass.
double alpha_moment(const FarthestUEDistribution& dist, double alpha);

}  // namespace bsdeploy
