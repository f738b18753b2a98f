#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "bsdeploy/geometry.hpp"
#include "bsdeploy/quadrature.hpp"
#include "bsdeploy/search.hpp"

namespace oracle {

using namespace bsdeploy;

// sum_z C(n, z) a^z (1 - a)^(n - z) F^z, term by term.
inline double binomial_sum_cdf(int n, double a, double f) {
    double total = 0.0;
    for (int z = 0; z <= n; ++z) {
        const double log_binom = std::lgamma(n + 1.0) - std::lgamma(z + 1.0) - std::lgamma(n - z + 1.0);
        const double term = std::exp(log_binom) * std::pow(a * f, z) * std::pow(1.0 - a, n - z);
        total += term;
    }
    return total;
}

// sum_z C(n, z) a^z (1 - a)^(n - z) z f F^(z - 1).
inline double binomial_sum_pdf(int n, double a, double big_f, double small_f) {
    double total = 0.0;
    for (int z = 1; z <= n; ++z) {
        const double log_binom = std::lgamma(n + 1.0) - std::lgamma(z + 1.0) - std::lgamma(n - z + 1.0);
        total += std::exp(log_binom) * std::pow(a, z) * std::pow(1.0 - a, n - z) * z * small_f *
                 std::pow(big_f, z - 1);
    }
    return total;
}

// Minimum of the search key over [lo, hi]; ties go to the smaller N_B.
inline int exhaustive_argmin(const std::function<SearchKey(int)>& f, int lo, int hi) {
    int best = lo;
    SearchKey key = f(lo);
    for (int n = lo + 1; n <= hi; ++n) {
        const SearchKey k = f(n);
        if (k < key) {
            key = k;
            best = n;
        }
    }
    return best;
}

inline int exhaustive_optimum(const DeploymentModel& model, const ChannelParams& ch, const CostModel& cm,
                              const OptimizationLimits& limits, int lo = 1, int hi = -1) {
    if (hi < 0) hi = limits.max_bs;
    return exhaustive_argmin([&](int n) { return cost_function(n, model, ch, cm, limits).key(); }, lo, hi);
}

// Area within r of the BS at (d_m, 0) inside the disk of radius R and inside
// the apex angle phi1 about the +x axis, by polar quadrature of the measure of
// directions t with |t| <= phi1/2 and |bs + rho e(t)| <= R.
inline double arc_subfield_polar_area(double d_m, double radius, double phi1, double r) {
    auto theta = [&](double rho) {
        if (rho <= 0.0) return phi1;
        const double c = (radius * radius - d_m * d_m - rho * rho) / (2.0 * d_m * rho);
        if (c >= 1.0) return phi1;
        if (c <= -1.0) return 0.0;
        return 2.0 * std::max(0.0, 0.5 * phi1 - std::acos(c));
    };
    const double knot = radius - d_m;
    const std::vector<double> breaks{knot};
    QuadratureOptions o;
    o.abs_tol = 1e-12 * radius * radius;
    return require_converged(integrate([&](double rho) { return rho * theta(rho); }, 0.0, r, breaks, o),
                             "polar area");
}

}  // namespace oracle
