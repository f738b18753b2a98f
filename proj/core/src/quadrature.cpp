#include "bsdeploy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace bsdeploy {
namespace {

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    double err = 0.0;
    const double v = GK::integrate(f, a, b, 0, 0.0, &err);
    // The non-recursive path reports the error on [-1, 1]; map it back.
    return Panel{a, b, v, err * 0.5 * (b - a)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, const QuadratureOptions& opts) {
    QuadratureResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::vector<double> knots{a};
    for (double x : breakpoints) {
        if (x > a && x < b) knots.push_back(x);
    }
    knots.push_back(b);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    std::priority_queue<Panel> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (knots[i + 1] <= knots[i]) continue;
        Panel p = evaluate_panel(f, knots[i], knots[i + 1]);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    int panels = static_cast<int>(heap.size());
    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

    while (total_err > tolerance() && panels < opts.max_panels) {
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted in double precision
        heap.pop();
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    // Re-sum to shed accumulated cancellation from the running updates.
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = total_err;
    out.panels = panels;
    out.converged = total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    return out;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
    return integrate(f, a, b, std::span<const double>{}, opts);
}

double require_converged(const QuadratureResult& r, const char* what) {
    if (!r.converged) {
        char buf[160];
        std::snprintf(buf, sizeof buf, ": quadrature did not converge, achieved error %.3e after %d panels",
                      r.error, r.panels);
        throw QuadratureError(std::string(what) + buf, r.error);
    }
    return r.value;
}

}  // namespace bsdeploy
