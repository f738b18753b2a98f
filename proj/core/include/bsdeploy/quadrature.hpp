#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace bsdeploy {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    int panels = 0;
    bool converged = false;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_panels = 2000;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved_error() const { return achieved_; }

private:
    double achieved_;
};

// Globally adaptive Gauss-Kronrod (G10/K21) integration. The panel with the
// largest error estimate is bisected until the summed error satisfies
// max(abs_tol, rel_tol * |I|) or max_panels is reached; non-convergence is
// reported through QuadratureResult::converged, never thrown.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

// Same, with the interval pre-split at the given interior points (kinks of f).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, const QuadratureOptions& opts = {});

// Throws QuadratureError with the achieved error when the result did not converge.
double require_converged(const QuadratureResult& r, const char* what);

}  // namespace bsdeploy
