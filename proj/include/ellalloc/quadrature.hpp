#pragma once

#include <functional>

namespace ellalloc {

inline constexpr double kDefaultQuadratureTol = 1e-10;

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    int evaluations = 0;
};

struct QuadratureOptions {
    double abs_tol = kDefaultQuadratureTol;
    /// Accept when error <= max(abs_tol, rel_tol * |value|).
    double rel_tol = 0.0;
    /// Length scale of the half-line map g = scale * t / (1 - t).
    double scale = 1.0;
    int max_evaluations = 200'000;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b].
/// @throws ConvergenceError on a non-finite integrand value or an exhausted budget.
QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureOptions& options = {});

/// Integral over (0, inf). The half-line is mapped onto (0, 1) by
/// g = s t / (1 - t) and integrated adaptively there; s is options.scale and
/// should sit near the bulk of the integrand.
QuadratureResult integrate_semi_infinite(const Integrand& f, const QuadratureOptions& options);
QuadratureResult integrate_semi_infinite(const Integrand& f, double tol = kDefaultQuadratureTol);

/// Integral over the real line, split at `split`.
QuadratureResult integrate_real_line(const Integrand& f, double split,
                                     const QuadratureOptions& options = {});

}  // namespace ellalloc
