#include "ellalloc/scaling.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ellalloc/bessel.hpp"
#include "ellalloc/distributions.hpp"
#include "ellalloc/errors.hpp"

namespace ellalloc {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// 2 - x^2 without cancellation near the pole.
double laplace_gap(double x) { return (kSqrt2 - x) * (kSqrt2 + x); }

// log of e^{-eta g^{1/kappa}} g^power e^{gx}-scaled I_order(gx); order = -inf
// selects the x = 0 moment integrand (no Bessel factor).
struct LogIntegrand {
    double eta;
    double kappa;
    double x;
    double order;
    double power;
    bool moment;

    double operator()(double g) const {
        double kernel;
        if (kappa == 1.0) {
            kernel = -g * (eta - x);
        } else {
            kernel = -eta * std::pow(g, 1.0 / kappa) + g * x;
        }
        const double log_power = power * std::log(g);
        if (moment) return kernel + log_power;
        return kernel + log_power + log_bessel_i_scaled(order, g * x);
    }
};

// Half-line integral of exp(L(g)), returned as (log shift, integral of
// exp(L - shift)). The shift and the map scale come from a log-spaced scan.
struct ScaledIntegral {
    double log_shift;
    double value;
};

ScaledIntegral integrate_log_integrand(const LogIntegrand& log_f, double rel_tol) {
    constexpr double kLogMin = -8.0;
    constexpr double kLogMax = 10.0;
    constexpr int kPerDecade = 8;
    constexpr int kPoints = static_cast<int>((kLogMax - kLogMin) * kPerDecade) + 1;

    std::vector<double> grid(kPoints);
    std::vector<double> values(kPoints);
    double shift = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kPoints; ++i) {
        grid[i] = std::pow(10.0, kLogMin + static_cast<double>(i) / kPerDecade);
        values[i] = log_f(grid[i]);
        if (values[i] > shift) shift = values[i];
    }
    if (!std::isfinite(shift)) {
        throw ConvergenceError("psi_numeric: integrand has no finite peak on the search grid");
    }
    // Mean of g under the integrand; on a log grid the measure carries a factor g.
    double weight = 0.0;
    double first_moment = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const double w = std::exp(values[i] - shift) * grid[i];
        weight += w;
        first_moment += w * grid[i];
    }
    QuadratureOptions options;
    options.abs_tol = 0.0;
    options.rel_tol = rel_tol;
    options.scale = weight > 0.0 ? first_moment / weight : 1.0;
    options.max_evaluations = 500'000;
    const auto result = integrate_semi_infinite(
        [&](double g) { return std::exp(log_f(g) - shift); }, options);
    return {shift, result.value};
}

}  // namespace

void PsiQuery::validate() const {
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw DomainError("psi: order nu must be positive");
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError("psi: x must be finite and non-negative");
    }
    if (!(kappa > 0.0 && kappa <= 1.0)) {
        throw DomainError("psi: kappa must lie in (0, 1]; the integrals diverge for kappa > 1");
    }
    if (kappa == 1.0 && x > kSqrt2 - kLaplaceGuardBand) {
        throw ConvergenceError("psi: at kappa = 1 the integrals diverge as x -> sqrt(2); x = " +
                               std::to_string(x) + " is inside the guard band");
    }
}

double psi_numeric(const PsiQuery& query, double tol) {
    query.validate();
    if (!(tol > 0.0)) {
        throw DomainError("psi_numeric: tol must be positive");
    }
    const double eta_value = eta(query.kappa);
    const double nu = query.nu;
    const double part_tol = 0.25 * tol;

    if (query.x == 0.0) {
        // I_nu(gx)/x^nu -> (g/2)^nu / Gamma(nu+1): Psi(0) = M(2nu+1) / (2 nu M(2nu-1)).
        const LogIntegrand upper{eta_value, query.kappa, 0.0, 0.0, 2.0 * nu + 1.0, true};
        const LogIntegrand lower{eta_value, query.kappa, 0.0, 0.0, 2.0 * nu - 1.0, true};
        const auto top = integrate_log_integrand(upper, part_tol);
        const auto bottom = integrate_log_integrand(lower, part_tol);
        return std::exp(top.log_shift - bottom.log_shift) * top.value / (2.0 * nu * bottom.value);
    }

    const LogIntegrand numerator{eta_value, query.kappa, query.x, nu, nu + 1.0, false};
    const LogIntegrand denominator{eta_value, query.kappa, query.x, nu - 1.0, nu, false};
    const auto top = integrate_log_integrand(numerator, part_tol);
    const auto bottom = integrate_log_integrand(denominator, part_tol);
    return std::exp(top.log_shift - bottom.log_shift) * top.value / (query.x * bottom.value);
}

double psi_laplace(double nu, double x) {
    if (!(nu > 0.0)) throw DomainError("psi_laplace: nu must be positive");
    if (!(x >= 0.0) || !(x < kSqrt2)) {
        throw DomainError("psi_laplace: requires 0 <= x < sqrt(2) for convergence");
    }
    return (1.0 + 2.0 * nu) / laplace_gap(x);
}

double laplace_integral_numerator(double nu, double x) {
    if (!(nu > 0.0)) throw DomainError("laplace_integral_numerator: nu must be positive");
    if (!(x >= 0.0) || !(x < kSqrt2)) {
        throw DomainError("laplace_integral_numerator: requires 0 <= x < sqrt(2)");
    }
    const double a = nu + 1.5;
    const double log_coeff = a * std::numbers::ln2 + std::lgamma(a) - a * std::log(laplace_gap(x)) -
                             0.5 * std::log(std::numbers::pi);
    return std::exp(log_coeff) * std::pow(x, nu);
}

double laplace_integral_denominator(double nu, double x) {
    if (!(nu > 0.0)) throw DomainError("laplace_integral_denominator: nu must be positive");
    if (!(x >= 0.0) || !(x < kSqrt2)) {
        throw DomainError("laplace_integral_denominator: requires 0 <= x < sqrt(2)");
    }
    const double a = nu + 0.5;
    const double log_coeff = a * std::numbers::ln2 + std::lgamma(a) - a * std::log(laplace_gap(x)) -
                             0.5 * std::log(std::numbers::pi);
    // x^{nu-1}: +inf at x = 0 when nu < 1
    return std::exp(log_coeff) * std::pow(x, nu - 1.0);
}

double omega_laplace(std::int64_t n, double z) {
    if (n < 1) throw DomainError("omega_laplace: n must be >= 1");
    if (!(z >= 0.0)) throw DomainError("omega_laplace: z must be non-negative");
    const double ratio = 4.0 * z * z / (static_cast<double>(n) + 1.0);
    return 4.0 / (std::sqrt(1.0 + ratio) + 1.0);
}

double omega_conjectured(double z) {
    if (!(z >= 0.0)) throw DomainError("omega_conjectured: z must be non-negative");
    return 2.0 / (std::sqrt(1.0 + z * z) + 1.0);
}

double omega_large_n_limit(double zeta) {
    if (!(zeta >= 0.0)) throw DomainError("omega_large_n_limit: zeta must be positive");
    return 4.0 / (std::sqrt(1.0 + 4.0 * zeta * zeta) + 1.0);
}

double omega_asymptote(std::int64_t n, double z) {
    if (n < 1) throw DomainError("omega_asymptote: n must be >= 1");
    if (!(std::abs(z) > 0.0)) throw DomainError("omega_asymptote: z must be non-zero");
    return 2.0 * std::sqrt(static_cast<double>(n) + 1.0) / std::abs(z);
}

}  // namespace ellalloc
