#pragma once

#include <cstdint>

#include "ellalloc/quadrature.hpp"

namespace ellalloc {

/// Closest approach to the x = sqrt(2) pole allowed for numeric Psi at kappa = 1.
inline constexpr double kLaplaceGuardBand = 1e-6;

/// Argument of the scaling function Psi_nu(x) for a GED(kappa) law.
struct PsiQuery {
    double nu;     ///< n/2 for an n-asset problem
    double x;      ///< >= 0
    double kappa;  ///< in (0, 1]

    /// @throws DomainError / ConvergenceError (kappa = 1 inside the guard band)
    void validate() const;
};

/**
 * Psi_nu(x) as the ratio of the two Bessel-weighted half-line integrals of
 * the GED kernel exp(-eta g^{1/kappa}), to relative accuracy `tol`.
 *
 * The e^{gx} growth of I_nu(gx) is folded into the kernel and everything is
 * evaluated in log space, so the integrands stay O(1) at their peak. At x = 0
 * the ratio is replaced by its limit, a ratio of kernel moments.
 */
double psi_numeric(const PsiQuery& query, double tol = kDefaultQuadratureTol);

/// Closed form (1 + 2 nu) / (2 - x^2) for the multivariate Laplace law.
double psi_laplace(double nu, double x);

/// Closed forms of the two kappa = 1 scaling integrals,
/// int e^{-sqrt2 g} I_nu(gx) g^{nu+1} dg and int e^{-sqrt2 g} I_{nu-1}(gx) g^nu dg.
double laplace_integral_numerator(double nu, double x);
double laplace_integral_denominator(double nu, double x);

/// Exact multivariate Laplace shrinkage, 4 / (sqrt(1 + 4 z^2/(n+1)) + 1).
double omega_laplace(std::int64_t n, double z);

/// Univariate conjectured form 2 (sqrt(1 + z^2) - 1) / z^2; equals 1 at z = 0.
double omega_conjectured(double z);

/// lim_{n->inf} Omega_n(zeta sqrt n) = (sqrt(1 + 4 zeta^2) - 1) / zeta^2.
double omega_large_n_limit(double zeta);

/// Large-Z behaviour 2 sqrt(n+1) / |z|.
double omega_asymptote(std::int64_t n, double z);

}  // namespace ellalloc
