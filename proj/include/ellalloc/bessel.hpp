#pragma once

namespace ellalloc {

/// Modified Bessel function of the first kind I_nu(x), nu >= 0, x >= 0.
/// Overflows to +inf for large x; use bessel_i_scaled there.
double bessel_i(double order, double arg);

/// e^{-x} I_nu(x), representable for all finite x >= 0.
double bessel_i_scaled(double order, double arg);

/// log(e^{-x} I_nu(x)) for order > -1 and x >= 0.
///
/// Negative orders in (-1, 0) are accepted because scaling integrals need
/// I_{nu-1} with nu = 1/2. Returns -inf at x = 0 for order > 0 and +inf for
/// order < 0.
double log_bessel_i_scaled(double order, double arg);

}  // namespace ellalloc
