#pragma once

#include <cstdint>
#include <string_view>

#include "ellalloc/quadrature.hpp"
#include "ellalloc/spd_matrix.hpp"

namespace ellalloc {

/// Price of risk lambda > 0.
class RiskConfig {
public:
    explicit RiskConfig(double lambda);
    double lambda() const { return lambda_; }

private:
    double lambda_;
};

enum class AllocationMethod { AnalyticLaplace, NumericGed, Gaussian, MarkowitzConstrained };

std::string_view to_string(AllocationMethod method);

/// Optimal holdings with the diagnostics that produced them. `omega` is on the
/// scale where the Gaussian (mean-variance) solution has omega = 2.
struct AllocationReport {
    Vector holdings;
    double z_cov = 0.0;          ///< sqrt(alpha' V^-1 alpha)
    double z_scale = 0.0;        ///< sqrt(alpha' Sigma^-1 alpha)
    double critical_root = 0.0;  ///< x solving x Psi_{n/2}(x) = z_scale
    double omega = 2.0;
    AllocationMethod method = AllocationMethod::AnalyticLaplace;
};

/// Closed-form root of x (n+1)/(2-x^2) = z_scale, in [0, sqrt 2).
double critical_root_laplace(std::int64_t n, double z_scale);

/// Root of x Psi_{n/2}(x) = z_scale by bracketing and bisection, with
/// |x Psi - z_scale| <= tol * max(1, z_scale).
double critical_root_numeric(std::int64_t n, double z_scale, double kappa,
                             double tol = kDefaultQuadratureTol);

/// Univariate Laplace holding for the conventional (variance 2 sigma^2) law.
double holding_uv_laplace(double alpha, double sigma, const RiskConfig& risk);

/// Exact multivariate Laplace holding V^-1 alpha Omega_n(Z) / (2 lambda).
AllocationReport holding_mv_laplace(const Vector& alpha, const SpdMatrix& covariance,
                                    const RiskConfig& risk);

/// General GED holding Sigma^-1 alpha / (lambda Psi_{n/2}(x)) with x solved numerically.
AllocationReport holding_elliptical_numeric(const Vector& alpha, const SpdMatrix& sigma,
                                            double kappa, const RiskConfig& risk,
                                            double tol = kDefaultQuadratureTol);

/// Mean-variance holding V^-1 alpha / lambda.
Vector holding_gaussian(const Vector& alpha, const SpdMatrix& covariance, const RiskConfig& risk);

/// Fully-invested portfolio V^-1 alpha / (1' V^-1 alpha); entries sum to 1.
Vector holding_markowitz_constrained(const Vector& alpha, const SpdMatrix& covariance);

/// |h_laplace - (alpha/(2 lambda s^2) - alpha^3/(8 lambda s^4))|, which is O(alpha^5).
double taylor_check_uv(double alpha, double sigma, const RiskConfig& risk);

}  // namespace ellalloc
