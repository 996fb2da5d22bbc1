#pragma once

#include <cstdint>
#include <vector>

#include "ellalloc/allocation.hpp"
#include "ellalloc/spd_matrix.hpp"

namespace ellalloc {

/// Estimate of E[exp(-lambda h'r)], the quantity a negative-exponential
/// utility maximiser minimises.
struct UtilityEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples_or_evals = 0;
};

/// Closed-form univariate Laplace expectation e^{-l h a} / (1 - l^2 h^2 s^2).
/// @throws DomainError when |lambda h sigma| >= 1 (the expectation is infinite).
double omega_objective_uv(double h, double alpha, double sigma, const RiskConfig& risk);

/// log of omega_objective_uv, accurate near h = 0 where the objective is ~1.
double log_omega_objective_uv(double h, double alpha, double sigma, const RiskConfig& risk);

/// Golden-section minimiser of the univariate objective over the open
/// interval |h| < 1/(lambda sigma), to bracket width `tol`.
double argmin_omega_uv(double alpha, double sigma, const RiskConfig& risk, double tol);

struct MonteCarloOptions {
    /// Required distance of lambda ||h||_Sigma below sqrt(2).
    double divergence_margin = 0.05;
    /// 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
    unsigned workers = 0;
};

/// Monte-Carlo E[exp(-lambda h'r)] under the multivariate Laplace law with
/// centre alpha and scale matrix sigma.
UtilityEstimate expected_utility_mc(const Vector& h, const Vector& alpha, const SpdMatrix& sigma,
                                    const RiskConfig& risk, std::int64_t count, std::uint64_t seed,
                                    const MonteCarloOptions& options = {});

struct ScanPoint {
    double scale = 0.0;
    UtilityEstimate estimate;
};

/// Utility along the ray s * h, all scales evaluated on one shared set of
/// draws (common random numbers).
struct ScaleScan {
    std::vector<ScanPoint> points;
    Matrix estimate_covariance;  ///< covariance of the point estimates

    /// Standard error of points[i] - points[j], accounting for the shared draws.
    double difference_std_error(std::size_t i, std::size_t j) const;
};

ScaleScan utility_scan(const Vector& h, const Vector& alpha, const SpdMatrix& sigma,
                       const RiskConfig& risk, const std::vector<double>& scales,
                       std::int64_t count, std::uint64_t seed,
                       const MonteCarloOptions& options = {});

/// utility_scan through the analytic Laplace optimum for (alpha, sigma).
ScaleScan verify_optimality_scan(const Vector& alpha, const SpdMatrix& sigma,
                                 const RiskConfig& risk, const std::vector<double>& scales,
                                 std::int64_t count, std::uint64_t seed,
                                 const MonteCarloOptions& options = {});

}  // namespace ellalloc
