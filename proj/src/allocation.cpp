#include "ellalloc/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "ellalloc/distributions.hpp"
#include "ellalloc/errors.hpp"
#include "ellalloc/scaling.hpp"

namespace ellalloc {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr int kMaxBisections = 400;

void check_alpha(const Vector& alpha, const SpdMatrix& m) {
    if (alpha.size() != m.dimension()) {
        throw DimensionError("alpha length " + std::to_string(alpha.size()) +
                             " does not match matrix dimension " + std::to_string(m.dimension()));
    }
    if (!alpha.allFinite()) {
        throw DomainError("alpha must be finite");
    }
}

void check_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("sigma must be positive and finite");
    }
}

}  // namespace

RiskConfig::RiskConfig(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("lambda must be positive and finite");
    }
}

std::string_view to_string(AllocationMethod method) {
    switch (method) {
        case AllocationMethod::AnalyticLaplace: return "analytic-laplace";
        case AllocationMethod::NumericGed: return "numeric-ged";
        case AllocationMethod::Gaussian: return "gaussian";
        case AllocationMethod::MarkowitzConstrained: return "markowitz-constrained";
    }
    return "unknown";
}

double critical_root_laplace(std::int64_t n, double z_scale) {
    if (n < 1) throw DomainError("critical_root_laplace: n must be >= 1");
    if (!(z_scale >= 0.0)) throw DomainError("critical_root_laplace: z_scale must be >= 0");
    const double m = static_cast<double>(n) + 1.0;
    if (std::isinf(z_scale)) return kSqrt2;
    // 4z / (sqrt((n+1)^2 + 8 z^2) + (n+1)), the rationalised quadratic root
    return 4.0 * z_scale / (std::hypot(m, std::sqrt(8.0) * z_scale) + m);
}

double critical_root_numeric(std::int64_t n, double z_scale, double kappa, double tol) {
    if (n < 1) throw DomainError("critical_root_numeric: n must be >= 1");
    if (!(z_scale >= 0.0) || !std::isfinite(z_scale)) {
        throw DomainError("critical_root_numeric: z_scale must be finite and >= 0");
    }
    if (!(kappa > 0.0 && kappa <= 1.0)) throw DomainError("critical_root_numeric: kappa must lie in (0, 1]");
    if (!(tol > 0.0)) throw DomainError("critical_root_numeric: tol must be positive");
    if (z_scale == 0.0) return 0.0;

    const double nu = 0.5 * static_cast<double>(n);
    const double psi_tol = std::max(0.01 * tol, 1e-13);
    const double target_tol = tol * std::max(1.0, z_scale);
    const auto excess = [&](double x) { return x * psi_numeric({nu, x, kappa}, psi_tol) - z_scale; };

    double lo = 0.0;
    double hi = 0.0;
    double f_hi = 0.0;
    if (kappa == 1.0) {
        // march geometrically toward the pole at sqrt 2
        double gap = 0.5;
        for (;;) {
            hi = kSqrt2 - gap;
            f_hi = excess(hi);
            if (f_hi >= 0.0) break;
            lo = hi;
            if (gap == kLaplaceGuardBand) {
                throw ConvergenceError("critical_root_numeric: root lies inside the sqrt(2) guard band");
            }
            gap = std::max(0.125 * gap, kLaplaceGuardBand);
        }
    } else {
        hi = std::max(1.0, z_scale);
        for (int i = 0;; ++i) {
            f_hi = excess(hi);
            if (f_hi >= 0.0) break;
            if (i > 60) throw ConvergenceError("critical_root_numeric: could not bracket root");
            lo = hi;
            hi *= 2.0;
        }
    }
    if (std::abs(f_hi) <= target_tol) return hi;

    for (int i = 0; i < kMaxBisections; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) {
            return mid;
        }
        const double f_mid = excess(mid);
        if (std::abs(f_mid) <= target_tol) return mid;
        (f_mid < 0.0 ? lo : hi) = mid;
    }
    throw ConvergenceError("critical_root_numeric: bisection budget exhausted");
}

double holding_uv_laplace(double alpha, double sigma, const RiskConfig& risk) {
    check_sigma(sigma);
    if (!std::isfinite(alpha)) throw DomainError("holding_uv_laplace: alpha must be finite");
    const double a = alpha / sigma;
    // (sqrt(1 + a^2) - 1) / (lambda alpha), rationalised
    return a / (risk.lambda() * sigma * (std::hypot(1.0, a) + 1.0));
}

AllocationReport holding_mv_laplace(const Vector& alpha, const SpdMatrix& covariance,
                                    const RiskConfig& risk) {
    check_alpha(alpha, covariance);
    const auto n = covariance.dimension();
    AllocationReport report;
    report.method = AllocationMethod::AnalyticLaplace;
    if (alpha.isZero(0.0)) {
        report.holdings = Vector::Zero(n);
        return report;
    }
    const Vector direction = solve_spd(covariance, alpha);
    report.z_cov = std::sqrt(mahalanobis_sq(alpha, covariance));
    report.z_scale = report.z_cov * std::sqrt(0.5 * (static_cast<double>(n) + 1.0));
    report.omega = omega_laplace(n, report.z_cov);
    report.critical_root = critical_root_laplace(n, report.z_scale);
    report.holdings = direction * (report.omega / (2.0 * risk.lambda()));
    return report;
}

AllocationReport holding_elliptical_numeric(const Vector& alpha, const SpdMatrix& sigma,
                                            double kappa, const RiskConfig& risk, double tol) {
    check_alpha(alpha, sigma);
    const auto n = sigma.dimension();
    const double factor = cov_scale_factor(kappa, n);
    AllocationReport report;
    report.method = AllocationMethod::NumericGed;
    if (alpha.isZero(0.0)) {
        report.holdings = Vector::Zero(n);
        return report;
    }
    report.z_scale = std::sqrt(mahalanobis_sq(alpha, sigma));
    report.z_cov = report.z_scale / std::sqrt(factor);
    report.critical_root = critical_root_numeric(n, report.z_scale, kappa, tol);
    const double psi = psi_numeric({0.5 * static_cast<double>(n), report.critical_root, kappa},
                                   std::max(0.01 * tol, 1e-13));
    report.omega = 2.0 * factor / psi;
    report.holdings = solve_spd(sigma, alpha) / (risk.lambda() * psi);
    return report;
}

Vector holding_gaussian(const Vector& alpha, const SpdMatrix& covariance, const RiskConfig& risk) {
    check_alpha(alpha, covariance);
    return solve_spd(covariance, alpha) / risk.lambda();
}

Vector holding_markowitz_constrained(const Vector& alpha, const SpdMatrix& covariance) {
    check_alpha(alpha, covariance);
    Vector weights = solve_spd(covariance, alpha);
    const double total = weights.sum();
    if (!(std::abs(total) > 1e-12 * weights.cwiseAbs().sum())) {
        throw DegenerateConstraintError(
            "1' V^-1 alpha vanishes: the fully-invested portfolio is undefined");
    }
    weights /= total;
    // Make the sequential sum exactly 1: the last entry absorbs the rounding
    // residue, with a few ulp nudges when 1 - partial itself rounds.
    const Eigen::Index last = weights.size() - 1;
    const double partial = std::accumulate(weights.begin(), weights.begin() + last, 0.0);
    const double target = 1.0 - partial;
    const auto exact = [&] { return std::accumulate(weights.begin(), weights.end(), 0.0) == 1.0; };
    if (!exact()) {
        weights[last] = target;
        for (int step = 1; step <= 16 && !exact(); ++step) {
            const double toward = step % 2 ? std::numeric_limits<double>::infinity()
                                           : -std::numeric_limits<double>::infinity();
            double candidate = target;
            for (int k = 0; k < (step + 1) / 2; ++k) candidate = std::nextafter(candidate, toward);
            weights[last] = candidate;
        }
    }
    return weights;
}

double taylor_check_uv(double alpha, double sigma, const RiskConfig& risk) {
    check_sigma(sigma);
    const double lambda = risk.lambda();
    const double s2 = sigma * sigma;
    const double series = alpha / (2.0 * lambda * s2) - alpha * alpha * alpha / (8.0 * lambda * s2 * s2);
    return std::abs(holding_uv_laplace(alpha, sigma, risk) - series);
}

}  // namespace ellalloc
