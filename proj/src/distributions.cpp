#include "ellalloc/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ellalloc/errors.hpp"

namespace ellalloc {

namespace {

void check_kappa(double kappa) {
    if (!(kappa > 0.0 && kappa <= 1.0)) {
        throw DomainError("kappa must lie in (0, 1], got " + std::to_string(kappa));
    }
}

void check_same_size(const Vector& r, const Vector& alpha, const SpdMatrix& sigma) {
    if (r.size() != sigma.dimension() || alpha.size() != sigma.dimension()) {
        throw DimensionError("density: r, alpha and sigma dimensions disagree");
    }
}

// log of {Gamma(3k)/Gamma(k)}
double log_gamma_ratio(double kappa) { return std::lgamma(3.0 * kappa) - std::lgamma(kappa); }

}  // namespace

DistributionSpec::DistributionSpec(DistributionKind kind, double kappa, Eigen::Index dimension)
    : kind_(kind), kappa_(kappa), dimension_(dimension) {
    check_kappa(kappa);
    if (dimension < 1) {
        throw DomainError("distribution dimension must be positive");
    }
}

DistributionSpec DistributionSpec::ged(double kappa, Eigen::Index dimension) {
    return {DistributionKind::Ged, kappa, dimension};
}
DistributionSpec DistributionSpec::laplace(Eigen::Index dimension) {
    return {DistributionKind::Laplace, 1.0, dimension};
}
DistributionSpec DistributionSpec::normal(Eigen::Index dimension) {
    return {DistributionKind::Normal, 0.5, dimension};
}

double eta(double kappa) {
    check_kappa(kappa);
    return std::exp(log_gamma_ratio(kappa) / (2.0 * kappa));
}

double ged_log_pdf(const Vector& r, const Vector& alpha, const SpdMatrix& sigma, double kappa) {
    check_kappa(kappa);
    check_same_size(r, alpha, sigma);
    const double n = static_cast<double>(sigma.dimension());
    const double g2 = mahalanobis_sq(r - alpha, sigma);
    const double log_ratio = log_gamma_ratio(kappa);
    const double kernel = g2 > 0.0 ? std::exp((log_ratio + std::log(g2)) / (2.0 * kappa)) : 0.0;
    return -0.5 * n * std::log(std::numbers::pi) - 0.5 * sigma.log_determinant() +
           std::lgamma(1.0 + 0.5 * n) - std::lgamma(1.0 + n * kappa) + 0.5 * n * log_ratio - kernel;
}

double ged_pdf(const Vector& r, const Vector& alpha, const SpdMatrix& sigma, double kappa) {
    return std::exp(ged_log_pdf(r, alpha, sigma, kappa));
}

double mv_laplace_pdf(const Vector& r, const Vector& alpha, const SpdMatrix& sigma) {
    check_same_size(r, alpha, sigma);
    const double n = static_cast<double>(sigma.dimension());
    const double g2 = mahalanobis_sq(r - alpha, sigma);
    const double log_pdf = 0.5 * n * (std::numbers::ln2 - std::log(std::numbers::pi)) -
                           0.5 * sigma.log_determinant() + std::lgamma(1.0 + 0.5 * n) -
                           std::lgamma(1.0 + n) - std::sqrt(2.0 * g2);
    return std::exp(log_pdf);
}

double uv_laplace_pdf(double r, double alpha, double sigma) {
    if (!(sigma > 0.0)) {
        throw DomainError("uv_laplace_pdf: sigma must be positive");
    }
    return std::exp(-std::abs(r - alpha) / sigma) / (2.0 * sigma);
}

double cov_scale_factor(double kappa, Eigen::Index n) {
    check_kappa(kappa);
    if (n < 1) throw DomainError("cov_scale_factor: dimension must be positive");
    const double dn = static_cast<double>(n);
    return std::exp(std::lgamma((dn + 2.0) * kappa) + std::lgamma(1.0 + kappa) -
                    std::lgamma(3.0 * kappa) - std::lgamma(1.0 + dn * kappa));
}

SpdMatrix cov_from_scale(const SpdMatrix& sigma, double kappa) {
    return sigma.scaled(cov_scale_factor(kappa, sigma.dimension()));
}

SpdMatrix scale_from_cov(const SpdMatrix& covariance, double kappa) {
    return covariance.scaled(1.0 / cov_scale_factor(kappa, covariance.dimension()));
}

std::uint64_t chunk_seed(std::uint64_t seed, std::int64_t chunk) {
    // splitmix64 finaliser over the pair
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(chunk) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

MvLaplaceChunkSampler::MvLaplaceChunkSampler(const Vector& alpha, const SpdMatrix& sigma,
                                             std::uint64_t seed, std::int64_t chunk)
    : alpha_(alpha),
      lower_(sigma.cholesky_factor()),
      engine_(chunk_seed(seed, chunk)),
      radius_(static_cast<double>(sigma.dimension()), 1.0 / std::numbers::sqrt2),
      normal_(0.0, 1.0),
      scratch_(sigma.dimension()) {
    if (alpha.size() != sigma.dimension()) {
        throw DimensionError("sampler: alpha and sigma dimensions disagree");
    }
}

void MvLaplaceChunkSampler::next_radial(double& radius, Eigen::Ref<Vector> direction) {
    double norm = 0.0;
    do {
        for (Eigen::Index i = 0; i < direction.size(); ++i) {
            direction[i] = normal_(engine_);
        }
        norm = direction.norm();
    } while (norm == 0.0);
    direction /= norm;
    radius = radius_(engine_);
}

void MvLaplaceChunkSampler::next(Eigen::Ref<Vector> out) {
    double radius = 0.0;
    next_radial(radius, scratch_);
    out.noalias() = alpha_ + radius * (lower_ * scratch_);
}

ReturnSample sample_mv_laplace(const Vector& alpha, const SpdMatrix& sigma, std::int64_t count,
                               std::uint64_t seed) {
    if (count <= 0) {
        throw DomainError("sample_mv_laplace: count must be positive");
    }
    ReturnSample sample{RowMatrix(count, sigma.dimension()), seed,
                        DistributionSpec::laplace(sigma.dimension())};
    Vector row(sigma.dimension());
    for (std::int64_t first = 0, chunk = 0; first < count; first += kDrawsPerChunk, ++chunk) {
        MvLaplaceChunkSampler sampler(alpha, sigma, seed, chunk);
        const std::int64_t last = std::min(count, first + kDrawsPerChunk);
        for (std::int64_t i = first; i < last; ++i) {
            sampler.next(row);
            sample.draws.row(i) = row.transpose();
        }
    }
    return sample;
}

}  // namespace ellalloc
