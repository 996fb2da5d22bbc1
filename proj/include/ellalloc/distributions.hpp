#pragma once

#include <cstdint>
#include <random>

#include "ellalloc/spd_matrix.hpp"

namespace ellalloc {

enum class DistributionKind { Ged, Laplace, Normal };

/// Which elliptical return law applies, with its kurtosis parameter.
class DistributionSpec {
public:
    static DistributionSpec ged(double kappa, Eigen::Index dimension);
    static DistributionSpec laplace(Eigen::Index dimension);
    static DistributionSpec normal(Eigen::Index dimension);

    DistributionKind kind() const { return kind_; }
    double kappa() const { return kappa_; }
    Eigen::Index dimension() const { return dimension_; }

private:
    DistributionSpec(DistributionKind kind, double kappa, Eigen::Index dimension);

    DistributionKind kind_;
    double kappa_;
    Eigen::Index dimension_;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ReturnSample {
    RowMatrix draws;  ///< one draw per row
    std::uint64_t seed = 0;
    DistributionSpec spec;
};

/// {Gamma(3k)/Gamma(k)}^{1/(2k)}, the radial decay constant of the GED kernel.
double eta(double kappa);

/// Log density of the GED law with centre alpha, scale matrix sigma.
double ged_log_pdf(const Vector& r, const Vector& alpha, const SpdMatrix& sigma, double kappa);
double ged_pdf(const Vector& r, const Vector& alpha, const SpdMatrix& sigma, double kappa);

/// The kappa = 1 member: exp(-sqrt(2 g^2)) kernel.
double mv_laplace_pdf(const Vector& r, const Vector& alpha, const SpdMatrix& sigma);

/// Conventional univariate Laplace, (1/2s) exp(-|r-a|/s); variance 2 s^2.
double uv_laplace_pdf(double r, double alpha, double sigma);

/// Ratio c with V = c * Sigma for an n-dimensional GED(kappa).
double cov_scale_factor(double kappa, Eigen::Index n);
SpdMatrix cov_from_scale(const SpdMatrix& sigma, double kappa);
SpdMatrix scale_from_cov(const SpdMatrix& covariance, double kappa);

/// Draws are generated in fixed-size chunks, each with its own engine seeded
/// from (seed, chunk index). Any consumer that walks the chunks in order sees
/// the same stream regardless of how chunks are spread over threads.
inline constexpr std::int64_t kDrawsPerChunk = 1 << 14;

std::uint64_t chunk_seed(std::uint64_t seed, std::int64_t chunk);

/// Multivariate Laplace sampler: r = alpha + L (g u), g ~ Gamma(n, rate sqrt 2),
/// u uniform on the unit sphere.
class MvLaplaceChunkSampler {
public:
    MvLaplaceChunkSampler(const Vector& alpha, const SpdMatrix& sigma, std::uint64_t seed,
                          std::int64_t chunk);

    /// Radius and unit direction of the next draw, before the affine map.
    void next_radial(double& radius, Eigen::Ref<Vector> direction);
    void next(Eigen::Ref<Vector> out);

    const Matrix& cholesky_factor() const { return lower_; }

private:
    Vector alpha_;
    Matrix lower_;
    std::mt19937_64 engine_;
    std::gamma_distribution<double> radius_;
    std::normal_distribution<double> normal_;
    Vector scratch_;
};

ReturnSample sample_mv_laplace(const Vector& alpha, const SpdMatrix& sigma, std::int64_t count,
                               std::uint64_t seed);

}  // namespace ellalloc
