#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ellalloc/distributions.hpp"
#include "ellalloc/errors.hpp"
#include "ellalloc/quadrature.hpp"
#include "test_helpers.hpp"

using namespace ellalloc;
using ellalloc::testing::random_spd;
using ellalloc::testing::random_vector;
using ellalloc::testing::relative_error;

namespace {

Vector scalar_vector(double v) { return Vector::Constant(1, v); }

SpdMatrix scalar_matrix(double v) { return SpdMatrix(Matrix::Constant(1, 1, v)); }

// Plain textbook multivariate normal, coded without the library's helpers.
double mvn_pdf(const Vector& r, const Vector& mean, const Matrix& cov) {
    const auto n = static_cast<double>(r.size());
    const Vector d = r - mean;
    const double quad = d.dot(cov.inverse() * d);
    return std::exp(-0.5 * quad) / std::sqrt(std::pow(2.0 * std::numbers::pi, n) * cov.determinant());
}

}  // namespace

TEST(Eta, Examples) {
    EXPECT_NEAR(eta(1.0), std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(eta(0.5), 0.5, 1e-15);
    // mpmath, 30 digits
    EXPECT_NEAR(eta(0.75), 0.94906990213060774, 1e-14);
    EXPECT_THROW(eta(0.0), DomainError);
    EXPECT_THROW(eta(1.5), DomainError);
}

TEST(DistributionSpec, Invariants) {
    EXPECT_EQ(DistributionSpec::laplace(3).kappa(), 1.0);
    EXPECT_EQ(DistributionSpec::normal(2).kappa(), 0.5);
    EXPECT_EQ(DistributionSpec::ged(0.75, 4).kind(), DistributionKind::Ged);
    EXPECT_THROW(DistributionSpec::ged(0.0, 2), DomainError);
    EXPECT_THROW(DistributionSpec::ged(1.1, 2), DomainError);
    EXPECT_THROW(DistributionSpec::laplace(0), DomainError);
}

TEST(GedPdf, ModeValues) {
    const Vector a = scalar_vector(0.3);
    const SpdMatrix one = scalar_matrix(1.0);
    EXPECT_NEAR(ged_pdf(a, a, one, 0.5), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
    EXPECT_NEAR(ged_pdf(a, a, one, 1.0), 1.0 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(mv_laplace_pdf(a, a, one), 1.0 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(mv_laplace_pdf(Vector::Zero(2), Vector::Zero(2), SpdMatrix::identity(2)),
                1.0 / std::numbers::pi, 1e-15);
}

TEST(GedPdf, NormalisedAndVarianceMatchesFactor) {
    const SpdMatrix one = scalar_matrix(1.0);
    const Vector centre = scalar_vector(0.0);
    for (double kappa : {0.5, 0.75, 1.0}) {
        const auto pdf = [&](double r) { return ged_pdf(scalar_vector(r), centre, one, kappa); };
        const auto mass = integrate_real_line(pdf, 0.0);
        EXPECT_NEAR(mass.value, 1.0, 1e-6) << "kappa " << kappa;
        const auto second = integrate_real_line([&](double r) { return r * r * pdf(r); }, 0.0);
        EXPECT_NEAR(second.value, cov_scale_factor(kappa, 1), 1e-8) << "kappa " << kappa;
    }
}

TEST(GedPdf, HalfKappaIsMultivariateNormal) {
    std::mt19937_64 rng(17);
    for (int n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 30; ++trial) {
            const Matrix cov = random_spd(rng, n);
            const Vector mean = random_vector(rng, n);
            const Vector r = mean + random_vector(rng, n, 2.0);
            EXPECT_LT(relative_error(ged_pdf(r, mean, SpdMatrix(cov), 0.5), mvn_pdf(r, mean, cov)), 1e-10);
        }
    }
}

TEST(MvLaplacePdf, AgreesWithGedAtKappaOne) {
    std::mt19937_64 rng(23);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 1 + trial % 4;
        const SpdMatrix sigma(random_spd(rng, n));
        const Vector alpha = random_vector(rng, n);
        const Vector r = alpha + random_vector(rng, n, 3.0);
        const double a = mv_laplace_pdf(r, alpha, sigma);
        const double b = ged_pdf(r, alpha, sigma, 1.0);
        ASSERT_GT(a, 0.0);
        ASSERT_TRUE(std::isfinite(a));
        worst = std::max(worst, relative_error(a, b));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(UvLaplacePdf, Examples) {
    EXPECT_NEAR(uv_laplace_pdf(0.2, 0.2, 0.4), 1.25, 1e-15);
    EXPECT_NEAR(uv_laplace_pdf(1.0, 0.0, 1.0), std::exp(-1.0) / 2.0, 1e-15);
    const double s = 0.3;
    const auto var = integrate_real_line([&](double r) { return r * r * uv_laplace_pdf(r, 0.0, s); }, 0.0);
    EXPECT_NEAR(var.value, 0.18, 1e-10);
    EXPECT_THROW(uv_laplace_pdf(0.0, 0.0, 0.0), DomainError);
}

TEST(CovScale, Factors) {
    for (Eigen::Index n : {1, 2, 5, 40}) {
        EXPECT_NEAR(cov_scale_factor(0.5, n), 1.0, 1e-14);
        EXPECT_NEAR(cov_scale_factor(1.0, n), (static_cast<double>(n) + 1.0) / 2.0, 1e-12 * n);
    }
    std::mt19937_64 rng(2);
    for (double kappa : {0.3, 0.5, 0.75, 1.0}) {
        const SpdMatrix sigma(random_spd(rng, 3));
        const Matrix back = scale_from_cov(cov_from_scale(sigma, kappa), kappa).entries();
        EXPECT_LE((back - sigma.entries()).cwiseAbs().maxCoeff(),
                  1e-12 * sigma.entries().cwiseAbs().maxCoeff());
    }
}

// The radial law of the multivariate Laplace: integrating the density over the
// sphere of Mahalanobis radius g must give the Gamma(n, rate sqrt 2) density.
TEST(MvLaplaceSampler, RadialLawFromDensity) {
    for (int n = 1; n <= 6; ++n) {
        const auto dn = static_cast<double>(n);
        const double surface = 2.0 * std::pow(std::numbers::pi, 0.5 * dn) / std::tgamma(0.5 * dn);
        Vector r = Vector::Zero(n);
        for (double g : {0.05, 0.4, 1.0, 2.5, 7.0}) {
            r[0] = g;
            const double shell = surface * std::pow(g, dn - 1.0) *
                                 mv_laplace_pdf(r, Vector::Zero(n), SpdMatrix::identity(n));
            const double gamma = std::pow(std::numbers::sqrt2, dn) * std::pow(g, dn - 1.0) *
                                 std::exp(-std::numbers::sqrt2 * g) / std::tgamma(dn);
            EXPECT_LT(relative_error(shell, gamma), 1e-12) << "n " << n << " g " << g;
        }
    }
}

TEST(MvLaplaceSampler, RadiusPassesKolmogorovSmirnov) {
    const int n = 3;
    const std::int64_t count = 100000;
    std::vector<double> radii;
    radii.reserve(count);
    Vector direction(n);
    const Vector alpha = Vector::Zero(n);
    const auto sigma = SpdMatrix::identity(n);
    for (std::int64_t chunk = 0; static_cast<std::int64_t>(radii.size()) < count; ++chunk) {
        MvLaplaceChunkSampler sampler(alpha, sigma, 99, chunk);
        for (std::int64_t i = 0; i < kDrawsPerChunk && static_cast<std::int64_t>(radii.size()) < count; ++i) {
            double g = 0.0;
            sampler.next_radial(g, direction);
            EXPECT_NEAR(direction.norm(), 1.0, 1e-12);
            radii.push_back(g);
        }
    }
    std::sort(radii.begin(), radii.end());
    double d = 0.0;
    const auto total = static_cast<double>(count);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double cdf = boost::math::gamma_p(static_cast<double>(n), std::numbers::sqrt2 * radii[i]);
        d = std::max({d, cdf - static_cast<double>(i) / total, static_cast<double>(i + 1) / total - cdf});
    }
    EXPECT_LT(d, 1.628 / std::sqrt(total));  // 1% critical value
}

TEST(MvLaplaceSampler, DrawsAreAffineImageOfRadial) {
    Matrix s(2, 2);
    s << 2.0, 0.3, 0.3, 0.5;
    const SpdMatrix sigma(s);
    Vector alpha(2);
    alpha << 0.1, -0.2;
    MvLaplaceChunkSampler radial(alpha, sigma, 5, 3);
    MvLaplaceChunkSampler full(alpha, sigma, 5, 3);
    Vector u(2);
    Vector draw(2);
    for (int i = 0; i < 100; ++i) {
        double g = 0.0;
        radial.next_radial(g, u);
        full.next(draw);
        EXPECT_NEAR(std::sqrt(mahalanobis_sq(draw - alpha, sigma)), g, 1e-12 * std::max(1.0, g));
    }
}

TEST(MvLaplaceSampler, MeanAndCovariance) {
    const std::int64_t count = 1000000;
    Vector alpha(2);
    alpha << 0.25, -0.5;
    const auto sample = sample_mv_laplace(alpha, SpdMatrix::identity(2), count, 2024);
    ASSERT_EQ(sample.draws.rows(), count);
    ASSERT_TRUE(sample.draws.allFinite());
    EXPECT_EQ(sample.spec.kind(), DistributionKind::Laplace);

    const Vector mean = sample.draws.colwise().mean().transpose();
    const RowMatrix centred = sample.draws.rowwise() - mean.transpose();
    const auto dn = static_cast<double>(count);
    for (int i = 0; i < 2; ++i) {
        const double se = std::sqrt(centred.col(i).squaredNorm() / dn / dn);
        EXPECT_LT(std::abs(mean[i] - alpha[i]), 3.0 * se);
        for (int j = 0; j < 2; ++j) {
            const Eigen::ArrayXd prod = centred.col(i).array() * centred.col(j).array();
            const double cov = prod.sum() / (dn - 1.0);
            const double cov_se = std::sqrt((prod - prod.mean()).square().sum() / (dn - 1.0) / dn);
            const double expected = i == j ? 1.5 : 0.0;
            EXPECT_LT(std::abs(cov - expected), 3.0 * cov_se) << i << "," << j << " cov " << cov;
        }
    }
}

TEST(MvLaplaceSampler, DeterministicPerSeed) {
    std::mt19937_64 rng(1);
    const SpdMatrix sigma(random_spd(rng, 3));
    const Vector alpha = random_vector(rng, 3);
    const auto a = sample_mv_laplace(alpha, sigma, 40000, 7);
    const auto b = sample_mv_laplace(alpha, sigma, 40000, 7);
    const auto c = sample_mv_laplace(alpha, sigma, 40000, 8);
    EXPECT_TRUE((a.draws.array() == b.draws.array()).all());
    EXPECT_FALSE((a.draws.array() == c.draws.array()).all());
    // a prefix of a longer run is the shorter run
    const auto shorter = sample_mv_laplace(alpha, sigma, 20000, 7);
    EXPECT_TRUE((a.draws.topRows(20000).array() == shorter.draws.array()).all());
}

TEST(MvLaplaceSampler, RejectsBadArguments) {
    EXPECT_THROW(sample_mv_laplace(Vector::Zero(3), SpdMatrix::identity(2), 10, 1), DimensionError);
    EXPECT_THROW(sample_mv_laplace(Vector::Zero(2), SpdMatrix::identity(2), -1, 1), DomainError);
}
