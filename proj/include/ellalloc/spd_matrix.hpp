#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace ellalloc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * Symmetric positive-definite matrix with its lower Cholesky factor.
 *
 * Construction validates symmetry (1e-12 relative to the largest entry) and
 * positive-definiteness (every Cholesky pivot > 0). Immutable afterwards, so
 * instances can be shared freely between threads.
 */
class SpdMatrix {
public:
    /// @throws NotSpdError if the matrix is not square, symmetric, finite and PD.
    explicit SpdMatrix(Matrix entries);

    static SpdMatrix identity(Eigen::Index n);

    Eigen::Index dimension() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }
    const Matrix& cholesky_factor() const { return lower_; }

    /// log|M| from the Cholesky diagonal.
    double log_determinant() const;

    /// c * M for c > 0.
    SpdMatrix scaled(double factor) const;

    /// Solves L y = b for the lower factor L.
    Vector solve_lower(const Vector& b) const;
    Vector solve(const Vector& b) const;

private:
    Matrix entries_;
    Matrix lower_;
};

/// v' M^-1 v through the Cholesky factor.
double mahalanobis_sq(const Vector& v, const SpdMatrix& m);

/// x with M x = b.
Vector solve_spd(const SpdMatrix& m, const Vector& b);

}  // namespace ellalloc
