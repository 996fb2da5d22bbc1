#include "ellalloc/spd_matrix.hpp"

#include <cmath>
#include <string>

#include "ellalloc/errors.hpp"

namespace ellalloc {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kReconstructionTolerance = 1e-10;

void require_dimension(const SpdMatrix& m, const Vector& v, const char* what) {
    if (v.size() != m.dimension()) {
        throw DimensionError(std::string(what) + ": vector length " + std::to_string(v.size()) +
                             " does not match matrix dimension " + std::to_string(m.dimension()));
    }
}

}  // namespace

SpdMatrix::SpdMatrix(Matrix entries) {
    if (entries.rows() == 0 || entries.rows() != entries.cols()) {
        throw NotSpdError("matrix must be square and non-empty");
    }
    if (!entries.allFinite()) {
        throw NotSpdError("matrix has non-finite entries");
    }
    const double scale = entries.cwiseAbs().maxCoeff();
    const double asymmetry = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry > kSymmetryTolerance * scale) {
        throw NotSpdError("matrix is not symmetric");
    }
    entries_ = 0.5 * (entries + entries.transpose());

    Eigen::LLT<Matrix> llt(entries_);
    if (llt.info() != Eigen::Success) {
        throw NotSpdError("Cholesky factorisation failed: matrix is not positive definite");
    }
    lower_ = llt.matrixL();
    if ((lower_.diagonal().array() <= 0.0).any() || !lower_.allFinite()) {
        throw NotSpdError("Cholesky factorisation produced a non-positive pivot");
    }
    const double residual = (lower_ * lower_.transpose() - entries_).cwiseAbs().maxCoeff();
    if (residual > kReconstructionTolerance * scale) {
        throw NotSpdError("matrix is too ill-conditioned for a stable Cholesky factor");
    }
}

SpdMatrix SpdMatrix::identity(Eigen::Index n) { return SpdMatrix(Matrix::Identity(n, n)); }

double SpdMatrix::log_determinant() const {
    return 2.0 * lower_.diagonal().array().log().sum();
}

SpdMatrix SpdMatrix::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw DomainError("SPD scale factor must be positive and finite");
    }
    return SpdMatrix(factor * entries_);
}

Vector SpdMatrix::solve_lower(const Vector& b) const {
    require_dimension(*this, b, "solve_lower");
    return lower_.triangularView<Eigen::Lower>().solve(b);
}

Vector SpdMatrix::solve(const Vector& b) const {
    require_dimension(*this, b, "solve");
    const Vector y = lower_.triangularView<Eigen::Lower>().solve(b);
    return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

double mahalanobis_sq(const Vector& v, const SpdMatrix& m) {
    require_dimension(m, v, "mahalanobis_sq");
    return m.solve_lower(v).squaredNorm();
}

Vector solve_spd(const SpdMatrix& m, const Vector& b) {
    require_dimension(m, b, "solve_spd");
    return m.solve(b);
}

}  // namespace ellalloc
