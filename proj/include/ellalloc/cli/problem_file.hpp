#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "ellalloc/spd_matrix.hpp"
#include "json.hpp"

namespace ellalloc::cli {

/// Malformed or inconsistent user input (CLI exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MatrixKind { Covariance, Scale };

std::string to_string(MatrixKind kind);

/// One allocation problem:
///
///     {"alpha": [..], "matrix": [[..], ..], "matrix_kind": "covariance" | "scale",
///      "kappa": 1.0, "lambda": 2.0}
///
/// kappa is optional (effective default 1.0); lambda is required.
struct ProblemFile {
    Vector alpha;
    Matrix matrix;
    MatrixKind matrix_kind = MatrixKind::Covariance;
    std::optional<double> kappa;
    double lambda = 0.0;

    double effective_kappa() const { return kappa.value_or(1.0); }
    Eigen::Index dimension() const { return alpha.size(); }
};

/// Shape and range checks; SPD-ness is left to SpdMatrix.
ProblemFile parse_problem(const nlohmann::json& document);
ProblemFile load_problem(const std::filesystem::path& path);
nlohmann::json to_json(const ProblemFile& problem);

}  // namespace ellalloc::cli
