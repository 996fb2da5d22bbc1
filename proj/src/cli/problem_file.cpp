#include "ellalloc/cli/problem_file.hpp"

#include <cmath>
#include <fstream>

namespace ellalloc::cli {

namespace {

double finite_number(const nlohmann::json& value, const std::string& what) {
    if (!value.is_number()) throw InputError(what + " must be a number");
    const double x = value.get<double>();
    if (!std::isfinite(x)) throw InputError(what + " must be finite");
    return x;
}

}  // namespace

std::string to_string(MatrixKind kind) {
    return kind == MatrixKind::Covariance ? "covariance" : "scale";
}

ProblemFile parse_problem(const nlohmann::json& document) {
    if (!document.is_object()) throw InputError("problem file must be a JSON object");
    for (const char* key : {"alpha", "matrix", "matrix_kind", "lambda"}) {
        if (!document.contains(key)) throw InputError(std::string("missing required key '") + key + "'");
    }

    ProblemFile problem;
    const auto& alpha = document.at("alpha");
    if (!alpha.is_array() || alpha.empty()) throw InputError("alpha must be a non-empty list");
    const auto n = static_cast<Eigen::Index>(alpha.size());
    problem.alpha.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        problem.alpha[i] = finite_number(alpha[static_cast<std::size_t>(i)], "alpha entry");
    }

    const auto& matrix = document.at("matrix");
    if (!matrix.is_array() || static_cast<Eigen::Index>(matrix.size()) != n) {
        throw InputError("matrix must be a list of " + std::to_string(n) + " rows");
    }
    problem.matrix.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = matrix[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw InputError("matrix row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            problem.matrix(i, j) = finite_number(row[static_cast<std::size_t>(j)], "matrix entry");
        }
    }

    const auto& kind = document.at("matrix_kind");
    if (kind == "covariance") {
        problem.matrix_kind = MatrixKind::Covariance;
    } else if (kind == "scale") {
        problem.matrix_kind = MatrixKind::Scale;
    } else {
        throw InputError("matrix_kind must be \"covariance\" or \"scale\"");
    }

    if (document.contains("kappa") && !document.at("kappa").is_null()) {
        const double kappa = finite_number(document.at("kappa"), "kappa");
        if (!(kappa > 0.0 && kappa <= 1.0)) throw InputError("kappa must lie in (0, 1]");
        problem.kappa = kappa;
    }
    problem.lambda = finite_number(document.at("lambda"), "lambda");
    if (!(problem.lambda > 0.0)) throw InputError("lambda must be positive");
    return problem;
}

ProblemFile load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open problem file " + path.string());
    nlohmann::json document;
    try {
        in >> document;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("cannot parse " + path.string() + ": " + e.what());
    }
    return parse_problem(document);
}

nlohmann::json to_json(const ProblemFile& problem) {
    nlohmann::json document;
    document["alpha"] = std::vector<double>(problem.alpha.begin(), problem.alpha.end());
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < problem.matrix.rows(); ++i) {
        const Vector row = problem.matrix.row(i).transpose();
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    document["matrix"] = rows;
    document["matrix_kind"] = to_string(problem.matrix_kind);
    if (problem.kappa) document["kappa"] = *problem.kappa;
    document["lambda"] = problem.lambda;
    return document;
}

}  // namespace ellalloc::cli
