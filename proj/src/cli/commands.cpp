#include "ellalloc/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "CLI11.hpp"
#include "ellalloc/distributions.hpp"
#include "ellalloc/errors.hpp"
#include "ellalloc/scaling.hpp"

namespace ellalloc::cli {

namespace {

constexpr double kPsiTableEdge = 1e-3;
constexpr double kVerifySigmas = 3.0;

SpdMatrix problem_matrix(const ProblemFile& problem) { return SpdMatrix(problem.matrix); }

// Covariance V of the problem, interpreting a scale matrix under `kappa`.
SpdMatrix covariance_of(const ProblemFile& problem, double kappa) {
    const SpdMatrix m = problem_matrix(problem);
    return problem.matrix_kind == MatrixKind::Covariance ? m : cov_from_scale(m, kappa);
}

SpdMatrix scale_of(const ProblemFile& problem, double kappa) {
    const SpdMatrix m = problem_matrix(problem);
    return problem.matrix_kind == MatrixKind::Scale ? m : scale_from_cov(m, kappa);
}

void require_kappa(const ProblemFile& problem, double fixed, const char* method) {
    if (problem.kappa && *problem.kappa != fixed) {
        throw InputError(std::string("method ") + method + " fixes kappa = " + format_double(fixed) +
                         " but the problem specifies kappa = " + format_double(*problem.kappa));
    }
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

std::vector<double> to_std(const Vector& v) { return {v.begin(), v.end()}; }

}  // namespace

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

Method parse_method(std::string_view name) {
    if (name == "laplace") return Method::Laplace;
    if (name == "ged") return Method::Ged;
    if (name == "normal") return Method::Normal;
    if (name == "markowitz-constrained") return Method::MarkowitzConstrained;
    throw InputError("unknown method '" + std::string(name) +
                     "' (expected laplace, ged, normal or markowitz-constrained)");
}

AllocationReport cmd_allocate(const ProblemFile& problem, Method method, double tol) {
    const RiskConfig risk(problem.lambda);
    switch (method) {
        case Method::Laplace: {
            require_kappa(problem, 1.0, "laplace");
            return holding_mv_laplace(problem.alpha, covariance_of(problem, 1.0), risk);
        }
        case Method::Ged: {
            if (!problem.kappa) throw InputError("method ged requires kappa (in the file or via --kappa)");
            const double kappa = *problem.kappa;
            return holding_elliptical_numeric(problem.alpha, scale_of(problem, kappa), kappa, risk, tol);
        }
        case Method::Normal: {
            require_kappa(problem, 0.5, "normal");
            const SpdMatrix v = problem_matrix(problem);  // scale == covariance at kappa = 1/2
            AllocationReport report;
            report.method = AllocationMethod::Gaussian;
            report.holdings = holding_gaussian(problem.alpha, v, risk);
            report.z_cov = std::sqrt(mahalanobis_sq(problem.alpha, v));
            report.z_scale = report.z_cov;
            report.critical_root = report.z_cov;
            report.omega = 2.0;
            return report;
        }
        case Method::MarkowitzConstrained: {
            const SpdMatrix v = covariance_of(problem, problem.effective_kappa());
            AllocationReport report;
            report.method = AllocationMethod::MarkowitzConstrained;
            report.holdings = holding_markowitz_constrained(problem.alpha, v);
            report.z_cov = std::sqrt(mahalanobis_sq(problem.alpha, v));
            report.z_scale = report.z_cov;
            report.critical_root = report.z_cov;
            report.omega = 2.0;
            return report;
        }
    }
    throw InputError("unhandled method");
}

nlohmann::json report_to_json(const AllocationReport& report, const ProblemFile& problem) {
    nlohmann::json out;
    out["method"] = std::string(to_string(report.method));
    out["holdings"] = to_std(report.holdings);
    out["z_cov"] = report.z_cov;
    out["z_scale"] = report.z_scale;
    out["critical_root"] = report.critical_root;
    out["omega"] = report.omega;
    out["input"] = to_json(problem);
    return out;
}

void CurveSpec::validate() const {
    if (n_values.empty()) throw InputError("omega-curve: --n-list must name at least one n");
    for (auto n : n_values) {
        if (n < 1) throw InputError("omega-curve: every n must be >= 1");
    }
    if (!(z_max > 0.0) || !std::isfinite(z_max)) throw InputError("omega-curve: --z-max must be positive");
    if (steps < 2) throw InputError("omega-curve: --steps must be >= 2");
}

void cmd_omega_curve(const CurveSpec& spec, std::ostream& out) {
    spec.validate();
    std::vector<std::string> header{"z"};
    for (auto n : spec.n_values) header.push_back("omega_n" + std::to_string(n));
    write_row(out, header);
    for (int i = 0; i < spec.steps; ++i) {
        const double z = spec.z_max * static_cast<double>(i) / (spec.steps - 1);
        std::vector<std::string> row{format_double(z)};
        for (auto n : spec.n_values) row.push_back(format_double(omega_laplace(n, z)));
        write_row(out, row);
    }
}

void cmd_psi_table(double nu, double kappa, double x_max, int steps, double tol, std::ostream& out) {
    if (!(nu > 0.0)) throw InputError("psi-table: --nu must be positive");
    if (!(kappa > 0.0 && kappa <= 1.0)) throw InputError("psi-table: --kappa must lie in (0, 1]");
    if (!(x_max >= 0.0) || !std::isfinite(x_max)) throw InputError("psi-table: --x-max must be >= 0");
    if (steps < 2) throw InputError("psi-table: --steps must be >= 2");
    if (!(tol > 0.0)) throw InputError("--tol must be positive");
    if (kappa == 1.0) x_max = std::min(x_max, std::numbers::sqrt2 - kPsiTableEdge);

    // Compute everything before writing so a quadrature failure leaves no partial table.
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < steps; ++i) {
        const double x = x_max * static_cast<double>(i) / (steps - 1);
        const double numeric = psi_numeric({nu, x, kappa}, tol);
        std::vector<std::string> row{format_double(x), format_double(numeric)};
        if (kappa == 1.0 || kappa == 0.5) {
            const double analytic = kappa == 1.0 ? psi_laplace(nu, x) : 1.0;
            row.push_back(format_double(analytic));
            row.push_back(format_double(std::abs(numeric - analytic)));
        } else {
            row.emplace_back();
            row.emplace_back();
        }
        rows.push_back(std::move(row));
    }
    write_row(out, {"x", "psi_numeric", "psi_analytic", "abs_diff"});
    for (const auto& row : rows) write_row(out, row);
}

VerifyOutcome cmd_verify(const ProblemFile& problem, std::int64_t draws, std::uint64_t seed) {
    if (problem.effective_kappa() != 1.0) {
        throw InputError("verify: the Monte-Carlo oracle samples the kappa = 1 law only");
    }
    if (draws < 2) throw InputError("verify: --draws must be >= 2");
    const RiskConfig risk(problem.lambda);
    const SpdMatrix sigma = scale_of(problem, 1.0);

    VerifyOutcome outcome;
    outcome.holdings = holding_mv_laplace(problem.alpha, cov_from_scale(sigma, 1.0), risk).holdings;
    outcome.scan = utility_scan(outcome.holdings, problem.alpha, sigma, risk, kVerifyScales, draws, seed);
    if (outcome.holdings.isZero(0.0)) {
        outcome.pass = true;  // every scale of the zero portfolio is the same portfolio
        return outcome;
    }

    const auto& points = outcome.scan.points;
    std::size_t best = 0;
    std::size_t unit = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].estimate.value < points[best].estimate.value) best = i;
        if (points[i].scale == 1.0) unit = i;
    }
    bool pass = best == unit;
    for (std::size_t j : {unit - 1, unit + 1}) {
        const double excess = points[j].estimate.value - points[unit].estimate.value;
        pass = pass && excess > kVerifySigmas * outcome.scan.difference_std_error(j, unit);
    }
    outcome.pass = pass;
    return outcome;
}

nlohmann::json verify_to_json(const VerifyOutcome& outcome, const ProblemFile& problem,
                              std::int64_t draws, std::uint64_t seed) {
    nlohmann::json out;
    out["verdict"] = outcome.pass ? "PASS" : "FAIL";
    out["draws"] = draws;
    out["seed"] = seed;
    out["holdings"] = to_std(outcome.holdings);
    std::size_t unit = 0;
    for (std::size_t i = 0; i < outcome.scan.points.size(); ++i) {
        if (outcome.scan.points[i].scale == 1.0) unit = i;
    }
    auto scan = nlohmann::json::array();
    for (std::size_t i = 0; i < outcome.scan.points.size(); ++i) {
        const auto& p = outcome.scan.points[i];
        scan.push_back({{"scale", p.scale},
                        {"utility", p.estimate.value},
                        {"std_error", p.estimate.std_error},
                        {"excess_over_unit", p.estimate.value - outcome.scan.points[unit].estimate.value},
                        {"difference_std_error", outcome.scan.difference_std_error(i, unit)}});
    }
    out["scan"] = scan;
    out["input"] = to_json(problem);
    return out;
}

void cmd_sample(const ProblemFile& problem, std::int64_t count, std::uint64_t seed, bool summary,
                std::ostream& out) {
    if (problem.effective_kappa() != 1.0) {
        throw InputError("sample: only the kappa = 1 (Laplace) law can be sampled");
    }
    if (count < 1) throw InputError("sample: --draws must be >= 1");
    const SpdMatrix sigma = scale_of(problem, 1.0);
    const ReturnSample sample = sample_mv_laplace(problem.alpha, sigma, count, seed);
    const auto n = sample.draws.cols();

    std::vector<std::string> header;
    for (Eigen::Index j = 0; j < n; ++j) header.push_back("r" + std::to_string(j + 1));
    write_row(out, header);
    std::vector<std::string> cells(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < sample.draws.rows(); ++i) {
        for (Eigen::Index j = 0; j < n; ++j) cells[static_cast<std::size_t>(j)] = format_double(sample.draws(i, j));
        write_row(out, cells);
    }
    if (!summary) return;

    const Vector mean = sample.draws.colwise().mean().transpose();
    const RowMatrix centred = sample.draws.rowwise() - mean.transpose();
    const Matrix covariance = centred.transpose() * centred / static_cast<double>(std::max<std::int64_t>(count - 1, 1));
    std::vector<std::string> row{"# mean"};
    for (Eigen::Index j = 0; j < n; ++j) row.push_back(format_double(mean[j]));
    write_row(out, row);
    for (Eigen::Index i = 0; i < n; ++i) {
        row = {"# cov" + std::to_string(i + 1)};
        for (Eigen::Index j = 0; j < n; ++j) row.push_back(format_double(covariance(i, j)));
        write_row(out, row);
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal holdings for exponential-utility investors under elliptical fat-tailed returns"};
    app.require_subcommand(1);

    std::string input;
    std::string method_name = "laplace";
    std::optional<double> kappa;
    std::optional<double> lambda;
    double tol = kDefaultQuadratureTol;
    std::int64_t draws = 10'000'000;
    std::int64_t sample_draws = 1000;
    std::uint64_t seed = 1;
    std::vector<std::int64_t> n_list{1, 2, 10, 100};
    double z_max = 10.0;
    int curve_steps = 101;
    double nu = 0.5;
    double psi_kappa = 1.0;
    double x_max = 1.2;
    int psi_steps = 13;
    bool summary = false;

    const auto add_tol = [&](CLI::App* cmd) {
        cmd->add_option("--tol", tol, "Quadrature / root tolerance")->capture_default_str();
    };

    auto* allocate = app.add_subcommand("allocate", "Optimal holdings for a problem file");
    allocate->add_option("--input", input, "Problem file (JSON)")->required();
    allocate->add_option("--method", method_name, "laplace | ged | normal | markowitz-constrained")
        ->capture_default_str();
    allocate->add_option("--kappa", kappa, "Override kurtosis parameter");
    allocate->add_option("--lambda", lambda, "Override price of risk");
    add_tol(allocate);

    auto* curve = app.add_subcommand("omega-curve", "Omega_n(Z) curves as CSV");
    curve->add_option("--n-list", n_list, "Comma-separated portfolio sizes")->delimiter(',')->capture_default_str();
    curve->add_option("--z-max", z_max, "Largest Z")->capture_default_str();
    curve->add_option("--steps", curve_steps, "Grid points")->capture_default_str();
    add_tol(curve);

    auto* psi = app.add_subcommand("psi-table", "Numeric vs analytic scaling function as CSV");
    psi->add_option("--nu", nu, "Order nu = n/2")->capture_default_str();
    psi->add_option("--kappa", psi_kappa, "Kurtosis parameter")->capture_default_str();
    psi->add_option("--x-max", x_max, "Largest x")->capture_default_str();
    psi->add_option("--steps", psi_steps, "Grid points")->capture_default_str();
    add_tol(psi);

    auto* verify = app.add_subcommand("verify", "Monte-Carlo check of the Laplace optimum");
    verify->add_option("--input", input, "Problem file (JSON)")->required();
    verify->add_option("--draws", draws, "Monte-Carlo draws")->capture_default_str();
    verify->add_option("--seed", seed, "Random seed")->capture_default_str();
    verify->add_option("--kappa", kappa, "Override kurtosis parameter");
    verify->add_option("--lambda", lambda, "Override price of risk");
    add_tol(verify);

    auto* sample = app.add_subcommand("sample", "Draw multivariate Laplace returns as CSV");
    sample->add_option("--input", input, "Problem file (JSON)")->required();
    sample->add_option("--draws", sample_draws, "Number of draws")->capture_default_str();
    sample->add_option("--seed", seed, "Random seed")->capture_default_str();
    sample->add_flag("--summary", summary, "Append sample mean and covariance");
    add_tol(sample);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (!(tol > 0.0)) throw InputError("--tol must be positive");
        const auto load = [&] {
            ProblemFile problem = load_problem(input);
            if (kappa) {
                if (!(*kappa > 0.0 && *kappa <= 1.0)) throw InputError("--kappa must lie in (0, 1]");
                problem.kappa = *kappa;
            }
            if (lambda) {
                if (!(*lambda > 0.0)) throw InputError("--lambda must be positive");
                problem.lambda = *lambda;
            }
            return problem;
        };

        if (*allocate) {
            const ProblemFile problem = load();
            const auto report = cmd_allocate(problem, parse_method(method_name), tol);
            out << report_to_json(report, problem).dump(2) << '\n';
        } else if (*curve) {
            cmd_omega_curve({n_list, z_max, curve_steps}, out);
        } else if (*psi) {
            cmd_psi_table(nu, psi_kappa, x_max, psi_steps, tol, out);
        } else if (*verify) {
            const ProblemFile problem = load();
            const auto outcome = cmd_verify(problem, draws, seed);
            out << verify_to_json(outcome, problem, draws, seed).dump(2) << '\n';
            return outcome.pass ? kExitOk : kExitVerifyFail;
        } else if (*sample) {
            cmd_sample(load(), sample_draws, seed, summary, out);
        }
        return kExitOk;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const DomainError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumericalError;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ellalloc::cli
