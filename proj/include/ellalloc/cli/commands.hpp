#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ellalloc/allocation.hpp"
#include "ellalloc/cli/problem_file.hpp"
#include "ellalloc/oracle.hpp"

namespace ellalloc::cli {

/// Process exit codes; a stable contract for scripts.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerifyFail = 1,
    kExitInputError = 2,
    kExitNumericalError = 3,
};

enum class Method { Laplace, Ged, Normal, MarkowitzConstrained };

/// @throws InputError for an unknown name.
Method parse_method(std::string_view name);

AllocationReport cmd_allocate(const ProblemFile& problem, Method method, double tol);
nlohmann::json report_to_json(const AllocationReport& report, const ProblemFile& problem);

struct CurveSpec {
    std::vector<std::int64_t> n_values;
    double z_max = 10.0;
    int steps = 101;

    void validate() const;
};

void cmd_omega_curve(const CurveSpec& spec, std::ostream& out);

/// Rows (x, psi_numeric, psi_analytic, abs_diff). The analytic column is the
/// Laplace closed form at kappa = 1, the constant 1 at kappa = 1/2, empty otherwise.
void cmd_psi_table(double nu, double kappa, double x_max, int steps, double tol, std::ostream& out);

inline const std::vector<double> kVerifyScales = {0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5};

struct VerifyOutcome {
    bool pass = false;
    Vector holdings;
    ScaleScan scan;
};

VerifyOutcome cmd_verify(const ProblemFile& problem, std::int64_t draws, std::uint64_t seed);
nlohmann::json verify_to_json(const VerifyOutcome& outcome, const ProblemFile& problem,
                              std::int64_t draws, std::uint64_t seed);

void cmd_sample(const ProblemFile& problem, std::int64_t count, std::uint64_t seed, bool summary,
                std::ostream& out);

/// Full command line including the program name. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// %.17g formatting used by every table.
std::string format_double(double value);

}  // namespace ellalloc::cli
