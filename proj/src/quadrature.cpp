#include "ellalloc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "ellalloc/errors.hpp"

namespace ellalloc {

namespace {

// Kronrod 15-point abscissae (positive half) and weights; the odd-indexed
// nodes are the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

double checked(double value, double at) {
    if (!std::isfinite(value)) {
        throw ConvergenceError("quadrature: integrand is not finite at " + std::to_string(at));
    }
    return value;
}

// One Gauss-Kronrod panel with the QUADPACK error heuristic.
Segment kronrod_panel(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_center = checked(f(center), center);
    double kronrod = f_center * kWgk[7];
    double gauss = f_center * kWg[3];
    double abs_sum = std::abs(kronrod);
    std::array<double, 7> f_lo{};
    std::array<double, 7> f_hi{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f_lo[j] = checked(f(center - dx), center - dx);
        f_hi[j] = checked(f(center + dx), center + dx);
        const double pair = f_lo[j] + f_hi[j];
        kronrod += kWgk[j] * pair;
        abs_sum += kWgk[j] * (std::abs(f_lo[j]) + std::abs(f_hi[j]));
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * pair;
        }
    }
    const double mean = 0.5 * kronrod;
    double asc = kWgk[7] * std::abs(f_center - mean);
    for (int j = 0; j < 7; ++j) {
        asc += kWgk[j] * (std::abs(f_lo[j] - mean) + std::abs(f_hi[j] - mean));
    }
    const double value = kronrod * half;
    asc *= std::abs(half);
    abs_sum *= std::abs(half);
    double error = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && error != 0.0) {
        error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
    }
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * kEps)) {
        error = std::max(50.0 * kEps * abs_sum, error);
    }
    return {a, b, value, error};
}

void check_options(const QuadratureOptions& options) {
    if (!(options.abs_tol >= 0.0) || !(options.rel_tol >= 0.0) ||
        (options.abs_tol == 0.0 && options.rel_tol == 0.0)) {
        throw DomainError("quadrature: tolerances must be non-negative and not both zero");
    }
    if (!(options.scale > 0.0) || !std::isfinite(options.scale)) {
        throw DomainError("quadrature: scale must be positive");
    }
}

}  // namespace

QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureOptions& options) {
    check_options(options);
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("integrate_interval: limits must be finite");
    }
    if (a == b) {
        return {0.0, 0.0, 1};
    }
    constexpr int kPanelEvaluations = 15;
    std::priority_queue<Segment> segments;
    const Segment first = kronrod_panel(f, a, b);
    segments.push(first);
    double total = first.value;
    double total_error = first.error;
    int evaluations = kPanelEvaluations;

    const auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };

    while (total_error > tolerance()) {
        if (evaluations + 2 * kPanelEvaluations > options.max_evaluations) {
            throw ConvergenceError("quadrature: error estimate " + std::to_string(total_error) +
                                   " above tolerance after " + std::to_string(evaluations) +
                                   " evaluations");
        }
        const Segment worst = segments.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b)) ||
            std::abs(worst.b - worst.a) < 8.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            throw ConvergenceError("quadrature: interval too small to subdivide (round-off limited)");
        }
        segments.pop();
        const Segment left = kronrod_panel(f, worst.a, mid);
        const Segment right = kronrod_panel(f, mid, worst.b);
        evaluations += 2 * kPanelEvaluations;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        segments.push(left);
        segments.push(right);
        // Running sums drift; refresh them from the heap every so often.
        if (evaluations % (kPanelEvaluations * 256) < 2 * kPanelEvaluations) {
            std::vector<Segment> all;
            total = 0.0;
            total_error = 0.0;
            while (!segments.empty()) {
                all.push_back(segments.top());
                segments.pop();
            }
            for (const auto& s : all) {
                total += s.value;
                total_error += s.error;
                segments.push(s);
            }
        }
    }

    double value = 0.0;
    double error = 0.0;
    while (!segments.empty()) {
        value += segments.top().value;
        error += segments.top().error;
        segments.pop();
    }
    return {value, error, evaluations};
}

QuadratureResult integrate_semi_infinite(const Integrand& f, const QuadratureOptions& options) {
    check_options(options);
    const double s = options.scale;
    const Integrand mapped = [&f, s](double t) {
        const double one_minus = 1.0 - t;
        const double g = s * t / one_minus;
        if (std::isinf(g)) return 0.0;
        const double value = f(g);
        if (value == 0.0) return 0.0;
        return value * s / (one_minus * one_minus);
    };
    return integrate_interval(mapped, 0.0, 1.0, options);
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double tol) {
    QuadratureOptions options;
    options.abs_tol = tol;
    return integrate_semi_infinite(f, options);
}

QuadratureResult integrate_real_line(const Integrand& f, double split,
                                     const QuadratureOptions& options) {
    QuadratureOptions half = options;
    half.abs_tol = 0.5 * options.abs_tol;
    const QuadratureResult right =
        integrate_semi_infinite([&](double u) { return f(split + u); }, half);
    const QuadratureResult left =
        integrate_semi_infinite([&](double u) { return f(split - u); }, half);
    return {left.value + right.value, left.abs_error_estimate + right.abs_error_estimate,
            left.evaluations + right.evaluations};
}

}  // namespace ellalloc
