#include "ellalloc/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "ellalloc/errors.hpp"

namespace ellalloc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Below this argument (or below 2 nu^2 for large orders) the ascending series
// is used; above it the Hankel expansion converges to machine precision.
constexpr double kAsymptoticCrossover = 30.0;

double asymptotic_crossover(double order) {
    return std::max(kAsymptoticCrossover, 2.0 * order * order);
}

// Ascending series, summed with running rescale so e^{x}-sized partial sums
// never overflow. Every term is positive for order > -1.
double log_scaled_series(double order, double x) {
    const double quarter_x2 = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    double log_offset = 0.0;
    constexpr double kRescale = 1e250;
    const double log_rescale = std::log(kRescale);
    const double k_peak = 0.5 * x;
    for (int k = 1; k < 1'000'000; ++k) {
        term *= quarter_x2 / (k * (k + order));
        sum += term;
        if (sum > kRescale) {
            sum /= kRescale;
            term /= kRescale;
            log_offset += log_rescale;
        }
        if (k > k_peak && term < kEps * 0.25 * sum) {
            break;
        }
    }
    return -x + order * std::log(0.5 * x) - std::lgamma(order + 1.0) + std::log(sum) + log_offset;
}

// Hankel expansion of e^{-x} I_nu(x); empty when the terms start growing
// before reaching machine precision.
std::optional<double> log_scaled_asymptotic(double order, double x) {
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * x);
        const double magnitude = std::abs(term);
        if (magnitude == 0.0 || magnitude < kEps * 0.25 * std::abs(sum)) {
            sum += term;
            return std::log(sum) - 0.5 * std::log(2.0 * std::numbers::pi * x);
        }
        if (magnitude > previous) {
            return std::nullopt;
        }
        previous = magnitude;
        sum += term;
    }
    return std::nullopt;
}

void check_arguments(double order, double arg, double min_order) {
    if (!std::isfinite(order) || !std::isfinite(arg)) {
        throw DomainError("Bessel I: arguments must be finite");
    }
    if (arg < 0.0) {
        throw DomainError("Bessel I: argument must be non-negative");
    }
    if (order < min_order || (min_order < 0.0 && order <= min_order)) {
        throw DomainError("Bessel I: order out of range");
    }
}

}  // namespace

double log_bessel_i_scaled(double order, double arg) {
    check_arguments(order, arg, -1.0);
    if (arg == 0.0) {
        if (order == 0.0) return 0.0;
        return order > 0.0 ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    }
    if (arg >= asymptotic_crossover(order)) {
        if (const auto value = log_scaled_asymptotic(order, arg)) {
            return *value;
        }
    }
    return log_scaled_series(order, arg);
}

double bessel_i_scaled(double order, double arg) {
    check_arguments(order, arg, 0.0);
    return std::exp(log_bessel_i_scaled(order, arg));
}

double bessel_i(double order, double arg) {
    check_arguments(order, arg, 0.0);
    return std::exp(arg + log_bessel_i_scaled(order, arg));
}

}  // namespace ellalloc
