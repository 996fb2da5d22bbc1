#include "ellalloc/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "ellalloc/distributions.hpp"
#include "ellalloc/errors.hpp"

namespace ellalloc {

namespace {

constexpr double kInvPhi = 0.6180339887498948482;  // 1/phi
constexpr double kEndpointShrink = 1e-9;

// Golden-section search driven by `less(c, d)`, i.e. f(c) < f(d). Callers
// that can form f(c) - f(d) directly get far better resolution near the
// minimum than comparing two rounded values of f.
double golden_section_minimize(const auto& less, double a, double b, double tol) {
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    for (int i = 0; i < 1000 && (b - a) > tol; ++i) {
        if (less(c, d)) {
            b = d;
            d = c;
            c = b - kInvPhi * (b - a);
        } else {
            a = c;
            c = d;
            d = a + kInvPhi * (b - a);
        }
    }
    return 0.5 * (a + b);
}

// Running mean and co-moment of a K-vector (Welford / Chan).
struct MomentAccumulator {
    std::int64_t count = 0;
    Vector mean;
    Matrix comoment;

    explicit MomentAccumulator(Eigen::Index k = 0) : mean(Vector::Zero(k)), comoment(Matrix::Zero(k, k)) {}

    void add(const Vector& x) {
        ++count;
        const Vector before = x - mean;
        mean += before / static_cast<double>(count);
        comoment.noalias() += before * (x - mean).transpose();
    }

    void merge(const MomentAccumulator& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(other.count);
        const double n = na + nb;
        const Vector delta = other.mean - mean;
        mean += delta * (nb / n);
        comoment += other.comoment + delta * delta.transpose() * (na * nb / n);
        count += other.count;
    }
};

unsigned resolve_workers(unsigned requested, std::int64_t chunks) {
    unsigned workers = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::int64_t>(workers, chunks));
}

}  // namespace

double omega_objective_uv(double h, double alpha, double sigma, const RiskConfig& risk) {
    return std::exp(log_omega_objective_uv(h, alpha, sigma, risk));
}

double log_omega_objective_uv(double h, double alpha, double sigma, const RiskConfig& risk) {
    if (!(sigma > 0.0)) throw DomainError("omega_objective_uv: sigma must be positive");
    const double lambda = risk.lambda();
    const double reach = lambda * h * sigma;
    if (!(std::abs(reach) < 1.0)) {
        throw DomainError("omega_objective_uv: |lambda h sigma| must be < 1; expected utility diverges");
    }
    return -lambda * h * alpha - std::log1p(-reach * reach);
}

double argmin_omega_uv(double alpha, double sigma, const RiskConfig& risk, double tol) {
    if (!(sigma > 0.0)) throw DomainError("argmin_omega_uv: sigma must be positive");
    if (!(tol > 0.0)) throw DomainError("argmin_omega_uv: tol must be positive");
    const double edge = 1.0 / (risk.lambda() * sigma);
    const double limit = edge * (1.0 - kEndpointShrink);
    // log objective difference, -l a (c - d) - log((1 - r_c^2) / (1 - r_d^2)),
    // formed without subtracting two O(1) logs
    const double lambda = risk.lambda();
    const auto less = [&](double c, double d) {
        const double rc = lambda * sigma * c;
        const double rd = lambda * sigma * d;
        const double ratio = (rd - rc) * (rd + rc) / ((1.0 - rd) * (1.0 + rd));
        return -lambda * alpha * (c - d) - std::log1p(ratio) < 0.0;
    };
    return golden_section_minimize(less, -limit, limit, tol);
}

double ScaleScan::difference_std_error(std::size_t i, std::size_t j) const {
    // order the pair so (i, j) and (j, i) round identically
    const auto a = static_cast<Eigen::Index>(std::min(i, j));
    const auto b = static_cast<Eigen::Index>(std::max(i, j));
    const double variance = estimate_covariance(a, a) + estimate_covariance(b, b) -
                            2.0 * estimate_covariance(a, b);
    return std::sqrt(std::max(variance, 0.0));
}

ScaleScan utility_scan(const Vector& h, const Vector& alpha, const SpdMatrix& sigma,
                       const RiskConfig& risk, const std::vector<double>& scales,
                       std::int64_t count, std::uint64_t seed, const MonteCarloOptions& options) {
    const auto n = sigma.dimension();
    if (h.size() != n || alpha.size() != n) {
        throw DimensionError("utility_scan: h, alpha and sigma dimensions disagree");
    }
    if (count < 2) throw DomainError("utility_scan: need at least two draws");
    if (scales.empty()) throw DomainError("utility_scan: no scales given");
    if (!h.allFinite()) throw DomainError("utility_scan: h must be finite");

    const double lambda = risk.lambda();
    // hᵀr = hᵀalpha + g (Lᵀh)ᵀu, so the moment exists iff lambda s ||Lᵀh|| < sqrt 2.
    const Vector loading = sigma.cholesky_factor().transpose() * h;
    const double reach = lambda * loading.norm();
    const double limit = std::numbers::sqrt2 - options.divergence_margin;
    for (double s : scales) {
        if (!(std::abs(s) * reach < limit)) {
            throw DivergenceError("expected utility diverges: lambda*||h||_Sigma = " +
                                  std::to_string(std::abs(s) * reach) + " at scale " +
                                  std::to_string(s) + " is not below sqrt(2) - " +
                                  std::to_string(options.divergence_margin));
        }
    }

    const auto k = static_cast<Eigen::Index>(scales.size());
    const double mean_pnl = h.dot(alpha);
    const std::int64_t chunks = (count + kDrawsPerChunk - 1) / kDrawsPerChunk;
    std::vector<MomentAccumulator> partial(static_cast<std::size_t>(chunks), MomentAccumulator(k));

    std::atomic<std::int64_t> next_chunk{0};
    const auto work = [&] {
        Vector direction(n);
        Vector utility(k);
        for (std::int64_t chunk = next_chunk++; chunk < chunks; chunk = next_chunk++) {
            MvLaplaceChunkSampler sampler(alpha, sigma, seed, chunk);
            MomentAccumulator& acc = partial[static_cast<std::size_t>(chunk)];
            const std::int64_t first = chunk * kDrawsPerChunk;
            const std::int64_t last = std::min(count, first + kDrawsPerChunk);
            for (std::int64_t i = first; i < last; ++i) {
                double radius = 0.0;
                sampler.next_radial(radius, direction);
                const double pnl = mean_pnl + radius * loading.dot(direction);
                for (Eigen::Index j = 0; j < k; ++j) {
                    utility[j] = std::exp(-lambda * scales[static_cast<std::size_t>(j)] * pnl);
                }
                acc.add(utility);
            }
        }
    };
    const unsigned workers = resolve_workers(options.workers, chunks);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    MomentAccumulator total(k);
    for (const auto& acc : partial) total.merge(acc);

    const double draws = static_cast<double>(total.count);
    ScaleScan scan;
    scan.estimate_covariance = total.comoment / ((draws - 1.0) * draws);
    for (Eigen::Index j = 0; j < k; ++j) {
        UtilityEstimate estimate;
        estimate.value = total.mean[j];
        estimate.std_error = std::sqrt(std::max(scan.estimate_covariance(j, j), 0.0));
        estimate.samples_or_evals = total.count;
        scan.points.push_back({scales[static_cast<std::size_t>(j)], estimate});
    }
    return scan;
}

UtilityEstimate expected_utility_mc(const Vector& h, const Vector& alpha, const SpdMatrix& sigma,
                                    const RiskConfig& risk, std::int64_t count, std::uint64_t seed,
                                    const MonteCarloOptions& options) {
    return utility_scan(h, alpha, sigma, risk, {1.0}, count, seed, options).points.front().estimate;
}

ScaleScan verify_optimality_scan(const Vector& alpha, const SpdMatrix& sigma,
                                 const RiskConfig& risk, const std::vector<double>& scales,
                                 std::int64_t count, std::uint64_t seed,
                                 const MonteCarloOptions& options) {
    const AllocationReport optimum = holding_mv_laplace(alpha, cov_from_scale(sigma, 1.0), risk);
    return utility_scan(optimum.holdings, alpha, sigma, risk, scales, count, seed, options);
}

}  // namespace ellalloc
