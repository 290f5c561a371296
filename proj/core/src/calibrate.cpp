#include "ucpd/calibrate.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "ucpd/error.hpp"
#include "ucpd/kernel.hpp"

namespace ucpd {

namespace {

void require_open_unit(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(std::string(what) + ": probability must lie in (0, 1)");
    }
}

constexpr double kSeriesTol = 1e-12;

// Small-x form: sqrt(2 pi)/x sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2)).
double ks_cdf_small(double x) {
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double sum = 0.0;
    for (int k = 1; k < 1000; ++k) {
        const double m = 2.0 * k - 1.0;
        const double term = std::exp(-m * m * c);
        sum += term;
        if (term < kSeriesTol) break;
    }
    return std::sqrt(2.0 * std::numbers::pi) / x * sum;
}

// Alternating series; converges fast once x is not tiny.
double ks_cdf_large(double x) {
    double sum = 0.0;
    for (int k = 1; k < 1000; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < kSeriesTol) break;
    }
    return 1.0 - 2.0 * sum;
}

}  // namespace

NormConstants norm_constants(std::size_t n) {
    if (n < kMinNormalizedN) {
        throw DomainError("normalization constants need n >= 16, got " + std::to_string(n));
    }
    const double ll = std::log(std::log(static_cast<double>(n)));
    return NormConstants{
        std::sqrt(2.0 * ll),
        2.0 * ll + 0.5 * std::log(ll) - 0.5 * std::log(std::numbers::pi),
    };
}

double gumbel2_cdf(double x) {
    if (std::isnan(x)) throw DomainError("gumbel2_cdf: NaN argument");
    return std::exp(-2.0 * std::exp(-x));
}

double gumbel2_quantile(double p) {
    require_open_unit(p, "gumbel2_quantile");
    return -std::log(-std::log(p) / 2.0);
}

double gumbel1_cdf(double x) {
    if (std::isnan(x)) throw DomainError("gumbel1_cdf: NaN argument");
    return std::exp(-std::exp(-x));
}

double gumbel1_quantile(double p) {
    require_open_unit(p, "gumbel1_quantile");
    return -std::log(-std::log(p));
}

double ks_cdf(double x) {
    if (std::isnan(x)) throw DomainError("ks_cdf: NaN argument");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return x < 1.0 ? ks_cdf_small(x) : ks_cdf_large(x);
}

double ks_quantile(double p) {
    require_open_unit(p, "ks_quantile");
    double lo = 0.0;
    double hi = 1.0;
    while (ks_cdf(hi) < p) hi *= 2.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (ks_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::size_t default_bandwidth(std::size_t n) {
    auto b = static_cast<std::size_t>(std::cbrt(static_cast<double>(n)));
    // cbrt may land just below an exact cube
    while ((b + 1) * (b + 1) * (b + 1) <= n) ++b;
    while (b > 0 && b * b * b > n) --b;
    return b;
}

LrvEstimate long_run_variance(std::span<const double> values, const LrvConfig& config) {
    const std::size_t n = values.size();
    if (n < 2) {
        throw SizeError("long_run_variance needs at least two values");
    }
    if (config.bandwidth >= n) {
        throw DomainError("long_run_variance: bandwidth " + std::to_string(config.bandwidth) +
                          " must be smaller than the series length " + std::to_string(n));
    }
    require_finite(values);

    const auto nd = static_cast<double>(n);
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / nd;
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = values[i] - mean;

    auto autocov = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t i = lag; i < n; ++i) s += centered[i] * centered[i - lag];
        return s / nd;
    };

    double sigma2 = autocov(0);
    const auto bw = static_cast<double>(config.bandwidth);
    for (std::size_t lag = 1; lag <= config.bandwidth; ++lag) {
        const double w = config.window == LrvWindow::bartlett
                             ? 1.0 - static_cast<double>(lag) / (bw + 1.0)
                             : 1.0;
        sigma2 += 2.0 * w * autocov(lag);
    }
    if (!(sigma2 >= kLrvFloor)) {
        return LrvEstimate{kLrvFloor, true};
    }
    return LrvEstimate{sigma2, false};
}

}  // namespace ucpd
