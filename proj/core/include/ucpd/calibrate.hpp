#pragma once

#include <cstddef>
#include <span>

namespace ucpd {

/// Extreme-value normalization for a sample of size n:
///   a_n = sqrt(2 log log n)
///   b_n = 2 log log n + (1/2) log log log n - (1/2) log pi
struct NormConstants {
    double a_n = 0.0;
    double b_n = 0.0;
};

inline constexpr std::size_t kMinNormalizedN = 16;

/// Throws DomainError for n < 16.
NormConstants norm_constants(std::size_t n);

/// P(G2 <= x) = exp(-2 exp(-x)).
double gumbel2_cdf(double x);
double gumbel2_quantile(double p);

/// P(G <= x) = exp(-exp(-x)).
double gumbel1_cdf(double x);
double gumbel1_quantile(double p);

/// Distribution of the supremum of |Brownian bridge|:
///   K(x) = 1 - 2 sum_{k>=1} (-1)^{k+1} exp(-2 k^2 x^2).
/// K(x) = 0 for x <= 0.
double ks_cdf(double x);
/// Inverse of ks_cdf by bisection to 1e-8.
double ks_quantile(double p);

enum class LrvWindow { bartlett, truncated };

struct LrvConfig {
    std::size_t bandwidth = 0;
    LrvWindow window = LrvWindow::bartlett;
};

/// floor(n^{1/3}), the default lag truncation.
std::size_t default_bandwidth(std::size_t n);

inline constexpr double kLrvFloor = 1e-12;

struct LrvEstimate {
    double sigma2 = 0.0;
    bool floored = false;
};

/// HAC estimate of sum_k Cov(Y_1, Y_k):
///   gamma_0 + 2 sum_{l=1}^{L} w(l) gamma_l
/// with mean-centered, divisor-n sample autocovariances and w(l) = 1 - l/(L+1)
/// (bartlett) or 1 (truncated). Floored at kLrvFloor; `floored` reports it.
LrvEstimate long_run_variance(std::span<const double> values, const LrvConfig& config);

}  // namespace ucpd
