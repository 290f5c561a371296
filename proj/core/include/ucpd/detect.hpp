#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ucpd/calibrate.hpp"
#include "ucpd/kernel.hpp"
#include "ucpd/uprocess.hpp"

namespace ucpd {

struct KnownSigma {
    double sigma = 1.0;
};

// Long-run standard deviation of h1 estimated from the data. An empty
// bandwidth means floor(n^{1/3}).
struct EstimateSigma {
    std::optional<std::size_t> bandwidth;
    LrvWindow window = LrvWindow::bartlett;
};

using SigmaMode = std::variant<KnownSigma, EstimateSigma>;

struct TestConfig {
    Kernel kernel = Kernel::cusum();
    double gamma = 0.5;
    SigmaMode sigma = EstimateSigma{};
    double alpha = 0.05;
};

/// Throws ConfigError / DomainError on an invalid configuration.
void validate(const TestConfig& config);

/// gamma values with a limit law: 0 (Kolmogorov-Smirnov) and 1/2 (Gumbel).
bool is_calibrated(double gamma) noexcept;

struct TestOutcome {
    std::size_t n = 0;
    Kernel kernel = Kernel::cusum();
    double gamma = 0.5;
    double alpha = 0.05;
    double raw_max = 0.0;
    std::optional<double> normalized_stat;
    std::size_t k_hat = 1;
    double sigma_used = 1.0;
    bool sigma_floored = false;
    std::optional<double> p_value;
    std::optional<double> critical_value;
    std::optional<bool> reject;
    std::vector<std::string> warnings;
};

inline constexpr std::size_t kMinTestN = 20;
// Below this n the Gumbel approximation is noticeably conservative.
inline constexpr std::size_t kGumbelWarnN = 800;

/// Single change-point test: U-process, weighted scan, normalization,
/// p-value and decision.
///
/// For gamma = 1/2: stat = (a_n / sigma) raw_max - b_n, calibrated by G2.
/// For gamma = 0:   stat = raw_max / sigma, calibrated by Kolmogorov-Smirnov.
/// Other gamma values report raw_max and k_hat only, with a warning.
TestOutcome run_test(std::span<const double> series, const TestConfig& config);

/// Same as run_test but reuses an already computed U-process of `series`.
TestOutcome run_test(const UProcess& up, std::span<const double> series,
                     const TestConfig& config);

/// Survival function of the limit law matching gamma. Throws
/// UnsupportedError for an uncalibrated gamma.
double p_value(double stat, double gamma, std::size_t n);

/// Upper (1 - alpha) quantile of the limit law matching gamma.
double critical_value(double alpha, double gamma);

}  // namespace ucpd
