#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ucpd/detect.hpp"
#include "ucpd/rng.hpp"

namespace ucpd {

// ---------------------------------------------------------------------------
// Data generators

enum class GeneratorKind { iid_normal, iid_t, ar1 };
enum class Innovation { normal, t };

/// Stationary noise process. t-distributed observations are used
/// unstandardized (variance df / (df - 2)).
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::iid_normal;
    int df = 5;                                   // iid_t, or ar1 with t innovations
    double phi = 0.0;                             // ar1 only
    Innovation innovation = Innovation::normal;  // ar1 only

    static GeneratorSpec iid_normal() { return {}; }
    static GeneratorSpec iid_t(int df) { return {GeneratorKind::iid_t, df, 0.0, Innovation::normal}; }
    static GeneratorSpec ar1(double phi, Innovation innovation = Innovation::normal, int df = 5) {
        return {GeneratorKind::ar1, df, phi, innovation};
    }

    friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

void validate(const GeneratorSpec& spec);

/// n observations of the process. AR(1) starts from the stationary law for
/// normal innovations and after a 100-step burn-in otherwise.
std::vector<double> generate(const GeneratorSpec& spec, std::size_t n, RngStream& stream);

/// Marginal CDF of the process if known in closed form (not for AR(1) with
/// t innovations).
std::optional<double> marginal_cdf(const GeneratorSpec& spec, double x);

/// Mean shift of height delta after observation k_star (1-based):
/// mu_1 = ... = mu_{k*} != mu_{k*+1} = ... = mu_n.
struct ChangeSpec {
    std::size_t k_star = 1;
    double delta = 0.0;
};

/// Adds delta to observations k_star+1..n. Throws ConfigError if k_star is
/// not in 1..n-1.
std::vector<double> inject_change(std::vector<double> series, const ChangeSpec& change);

// ---------------------------------------------------------------------------
// Monte Carlo experiments

struct McConfig {
    std::size_t n = 100;
    std::size_t runs = 1000;
    std::uint64_t seed = 1;
    GeneratorSpec generator;
    std::optional<ChangeSpec> change;
    TestConfig test;
};

void validate(const McConfig& config);

/// Execution settings that never influence results.
struct McOptions {
    unsigned threads = 1;
};

struct McCell {
    std::string quantity;   // critical_value, size, power, null_critical_value,
                            // quantile, sup_distance, mean
    std::string statistic;  // C, WC, W, WW, tied_down, darling_erdos, ...
    std::size_t n = 0;
    std::size_t runs = 0;
    std::optional<double> alpha;
    std::optional<double> tau;
    std::optional<double> prob;
    double estimate = 0.0;
    std::optional<double> std_error;
    std::optional<double> reference;  // limit-law value, when there is one

    friend bool operator==(const McCell&, const McCell&) = default;
};

inline constexpr int kReportSchemaVersion = 1;

struct McReport {
    int schema_version = kReportSchemaVersion;
    std::string experiment;
    nlohmann::json config;
    std::string rng = kRngDescriptor;
    std::vector<McCell> cells;
    double elapsed_seconds = 0.0;
};

/// "C", "WC", "W", "WW" for the four standard statistics, otherwise
/// "<kernel>/gamma=<g>".
std::string statistic_label(const TestConfig& test);

/// Scalar compared against critical values: normalized_stat when present,
/// raw_max / sigma otherwise.
double mc_statistic(const TestOutcome& outcome);

/// Empirical (1 - alpha)-quantiles of the statistic under the null.
McReport mc_critical_values(const McConfig& config, std::span<const double> alphas,
                            const McOptions& options = {});

/// Null rejection rate at the asymptotic critical value for test.alpha.
McReport mc_size(const McConfig& config, const McOptions& options = {});

/// Size-corrected power at k* = floor(tau n) for each tau, using the null
/// (1 - alpha)-quantile from a dedicated null run on a disjoint stream.
/// Takes delta from config.change; its k_star is ignored.
McReport mc_power_curve(const McConfig& config, std::span<const double> taus,
                        const McOptions& options = {});

enum class LimitStatistic { darling_erdos, tied_down };

/// Replicates of a_n * scan(S / sigma) - b_n under the null; reports
/// quantiles and the sup-distance of their empirical CDF to the matching
/// Gumbel law (G1 for darling_erdos, G2 for tied_down).
McReport mc_limit_diagnostic(const McConfig& config, LimitStatistic statistic,
                             const McOptions& options = {});

/// max_k sqrt(log log n / (k (n-k) n)) |sum_{i<=k} sum_{j>k} Psi(X_i, X_j)|
/// where Psi = h - h1(x) + h1(y) for the supplied first-order projection.
/// With the empirical projection this is identically zero (up to rounding),
/// so diagnostics should pass a population h1.
double degenerate_part_statistic(std::span<const double> series, const Kernel& kernel,
                                 std::span<const double> h1);

/// Population first-order projection h1(x) = E h(x, Y) under the
/// generator's marginal. Throws ConfigError when it is not available.
std::vector<double> population_h1(const Kernel& kernel, const GeneratorSpec& generator,
                                  std::span<const double> series);

/// Monte Carlo mean of degenerate_part_statistic (population h1) for each
/// n in the grid; config.n is ignored.
McReport degenerate_part_diagnostic(const McConfig& config, std::span<const std::size_t> n_grid,
                                    const McOptions& options = {});

// Empirical quantile helpers (shared with tests).

/// Order statistic x_(ceil(p m)) of the sorted sample (inverse ECDF).
double empirical_quantile(std::span<const double> sorted, double p);

/// Distribution-free standard error of empirical_quantile: half the spread of
/// the order statistics at p m -+ sqrt(m p (1-p)).
double quantile_std_error(std::span<const double> sorted, double p);

}  // namespace ucpd
