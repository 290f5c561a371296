#include "ucpd/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "ucpd/error.hpp"
#include "ucpd/report.hpp"

namespace ucpd {

namespace {

// First element of every stream path; keeps experiments on disjoint streams.
enum StreamPurpose : std::uint64_t {
    kNullReplicate = 1,
    kPowerNull = 2,
    kPowerAlternative = 3,
    kDegenerate = 4,
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double rate_std_error(double p, std::size_t runs) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
}

void require_null(const McConfig& config, const char* experiment) {
    if (config.change) {
        throw ConfigError(std::string(experiment) +
                          " simulates the null hypothesis; remove the 'change' section");
    }
}

McReport start_report(const char* experiment, const McConfig& config) {
    McReport report;
    report.experiment = experiment;
    report.config = to_json(config);
    return report;
}

std::vector<double> null_statistics(const McConfig& config, std::uint64_t purpose,
                                    std::uint64_t cell, const std::optional<ChangeSpec>& change,
                                    const McOptions& options) {
    std::vector<double> stats(config.runs);
    detail::parallel_for(config.runs, options.threads, [&](std::size_t r) {
        RngStream stream(config.seed, {purpose, cell, r});
        std::vector<double> x = generate(config.generator, config.n, stream);
        if (change) x = inject_change(std::move(x), *change);
        stats[r] = mc_statistic(run_test(x, config.test));
    });
    return stats;
}

double fraction_above(std::span<const double> values, double threshold) {
    const auto count = std::ranges::count_if(values, [&](double v) { return v > threshold; });
    return static_cast<double>(count) / static_cast<double>(values.size());
}

}  // namespace

void validate(const McConfig& config) {
    if (config.runs < 1) throw ConfigError("runs must be >= 1");
    if (config.n < kMinTestN) {
        throw ConfigError("n must be >= " + std::to_string(kMinTestN) + ", got " +
                          std::to_string(config.n));
    }
    validate(config.generator);
    validate(config.test);
    if (config.change && !std::isfinite(config.change->delta)) {
        throw ConfigError("change.delta must be finite");
    }
}

std::string statistic_label(const TestConfig& test) {
    const KernelId id = test.kernel.id();
    if (id == KernelId::cusum && test.gamma == 0.0) return "C";
    if (id == KernelId::cusum && test.gamma == 0.5) return "WC";
    if (id == KernelId::wilcoxon && test.gamma == 0.0) return "W";
    if (id == KernelId::wilcoxon && test.gamma == 0.5) return "WW";
    std::ostringstream os;
    os << test.kernel.name() << "/gamma=" << test.gamma;
    return os.str();
}

double mc_statistic(const TestOutcome& outcome) {
    return outcome.normalized_stat ? *outcome.normalized_stat
                                   : outcome.raw_max / outcome.sigma_used;
}

double empirical_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw SizeError("quantile of an empty sample");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
    const auto m = static_cast<double>(sorted.size());
    auto idx = static_cast<std::size_t>(std::ceil(p * m - 1e-9));
    idx = std::clamp<std::size_t>(idx, 1, sorted.size());
    return sorted[idx - 1];
}

double quantile_std_error(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw SizeError("quantile of an empty sample");
    const auto m = static_cast<double>(sorted.size());
    const double half = std::sqrt(m * p * (1.0 - p));
    const auto last = static_cast<double>(sorted.size());
    const double lo = std::clamp(std::floor(p * m - half), 1.0, last);
    const double hi = std::clamp(std::ceil(p * m + half), 1.0, last);
    return 0.5 * (sorted[static_cast<std::size_t>(hi) - 1] -
                  sorted[static_cast<std::size_t>(lo) - 1]);
}

McReport mc_critical_values(const McConfig& config, std::span<const double> alphas,
                            const McOptions& options) {
    const auto start = Clock::now();
    validate(config);
    require_null(config, "critical-values");
    for (double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("alphas must lie in (0, 1)");
    }
    McReport report = start_report("critical-values", config);
    std::vector<double> stats = null_statistics(config, kNullReplicate, 0, std::nullopt, options);
    std::ranges::sort(stats);
    const std::string label = statistic_label(config.test);
    for (double a : alphas) {
        McCell cell;
        cell.quantity = "critical_value";
        cell.statistic = label;
        cell.n = config.n;
        cell.runs = config.runs;
        cell.alpha = a;
        cell.estimate = empirical_quantile(stats, 1.0 - a);
        cell.std_error = quantile_std_error(stats, 1.0 - a);
        if (is_calibrated(config.test.gamma)) {
            cell.reference = critical_value(a, config.test.gamma);
        }
        report.cells.push_back(std::move(cell));
    }
    report.elapsed_seconds = seconds_since(start);
    return report;
}

McReport mc_size(const McConfig& config, const McOptions& options) {
    const auto start = Clock::now();
    validate(config);
    require_null(config, "size");
    if (!is_calibrated(config.test.gamma)) {
        throw ConfigError("size needs gamma = 0 or 0.5 (an asymptotic critical value)");
    }
    McReport report = start_report("size", config);
    const std::vector<double> stats =
        null_statistics(config, kNullReplicate, 0, std::nullopt, options);
    const double crit = critical_value(config.test.alpha, config.test.gamma);
    McCell cell;
    cell.quantity = "size";
    cell.statistic = statistic_label(config.test);
    cell.n = config.n;
    cell.runs = config.runs;
    cell.alpha = config.test.alpha;
    cell.estimate = fraction_above(stats, crit);
    cell.std_error = rate_std_error(cell.estimate, config.runs);
    cell.reference = config.test.alpha;
    report.cells.push_back(std::move(cell));
    report.elapsed_seconds = seconds_since(start);
    return report;
}

McReport mc_power_curve(const McConfig& config, std::span<const double> taus,
                        const McOptions& options) {
    const auto start = Clock::now();
    validate(config);
    if (!config.change) {
        throw ConfigError("power needs a 'change' section with the shift height delta");
    }
    std::vector<std::size_t> k_stars;
    for (double tau : taus) {
        const auto k = static_cast<std::size_t>(std::floor(tau * static_cast<double>(config.n)));
        if (!(tau > 0.0 && tau < 1.0) || k < 1 || k >= config.n) {
            std::ostringstream os;
            os << "tau=" << tau << " gives k*=floor(tau n) outside 1..n-1 for n=" << config.n;
            throw ConfigError(os.str());
        }
        k_stars.push_back(k);
    }

    McReport report = start_report("power", config);
    const std::string label = statistic_label(config.test);
    const double alpha = config.test.alpha;

    std::vector<double> null_stats = null_statistics(config, kPowerNull, 0, std::nullopt, options);
    std::ranges::sort(null_stats);
    const double crit = empirical_quantile(null_stats, 1.0 - alpha);
    {
        McCell cell;
        cell.quantity = "null_critical_value";
        cell.statistic = label;
        cell.n = config.n;
        cell.runs = config.runs;
        cell.alpha = alpha;
        cell.estimate = crit;
        cell.std_error = quantile_std_error(null_stats, 1.0 - alpha);
        report.cells.push_back(std::move(cell));
    }

    for (std::size_t t = 0; t < taus.size(); ++t) {
        const ChangeSpec change{k_stars[t], config.change->delta};
        const std::vector<double> stats =
            null_statistics(config, kPowerAlternative, t, change, options);
        McCell cell;
        cell.quantity = "power";
        cell.statistic = label;
        cell.n = config.n;
        cell.runs = config.runs;
        cell.alpha = alpha;
        cell.tau = taus[t];
        cell.estimate = fraction_above(stats, crit);
        cell.std_error = rate_std_error(cell.estimate, config.runs);
        report.cells.push_back(std::move(cell));
    }
    report.elapsed_seconds = seconds_since(start);
    return report;
}

McReport mc_limit_diagnostic(const McConfig& config, LimitStatistic statistic,
                             const McOptions& options) {
    const auto start = Clock::now();
    validate(config);
    require_null(config, "limits");
    const bool tied = statistic == LimitStatistic::tied_down;
    McReport report = start_report("limits", config);
    const NormConstants nc = norm_constants(config.n);

    std::vector<double> stats(config.runs);
    detail::parallel_for(config.runs, options.threads, [&](std::size_t r) {
        RngStream stream(config.seed, {kNullReplicate, 0, r});
        std::vector<double> x = generate(config.generator, config.n, stream);
        double sigma;
        if (const auto* known = std::get_if<KnownSigma>(&config.test.sigma)) {
            sigma = known->sigma;
        } else {
            const auto& est = std::get<EstimateSigma>(config.test.sigma);
            const LrvConfig lrv{est.bandwidth.value_or(default_bandwidth(x.size())), est.window};
            sigma = std::sqrt(long_run_variance(x, lrv).sigma2);
        }
        for (double& v : x) v /= sigma;
        const std::vector<double> s = partial_sums(x);
        const ScanResult scan = tied ? tied_down_scan(s) : darling_erdos_scan(s);
        stats[r] = nc.a_n * scan.max_value - nc.b_n;
    });
    std::ranges::sort(stats);

    const std::string label = tied ? "tied_down" : "darling_erdos";
    auto limit_cdf = [&](double x) { return tied ? gumbel2_cdf(x) : gumbel1_cdf(x); };
    auto limit_quantile = [&](double p) { return tied ? gumbel2_quantile(p) : gumbel1_quantile(p); };

    for (double p : {0.5, 0.9, 0.95}) {
        McCell cell;
        cell.quantity = "quantile";
        cell.statistic = label;
        cell.n = config.n;
        cell.runs = config.runs;
        cell.prob = p;
        cell.estimate = empirical_quantile(stats, p);
        cell.std_error = quantile_std_error(stats, p);
        cell.reference = limit_quantile(p);
        report.cells.push_back(std::move(cell));
    }

    const auto m = static_cast<double>(stats.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const double g = limit_cdf(stats[i]);
        sup = std::max({sup, static_cast<double>(i + 1) / m - g, g - static_cast<double>(i) / m});
    }
    McCell cell;
    cell.quantity = "sup_distance";
    cell.statistic = label;
    cell.n = config.n;
    cell.runs = config.runs;
    cell.estimate = sup;
    report.cells.push_back(std::move(cell));

    report.elapsed_seconds = seconds_since(start);
    return report;
}

double degenerate_part_statistic(std::span<const double> series, const Kernel& kernel,
                                 std::span<const double> h1) {
    const std::size_t n = series.size();
    if (h1.size() != n) throw SizeError("h1 length does not match the series length");
    if (n < kMinTestN) {
        throw SizeError("degenerate-part statistic needs n >= " + std::to_string(kMinTestN));
    }
    const UProcess up = u_process(series, kernel);
    // The linear part n H_k - k H_n is unchanged by shifting h1, and shifting
    // by h1[0] makes it exactly zero on constant data.
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = h1[i] - h1[0];
    const std::vector<double> gs = partial_sums(g);
    const auto nd = static_cast<double>(n);
    const double loglog = std::log(std::log(nd));
    const double total = gs.back();
    double best = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const auto kd = static_cast<double>(k);
        const double linear = nd * gs[k - 1] - kd * total;
        const double degenerate = up.values[k - 1] - linear;
        best = std::max(best, std::sqrt(loglog / (kd * (nd - kd) * nd)) * std::abs(degenerate));
    }
    return best;
}

std::vector<double> population_h1(const Kernel& kernel, const GeneratorSpec& generator,
                                  std::span<const double> series) {
    std::vector<double> h1(series.size());
    switch (kernel.id()) {
    case KernelId::cusum:
        // Every generator is centered, so E(Y - x) = -x.
        for (std::size_t i = 0; i < series.size(); ++i) h1[i] = -series[i];
        return h1;
    case KernelId::wilcoxon:
    case KernelId::sign:
        for (std::size_t i = 0; i < series.size(); ++i) {
            const std::optional<double> f = marginal_cdf(generator, series[i]);
            if (!f) {
                throw ConfigError("the generator's marginal distribution has no closed form; "
                                  "population h1 is unavailable");
            }
            h1[i] = 0.5 - *f;
        }
        return h1;
    case KernelId::translation:
        break;
    }
    throw ConfigError("population h1 is only available for cusum, wilcoxon and sign kernels");
}

McReport degenerate_part_diagnostic(const McConfig& config, std::span<const std::size_t> n_grid,
                                    const McOptions& options) {
    const auto start = Clock::now();
    validate(config);
    require_null(config, "degenerate");
    for (std::size_t n : n_grid) {
        if (n < kMinTestN) {
            throw ConfigError("n_grid entries must be >= " + std::to_string(kMinTestN));
        }
    }
    McReport report = start_report("degenerate", config);
    const Kernel& kernel = config.test.kernel;
    for (std::size_t n : n_grid) {
        std::vector<double> stats(config.runs);
        detail::parallel_for(config.runs, options.threads, [&](std::size_t r) {
            RngStream stream(config.seed, {kDegenerate, n, r});
            const std::vector<double> x = generate(config.generator, n, stream);
            const std::vector<double> h1 = population_h1(kernel, config.generator, x);
            stats[r] = degenerate_part_statistic(x, kernel, h1);
        });
        double mean = 0.0;
        for (double v : stats) mean += v;
        mean /= static_cast<double>(stats.size());
        double ss = 0.0;
        for (double v : stats) ss += (v - mean) * (v - mean);
        const double sd =
            stats.size() > 1 ? std::sqrt(ss / static_cast<double>(stats.size() - 1)) : 0.0;

        McCell cell;
        cell.quantity = "mean";
        cell.statistic = "degenerate/" + kernel.name();
        cell.n = n;
        cell.runs = config.runs;
        cell.estimate = mean;
        cell.std_error = sd / std::sqrt(static_cast<double>(stats.size()));
        report.cells.push_back(std::move(cell));
    }
    report.elapsed_seconds = seconds_since(start);
    return report;
}

}  // namespace ucpd
