#include "ucpd/uprocess.hpp"

#include <algorithm>
#include <cmath>

#include "ucpd/error.hpp"

namespace ucpd {

const char* to_string(Strategy s) noexcept {
    switch (s) {
    case Strategy::oracle:
        return "oracle";
    case Strategy::incremental:
        return "incremental";
    case Strategy::rank_fast:
        return "rank_fast";
    case Strategy::linear:
        return "linear";
    }
    return "unknown";
}

namespace {

void require_pairwise(std::span<const double> series) {
    if (series.size() < 2) {
        throw SizeError("U-process needs at least two observations, got " +
                        std::to_string(series.size()));
    }
    require_finite(series);
}

// Accumulates U_k = U_{k-1} + row[k-1] for k = 1..n-1.
std::vector<double> prefix_rows(std::span<const double> rows) {
    std::vector<double> values(rows.size() - 1);
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        acc += rows[k];
        values[k] = acc;
    }
    return values;
}

}  // namespace

UProcess u_process_oracle(std::span<const double> series, const Kernel& kernel) {
    require_pairwise(series);
    const std::size_t n = series.size();
    UProcess up{std::vector<double>(n - 1), n, kernel, Strategy::oracle};
    for (std::size_t k = 1; k < n; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = k; j < n; ++j) sum += kernel(series[i], series[j]);
        }
        up.values[k - 1] = sum;
    }
    return up;
}

UProcess u_process_incremental(std::span<const double> series, const Kernel& kernel) {
    require_pairwise(series);
    const std::size_t n = series.size();
    std::vector<double> rows(n);
    for (std::size_t m = 0; m < n; ++m) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != m) row += kernel(series[m], series[j]);
        }
        rows[m] = row;
    }
    return UProcess{prefix_rows(rows), n, kernel, Strategy::incremental};
}

UProcess u_process_rank_fast(std::span<const double> series) {
    require_pairwise(series);
    const std::size_t n = series.size();
    // Row sums are half-integers, so the prefix sums are exact in double.
    const std::vector<double> rows = kernel_row_sums(Kernel::wilcoxon(), series);
    return UProcess{prefix_rows(rows), n, Kernel::wilcoxon(), Strategy::rank_fast};
}

UProcess u_process_linear(std::span<const double> series) {
    require_pairwise(series);
    const std::size_t n = series.size();
    // U is shift invariant; centering on x_1 keeps constant runs exactly zero.
    std::vector<double> centered(series.begin(), series.end());
    for (double& v : centered) v -= series[0];
    const std::vector<double> s = partial_sums(centered);
    const double total = s.back();
    const auto nd = static_cast<double>(n);
    std::vector<double> values(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        values[k - 1] = static_cast<double>(k) * total - nd * s[k - 1];
    }
    return UProcess{std::move(values), n, Kernel::cusum(), Strategy::linear};
}

UProcess u_process(std::span<const double> series, const Kernel& kernel) {
    if (kernel.id() == KernelId::cusum) return u_process_linear(series);
    if (kernel.has_rank_fastpath()) {
        UProcess up = u_process_rank_fast(series);
        up.kernel = kernel;
        return up;
    }
    return u_process_incremental(series, kernel);
}

ScanResult weighted_scan(const UProcess& up, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 0.5)) {
        throw DomainError("weight exponent gamma must lie in [0, 1/2]");
    }
    if (up.values.empty() || up.n != up.values.size() + 1) {
        throw SizeError("weighted_scan needs a non-empty U-process of length n-1");
    }
    const auto nd = static_cast<double>(up.n);
    const double n_pow = nd * std::sqrt(nd);
    ScanResult best;
    best.max_value = -1.0;
    for (std::size_t k = 1; k < up.n; ++k) {
        const double kd = static_cast<double>(k);
        const double abs_u = std::abs(up.values[k - 1]);
        double v;
        if (gamma == 0.5) {
            v = abs_u / std::sqrt(kd * (nd - kd) * nd);
        } else if (gamma == 0.0) {
            v = abs_u / n_pow;
        } else {
            const double frac = (kd / nd) * (1.0 - kd / nd);
            v = std::pow(frac, -gamma) * abs_u / n_pow;
        }
        if (v > best.max_value) {
            best.max_value = v;
            best.argmax_k = k;
        }
    }
    return best;
}

std::vector<double> partial_sums(std::span<const double> series) {
    if (series.empty()) {
        throw SizeError("partial_sums of an empty series");
    }
    std::vector<double> s(series.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += series[i];
        s[i] = acc;
    }
    return s;
}

ScanResult tied_down_scan(std::span<const double> partial_sums) {
    const std::size_t n = partial_sums.size();
    if (n < 2) {
        throw SizeError("tied_down_scan needs n >= 2");
    }
    const auto nd = static_cast<double>(n);
    const double total = partial_sums[n - 1];
    ScanResult best;
    best.max_value = -1.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double kd = static_cast<double>(k);
        const double bridge = partial_sums[k - 1] - (kd / nd) * total;
        const double v = std::sqrt(nd / (kd * (nd - kd))) * std::abs(bridge);
        if (v > best.max_value) {
            best.max_value = v;
            best.argmax_k = k;
        }
    }
    return best;
}

ScanResult darling_erdos_scan(std::span<const double> partial_sums) {
    if (partial_sums.empty()) {
        throw SizeError("darling_erdos_scan of an empty sequence");
    }
    ScanResult best;
    best.max_value = -1.0;
    for (std::size_t k = 1; k <= partial_sums.size(); ++k) {
        const double v = std::abs(partial_sums[k - 1]) / std::sqrt(static_cast<double>(k));
        if (v > best.max_value) {
            best.max_value = v;
            best.argmax_k = k;
        }
    }
    return best;
}

}  // namespace ucpd
