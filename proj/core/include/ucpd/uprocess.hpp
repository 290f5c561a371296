#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ucpd/kernel.hpp"

namespace ucpd {

enum class Strategy {
    oracle,       // literal triple loop, O(n^3)
    incremental,  // row-sum recursion, O(n^2)
    rank_fast,    // rank kernels only, O(n log n)
    linear,       // cusum only, closed form k*S_n - n*S_k, O(n)
};

const char* to_string(Strategy s) noexcept;

/// Two-sample U-statistic process
///   U_k = sum_{i<=k} sum_{j>k} h(X_i, X_j),  k = 1..n-1,
/// stored 0-based: values[k-1] = U_k.
struct UProcess {
    std::vector<double> values;
    std::size_t n = 0;
    Kernel kernel = Kernel::cusum();
    Strategy strategy = Strategy::oracle;

    double at(std::size_t k) const { return values.at(k - 1); }
};

/// Maximum of a scan together with its smallest maximizing index (1-based).
struct ScanResult {
    double max_value = 0.0;
    std::size_t argmax_k = 1;
};

UProcess u_process_oracle(std::span<const double> series, const Kernel& kernel);

/// U_{k+1} = U_k + sum_{j != k+1} h(X_{k+1}, X_j), accumulated in ascending j.
UProcess u_process_incremental(std::span<const double> series, const Kernel& kernel);

/// Wilcoxon U-process from global ranks. Ties follow the tie-robust kernel.
UProcess u_process_rank_fast(std::span<const double> series);

/// CUSUM U-process from partial sums.
UProcess u_process_linear(std::span<const double> series);

/// Picks the cheapest exact strategy for the kernel.
UProcess u_process(std::span<const double> series, const Kernel& kernel);

/// max_k (k/n (1 - k/n))^{-gamma} n^{-3/2} |U_k|; for gamma = 1/2 this is
/// max_k |U_k| / sqrt(k (n - k) n). Ties resolve to the smallest k.
ScanResult weighted_scan(const UProcess& up, double gamma);

/// S_k = X_1 + ... + X_k, k = 1..n.
std::vector<double> partial_sums(std::span<const double> series);

/// max_{1<=k<=n-1} sqrt(n / (k (n-k))) |S_k - (k/n) S_n| with n = |partial_sums|.
ScanResult tied_down_scan(std::span<const double> partial_sums);

/// max_{1<=k<=n} |S_k| / sqrt(k).
ScanResult darling_erdos_scan(std::span<const double> partial_sums);

}  // namespace ucpd
