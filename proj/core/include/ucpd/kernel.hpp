#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ucpd {

enum class KernelId { cusum, wilcoxon, sign, translation };

// Shapes available for translation kernels h(x, y) = psi(y - x).
enum class PsiId { huber };

/// Anti-symmetric two-sample kernel h(x, y) = -h(y, x).
///
/// Built-ins:
///   cusum     h(x, y) = y - x                      (unbounded)
///   wilcoxon  h(x, y) = (1{x<y} - 1{y<x}) / 2      (bounded by 1/2)
///   sign      h(x, y) = sgn(y - x) / 2             (bounded by 1/2)
///   huber:c   h(x, y) = clamp(y - x, -c, c)        (bounded by c)
///
/// The Wilcoxon form is the tie-robust version of 1{x<y} - 1/2: it agrees
/// with it whenever x != y and is exactly zero on ties, so anti-symmetry
/// holds on tied data too. `sign` is numerically identical to `wilcoxon`;
/// it is kept as a distinct id because it is the translation-family view of
/// the same kernel.
class Kernel {
public:
    static Kernel cusum() noexcept { return Kernel(KernelId::cusum); }
    static Kernel wilcoxon() noexcept { return Kernel(KernelId::wilcoxon); }
    static Kernel sign() noexcept { return Kernel(KernelId::sign); }
    static Kernel translation(PsiId psi, double param);
    static Kernel huber(double clip) { return translation(PsiId::huber, clip); }

    /// Parses "cusum", "wilcoxon", "sign" or "huber:<c>".
    static Kernel from_string(std::string_view id);

    KernelId id() const noexcept { return id_; }
    PsiId psi() const noexcept { return psi_; }
    double param() const noexcept { return param_; }

    /// Canonical string id, inverse of from_string.
    std::string name() const;

    bool bounded() const noexcept { return id_ != KernelId::cusum; }
    /// sup |h(x, y)|; infinity for unbounded kernels.
    double bound() const noexcept;
    /// Whether row sums depend on global ranks only (O(n log n) U-process).
    bool has_rank_fastpath() const noexcept {
        return id_ == KernelId::wilcoxon || id_ == KernelId::sign;
    }

    /// Unchecked evaluation for hot loops; inputs must be finite.
    double operator()(double x, double y) const noexcept {
        switch (id_) {
        case KernelId::cusum:
            return y - x;
        case KernelId::wilcoxon:
        case KernelId::sign:
            return 0.5 * (static_cast<double>(x < y) - static_cast<double>(y < x));
        case KernelId::translation:
            break;
        }
        return eval_translation(y - x);
    }

    friend bool operator==(const Kernel&, const Kernel&) = default;

private:
    explicit Kernel(KernelId id) noexcept : id_(id) {}
    double eval_translation(double d) const noexcept;

    KernelId id_;
    PsiId psi_ = PsiId::huber;
    double param_ = 0.0;
};

/// h(x, y); throws DomainError on non-finite input.
double eval(const Kernel& kernel, double x, double y);

/// Throws DomainError naming the first non-finite observation.
void require_finite(std::span<const double> series);

/// Row sums r_i = sum_j h(X_i, X_j).
///
/// Uses O(n) (cusum) and O(n log n) (rank kernels) closed forms where they
/// exist, O(n^2) otherwise. Rank-kernel row sums are exact half-integers.
std::vector<double> kernel_row_sums(const Kernel& kernel, std::span<const double> series);

/// Empirical first-order projection: h1[i] = (1/n) sum_j h(X_i, X_j).
std::vector<double> empirical_h1(const Kernel& kernel, std::span<const double> series);

/// Empirical Hoeffding decomposition of an anti-symmetric kernel:
/// h(X_i, X_j) = theta + h1[i] - h1[j] + psi(i, j), with theta = 0 and
/// h2 = -h1 (never stored).
///
/// Psi is held as a dense matrix for n <= kDensePsiLimit and evaluated on
/// demand above that.
class HoeffdingParts {
public:
    static constexpr std::size_t kDensePsiLimit = 2000;

    /// Uses the supplied first-order projection (e.g. a population h1 for
    /// a known marginal) instead of the empirical one.
    HoeffdingParts(Kernel kernel, std::vector<double> series, std::vector<double> h1);

    double theta() const noexcept { return 0.0; }
    std::span<const double> h1() const noexcept { return h1_; }
    std::size_t size() const noexcept { return series_.size(); }
    bool dense() const noexcept { return !psi_.empty(); }
    const Kernel& kernel() const noexcept { return kernel_; }

    /// Degenerate remainder at (i, j), 0-based.
    double psi(std::size_t i, std::size_t j) const;

private:
    Kernel kernel_;
    std::vector<double> series_;
    std::vector<double> h1_;
    std::vector<double> psi_;
};

/// Throws SizeError when the series has fewer than two observations.
HoeffdingParts hoeffding_decompose(const Kernel& kernel, std::span<const double> series);

}  // namespace ucpd
