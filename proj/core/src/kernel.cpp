#include "ucpd/kernel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ucpd/error.hpp"

namespace ucpd {

Kernel Kernel::translation(PsiId psi, double param) {
    if (!std::isfinite(param) || param <= 0.0) {
        throw DomainError("translation kernel parameter must be finite and positive");
    }
    Kernel k(KernelId::translation);
    k.psi_ = psi;
    k.param_ = param;
    return k;
}

Kernel Kernel::from_string(std::string_view id) {
    if (id == "cusum") return cusum();
    if (id == "wilcoxon") return wilcoxon();
    if (id == "sign") return sign();
    constexpr std::string_view huber_prefix = "huber:";
    if (id.starts_with(huber_prefix)) {
        const std::string_view arg = id.substr(huber_prefix.size());
        double clip = 0.0;
        const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), clip);
        if (ec != std::errc{} || ptr != arg.data() + arg.size()) {
            throw ConfigError("invalid huber clip in kernel id '" + std::string(id) + "'");
        }
        return huber(clip);
    }
    throw ConfigError("unknown kernel '" + std::string(id) +
                      "' (expected cusum, wilcoxon, sign or huber:<c>)");
}

std::string Kernel::name() const {
    switch (id_) {
    case KernelId::cusum:
        return "cusum";
    case KernelId::wilcoxon:
        return "wilcoxon";
    case KernelId::sign:
        return "sign";
    case KernelId::translation:
        break;
    }
    std::ostringstream os;
    os.precision(17);
    os << "huber:" << param_;
    return os.str();
}

double Kernel::bound() const noexcept {
    switch (id_) {
    case KernelId::cusum:
        return std::numeric_limits<double>::infinity();
    case KernelId::wilcoxon:
    case KernelId::sign:
        return 0.5;
    case KernelId::translation:
        break;
    }
    return param_;
}

double Kernel::eval_translation(double d) const noexcept {
    // PsiId::huber is the only shape so far.
    return std::clamp(d, -param_, param_);
}

double eval(const Kernel& kernel, double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
        throw DomainError("kernel evaluated at a non-finite argument");
    }
    return kernel(x, y);
}

void require_finite(std::span<const double> series) {
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!std::isfinite(series[i])) {
            throw DomainError("observation " + std::to_string(i + 1) + " is not finite");
        }
    }
}

namespace {

// (#{j : X_j > X_i} - #{j : X_j < X_i}) / 2 for every i.
std::vector<double> rank_row_sums(std::span<const double> series) {
    std::vector<double> sorted(series.begin(), series.end());
    std::ranges::sort(sorted);
    const auto n = static_cast<std::ptrdiff_t>(sorted.size());
    std::vector<double> rows(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto [lo, hi] = std::equal_range(sorted.begin(), sorted.end(), series[i]);
        const auto less = lo - sorted.begin();
        const auto greater = n - (hi - sorted.begin());
        rows[i] = 0.5 * static_cast<double>(greater - less);
    }
    return rows;
}

}  // namespace

std::vector<double> kernel_row_sums(const Kernel& kernel, std::span<const double> series) {
    require_finite(series);
    const std::size_t n = series.size();
    if (n == 0) {
        throw SizeError("kernel_row_sums needs at least one observation");
    }
    if (kernel.id() == KernelId::cusum) {
        const double total = std::accumulate(series.begin(), series.end(), 0.0);
        const auto nd = static_cast<double>(n);
        std::vector<double> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = total - nd * series[i];
        return rows;
    }
    if (kernel.has_rank_fastpath()) return rank_row_sums(series);

    std::vector<double> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += kernel(series[i], series[j]);
        rows[i] = row;
    }
    return rows;
}

std::vector<double> empirical_h1(const Kernel& kernel, std::span<const double> series) {
    std::vector<double> h1 = kernel_row_sums(kernel, series);
    const double inv_n = 1.0 / static_cast<double>(series.size());
    for (double& v : h1) v *= inv_n;
    return h1;
}

HoeffdingParts::HoeffdingParts(Kernel kernel, std::vector<double> series, std::vector<double> h1)
    : kernel_(kernel), series_(std::move(series)), h1_(std::move(h1)) {
    if (series_.size() < 2) {
        throw SizeError("Hoeffding decomposition needs at least two observations");
    }
    if (h1_.size() != series_.size()) {
        throw SizeError("h1 length does not match the series length");
    }
    require_finite(series_);
    const std::size_t n = series_.size();
    if (n <= kDensePsiLimit) {
        psi_.resize(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                psi_[i * n + j] = kernel_(series_[i], series_[j]) - h1_[i] + h1_[j];
            }
        }
    }
}

double HoeffdingParts::psi(std::size_t i, std::size_t j) const {
    const std::size_t n = series_.size();
    if (i >= n || j >= n) {
        throw SizeError("psi index out of range");
    }
    if (dense()) return psi_[i * n + j];
    return kernel_(series_[i], series_[j]) - h1_[i] + h1_[j];
}

HoeffdingParts hoeffding_decompose(const Kernel& kernel, std::span<const double> series) {
    if (series.size() < 2) {
        throw SizeError("Hoeffding decomposition needs at least two observations");
    }
    return HoeffdingParts(kernel, std::vector<double>(series.begin(), series.end()),
                          empirical_h1(kernel, series));
}

}  // namespace ucpd
