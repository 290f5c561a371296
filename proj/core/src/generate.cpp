#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "ucpd/error.hpp"
#include "ucpd/simulate.hpp"

namespace ucpd {

namespace {

constexpr int kBurnIn = 100;

double innovation(const GeneratorSpec& spec, RngStream& stream) {
    return spec.innovation == Innovation::normal ? stream.normal()
                                                 : stream.student_t(spec.df);
}

}  // namespace

void validate(const GeneratorSpec& spec) {
    const bool uses_t = spec.kind == GeneratorKind::iid_t ||
                        (spec.kind == GeneratorKind::ar1 && spec.innovation == Innovation::t);
    if (uses_t && spec.df <= 2) {
        throw ConfigError("generator.df must be > 2 so the variance exists");
    }
    if (spec.kind == GeneratorKind::ar1 && !(std::abs(spec.phi) < 1.0)) {
        throw ConfigError("generator.phi must satisfy |phi| < 1");
    }
}

std::vector<double> generate(const GeneratorSpec& spec, std::size_t n, RngStream& stream) {
    validate(spec);
    if (n == 0) {
        throw SizeError("generate needs n >= 1");
    }
    std::vector<double> x(n);
    switch (spec.kind) {
    case GeneratorKind::iid_normal:
        for (double& v : x) v = stream.normal();
        break;
    case GeneratorKind::iid_t: {
        for (double& v : x) v = stream.student_t(spec.df);
        break;
    }
    case GeneratorKind::ar1: {
        double prev = 0.0;
        if (spec.innovation == Innovation::normal) {
            prev = stream.normal() / std::sqrt(1.0 - spec.phi * spec.phi);
        } else {
            for (int i = 0; i < kBurnIn; ++i) prev = spec.phi * prev + innovation(spec, stream);
        }
        for (double& v : x) {
            prev = spec.phi * prev + innovation(spec, stream);
            v = prev;
        }
        break;
    }
    }
    return x;
}

std::optional<double> marginal_cdf(const GeneratorSpec& spec, double x) {
    switch (spec.kind) {
    case GeneratorKind::iid_normal:
        return boost::math::cdf(boost::math::normal_distribution<double>(), x);
    case GeneratorKind::iid_t:
        return boost::math::cdf(boost::math::students_t_distribution<double>(spec.df), x);
    case GeneratorKind::ar1:
        if (spec.innovation == Innovation::normal) {
            const double sd = 1.0 / std::sqrt(1.0 - spec.phi * spec.phi);
            return boost::math::cdf(boost::math::normal_distribution<double>(0.0, sd), x);
        }
        break;
    }
    return std::nullopt;
}

std::vector<double> inject_change(std::vector<double> series, const ChangeSpec& change) {
    if (change.k_star < 1 || change.k_star >= series.size()) {
        throw ConfigError("change.k_star must lie in 1..n-1 (k_star=" +
                          std::to_string(change.k_star) + ", n=" +
                          std::to_string(series.size()) + ")");
    }
    for (std::size_t i = change.k_star; i < series.size(); ++i) series[i] += change.delta;
    return series;
}

}  // namespace ucpd
