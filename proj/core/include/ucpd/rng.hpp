#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ucpd {

/// Identifies the generator and derivation scheme in reports. Bump the
/// version whenever any of it changes, since outputs change with it.
inline constexpr const char* kRngDescriptor =
    "mt19937_64 seeded by splitmix64(seed, path) via seed_seq; "
    "boost ziggurat normal, boost student_t; v1";

/// Deterministic random stream for one (seed, path) pair, e.g.
/// (seed, {purpose, cell, replicate}). Distinct paths give streams that
/// do not overlap in practice; equal paths give bit-identical draws.
class RngStream {
public:
    using engine_type = std::mt19937_64;

    RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

    engine_type& engine() noexcept { return engine_; }

    double normal();
    double student_t(double df);

private:
    engine_type engine_;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace ucpd
