#include "ucpd/rng.hpp"

#include <array>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/student_t_distribution.hpp>

namespace ucpd {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = seed;
    std::uint64_t key = splitmix64(state);
    for (std::uint64_t p : path) {
        state = key ^ p;
        key = splitmix64(state);
    }
    std::array<std::uint32_t, 8> words{};
    for (std::size_t i = 0; i < words.size(); i += 2) {
        const std::uint64_t w = splitmix64(key);
        words[i] = static_cast<std::uint32_t>(w);
        words[i + 1] = static_cast<std::uint32_t>(w >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
}

double RngStream::normal() {
    boost::random::normal_distribution<double> dist;
    return dist(engine_);
}

double RngStream::student_t(double df) {
    boost::random::student_t_distribution<double> dist(df);
    return dist(engine_);
}

}  // namespace ucpd
