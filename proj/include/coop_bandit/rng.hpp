#pragma once

#include <cstdint>
#include <random>

namespace coop_bandit {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent substreams of one run. Changing the policy never touches the
// environment stream.
enum class Stream : std::uint64_t {
    environment = 1,
    graph = 2,
    policy = 3,
    user_means = 4,
};

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return splitmix64(base ^ splitmix64(index));
}

constexpr std::uint64_t derive_seed(std::uint64_t base, Stream s) noexcept {
    return derive_seed(base, static_cast<std::uint64_t>(s));
}

constexpr std::uint64_t run_seed(std::uint64_t master, std::uint64_t run) noexcept {
    return splitmix64(master ^ run);
}

// Beta(a, b) as X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
class BetaSampler {
public:
    BetaSampler(double alpha, double beta) : x_(alpha, 1.0), y_(beta, 1.0) {}

    double operator()(Engine& rng) {
        const double x = x_(rng);
        const double y = y_(rng);
        const double s = x + y;
        return s > 0.0 ? x / s : 0.5;
    }

    double alpha() const { return x_.alpha(); }
    double beta() const { return y_.alpha(); }

private:
    std::gamma_distribution<double> x_;
    std::gamma_distribution<double> y_;
};

} // namespace coop_bandit
