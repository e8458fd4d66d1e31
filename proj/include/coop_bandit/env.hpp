#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rng.hpp"

namespace coop_bandit {

// What one server saw in one round. Sensor ids are 0-based in memory.
struct ServerOutcome {
    std::size_t sensor = 0;
    double observed = 0.0;    // true rate a, drawn even under collision
    bool no_collision = true; // eta
    double reward = 0.0;      // observed * eta
};

struct RoundOutcome {
    std::vector<ServerOutcome> servers;

    std::size_t collisions() const {
        std::size_t c = 0;
        for (const auto& s : servers) c += s.no_collision ? 0 : 1;
        return c;
    }
};

// eta for each server: 1 iff nobody else picked the same sensor.
inline std::vector<bool> no_collision_flags(std::span<const std::size_t> selections, std::size_t n_sensors) {
    std::vector<std::uint32_t> load(n_sensors, 0);
    for (auto s : selections) {
        if (s >= n_sensors) throw std::out_of_range("selection outside sensor range");
        ++load[s];
    }
    std::vector<bool> flags(selections.size());
    for (std::size_t k = 0; k < selections.size(); ++k) flags[k] = load[selections[k]] == 1;
    return flags;
}

// mu_i = i / (n + 1), i = 1..n
inline std::vector<double> linear_means(std::size_t n) {
    std::vector<double> mu(n);
    for (std::size_t i = 0; i < n; ++i) mu[i] = static_cast<double>(i + 1) / static_cast<double>(n + 1);
    return mu;
}

/// Stochastic sensor field shared by all servers. Sensor i draws its rate
/// from Beta(c, c(1 - mu_i)/mu_i), whose mean is exactly mu_i.
class Environment {
public:
    Environment(std::vector<double> means, double concentration, std::uint64_t seed)
        : means_(std::move(means)), concentration_(concentration), rng_(seed) {
        if (means_.empty()) throw std::invalid_argument("environment needs at least one sensor");
        if (!(concentration_ > 0.0)) throw std::invalid_argument("concentration must be positive");
        samplers_.reserve(means_.size());
        for (double mu : means_) {
            if (!(mu > 0.0 && mu < 1.0))
                throw std::invalid_argument("sensor mean must lie strictly inside (0,1), got " + std::to_string(mu));
            samplers_.emplace_back(concentration_, concentration_ * (1.0 - mu) / mu);
        }
    }

    std::size_t n_sensors() const noexcept { return means_.size(); }
    std::span<const double> means() const noexcept { return means_; }
    double concentration() const noexcept { return concentration_; }
    double alpha(std::size_t i) const { return samplers_.at(i).alpha(); }
    double beta(std::size_t i) const { return samplers_.at(i).beta(); }

    double draw(std::size_t sensor) { return samplers_.at(sensor)(rng_); }

    // Draws happen in ascending server order; colliders draw independently.
    RoundOutcome play_round(std::span<const std::size_t> selections) {
        const auto flags = no_collision_flags(selections, n_sensors());
        RoundOutcome out;
        out.servers.resize(selections.size());
        for (std::size_t k = 0; k < selections.size(); ++k) {
            auto& s = out.servers[k];
            s.sensor = selections[k];
            s.observed = draw(s.sensor);
            s.no_collision = flags[k];
            s.reward = s.no_collision ? s.observed : 0.0;
        }
        return out;
    }

private:
    std::vector<double> means_;
    double concentration_;
    std::vector<BetaSampler> samplers_;
    Engine rng_;
};

inline Environment new_environment(std::vector<double> means, double concentration, std::uint64_t seed) {
    return Environment(std::move(means), concentration, seed);
}

} // namespace coop_bandit
