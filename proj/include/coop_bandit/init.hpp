#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "env.hpp"
#include "rng.hpp"

namespace coop_bandit {

// Length of the Musical Chair phase, ceil(N ln(N / delta0)).
inline std::size_t musical_chair_slots(std::size_t n, double delta0) {
    if (n == 0) throw std::invalid_argument("init: need at least one sensor");
    if (!(delta0 > 0.0 && delta0 < 1.0)) throw std::invalid_argument("init: delta0 must lie in (0,1)");
    const double raw = static_cast<double>(n) * std::log(static_cast<double>(n) / delta0);
    // Values within rounding noise of an integer are not bumped up a slot.
    return static_cast<std::size_t>(std::ceil(raw - 1e-9));
}

/// Total slots used by INIT: the Musical Chair phase plus 2N hopping slots.
inline std::size_t init_horizon(std::size_t n, double delta0) { return musical_chair_slots(n, delta0) + 2 * n; }

/// Outcome of INIT for every server. Sensor ids are 0-based.
struct InitResult {
    std::vector<std::optional<std::size_t>> external_rank; // claimed sensor f
    std::vector<std::size_t> m_estimate;
    std::vector<std::size_t> rank; // h0 in 1..M
    std::size_t slots_used = 0;
    bool succeeded = false;
};

/// Musical Chair: every unclaimed server picks a sensor uniformly at random
/// and claims it on a collision-free round; claimed servers stay put.
/// `play` receives the per-server selections of one slot and returns the
/// RoundOutcome for it.
template <class Play>
std::vector<std::optional<std::size_t>> musical_chair_phase(std::size_t n, std::size_t t0, std::size_t n_servers,
                                                            Engine& rng, Play&& play) {
    if (n_servers > n) throw std::invalid_argument("musical chair: more servers than sensors");
    std::vector<std::optional<std::size_t>> claimed(n_servers);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> sel(n_servers);
    for (std::size_t slot = 0; slot < t0; ++slot) {
        for (std::size_t k = 0; k < n_servers; ++k) sel[k] = claimed[k] ? *claimed[k] : pick(rng);
        const RoundOutcome out = play(std::span<const std::size_t>(sel));
        for (std::size_t k = 0; k < n_servers; ++k)
            if (!claimed[k] && out.servers[k].no_collision) claimed[k] = sel[k];
    }
    return claimed;
}

/// One server's view of the sequential hopping protocol. It waits on its
/// claimed sensor f for 2f slots, then walks f+1, f+2, ... (wrapping) for
/// 2(N - f) slots. Every collision raises the M estimate; collisions while
/// waiting also raise the rank. Here f is 1-based, as in the protocol.
class SequentialHopper {
public:
    SequentialHopper(std::size_t f, std::size_t n) : f_(f), n_(n) {
        if (f_ < 1 || f_ > n_) throw std::invalid_argument("hopping: external rank outside 1..N");
    }

    std::size_t total_slots() const noexcept { return 2 * n_; }
    bool done() const noexcept { return slot_ >= total_slots(); }
    bool waiting() const noexcept { return slot_ < 2 * f_; }

    // 1-based sensor for the current slot.
    std::size_t sensor() const noexcept {
        if (waiting()) return f_;
        const std::size_t i = slot_ - 2 * f_ + 1; // i = 1..2(N - f)
        return ((f_ + i - 1) % n_) + 1;
    }

    void observe(bool collided) {
        if (collided) {
            ++m_;
            if (waiting()) ++rank_;
        }
        ++slot_;
    }

    std::size_t m_estimate() const noexcept { return m_; }
    std::size_t rank() const noexcept { return rank_; }

private:
    std::size_t f_;
    std::size_t n_;
    std::size_t slot_ = 0;
    std::size_t m_ = 1;
    std::size_t rank_ = 1;
};

/// Runs the hopping protocol for all servers in lockstep. `external` holds
/// 0-based claimed sensors. Returns (M estimate, rank) per server.
template <class Play>
std::vector<std::pair<std::size_t, std::size_t>> sequential_hopping_phase(const std::vector<std::size_t>& external,
                                                                          std::size_t n, Play&& play) {
    std::vector<SequentialHopper> hoppers;
    hoppers.reserve(external.size());
    for (auto f : external) hoppers.emplace_back(f + 1, n);
    std::vector<std::size_t> sel(external.size());
    for (std::size_t slot = 0; slot < 2 * n; ++slot) {
        for (std::size_t k = 0; k < hoppers.size(); ++k) sel[k] = hoppers[k].sensor() - 1;
        const RoundOutcome out = play(std::span<const std::size_t>(sel));
        for (std::size_t k = 0; k < hoppers.size(); ++k) hoppers[k].observe(!out.servers[k].no_collision);
    }
    std::vector<std::pair<std::size_t, std::size_t>> res;
    res.reserve(hoppers.size());
    for (const auto& h : hoppers) res.emplace_back(h.m_estimate(), h.rank());
    return res;
}

/// Full INIT(N, delta0). On Musical Chair failure the hopping phase is
/// skipped and the result is marked failed.
template <class Play>
InitResult run_init(std::size_t n, double delta0, std::size_t n_servers, Engine& rng, Play&& play) {
    InitResult r;
    const std::size_t t0 = musical_chair_slots(n, delta0);
    r.external_rank = musical_chair_phase(n, t0, n_servers, rng, play);
    r.slots_used = t0;
    std::vector<std::size_t> ext;
    ext.reserve(n_servers);
    for (const auto& f : r.external_rank) {
        if (!f) return r;
        ext.push_back(*f);
    }
    const auto hop = sequential_hopping_phase(ext, n, play);
    r.slots_used += 2 * n;
    for (auto [m, h] : hop) {
        r.m_estimate.push_back(m);
        r.rank.push_back(h);
    }
    r.succeeded = true;
    return r;
}

// Convenience overload driving INIT directly against an environment.
inline InitResult run_init(std::size_t n, double delta0, std::size_t n_servers, Engine& rng, Environment& env) {
    return run_init(n, delta0, n_servers, rng,
                    [&env](std::span<const std::size_t> sel) { return env.play_round(sel); });
}

} // namespace coop_bandit
