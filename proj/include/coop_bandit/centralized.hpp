#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "env.hpp"
#include "matrix.hpp"
#include "policy.hpp"
#include "rng.hpp"

namespace coop_bandit {

/// A one-to-one assignment of users (rows) to channels (columns).
struct Matching {
    std::vector<std::size_t> assignment; // user -> 0-based channel
    double total_weight = 0.0;
};

/// Maximum-weight assignment of M users to N >= M channels.
///
/// The M x N weight matrix is padded with zero rows to N x N and converted
/// to a min-cost problem (cost = max weight - weight), then solved with the
/// O(n^3) shortest-augmenting-path Hungarian method with row/column
/// potentials.
inline Matching hungarian(const Matrix& weights) {
    const std::size_t m = weights.rows();
    const std::size_t n = weights.cols();
    if (m > n) throw std::invalid_argument("hungarian: more users than channels");
    if (m == 0) return {};
    double wmax = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            if (!std::isfinite(weights(r, c))) throw std::invalid_argument("hungarian: non-finite weight");
            wmax = std::max(wmax, weights(r, c));
        }
    wmax = std::max(wmax, 0.0);
    auto cost = [&](std::size_t r, std::size_t c) { return r < m ? wmax - weights(r, c) : wmax; };

    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based rows/cols; index 0 is the virtual source column.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    Matching out;
    out.assignment.assign(m, 0);
    for (std::size_t j = 1; j <= n; ++j)
        if (p[j] >= 1 && p[j] <= m) out.assignment[p[j] - 1] = j - 1;
    for (std::size_t r = 0; r < m; ++r) out.total_weight += weights(r, out.assignment[r]);
    return out;
}

/// Sample-mean statistics per (user, channel). In homogeneous mode one row
/// is shared by every user.
class CentralState {
public:
    CentralState(std::size_t users, std::size_t channels, bool homogeneous)
        : users_(users), channels_(channels), homogeneous_(homogeneous),
          mean_((homogeneous ? 1 : users) * channels, 0.0), count_((homogeneous ? 1 : users) * channels, 0) {}

    std::size_t users() const noexcept { return users_; }
    std::size_t channels() const noexcept { return channels_; }
    bool homogeneous() const noexcept { return homogeneous_; }

    double mean(std::size_t user, std::size_t channel) const { return mean_[at(user, channel)]; }
    std::uint64_t count(std::size_t user, std::size_t channel) const { return count_[at(user, channel)]; }

    void update(std::size_t user, std::size_t channel, double reward) {
        const auto i = at(user, channel);
        const double m = static_cast<double>(count_[i]);
        mean_[i] = (mean_[i] * m + reward) / (m + 1.0);
        ++count_[i];
    }

    double ucb(std::size_t user, std::size_t channel, std::size_t t) const {
        const auto m = count(user, channel);
        if (m == 0) throw std::domain_error("centralized UCB: channel never sampled");
        return mean(user, channel) + std::sqrt(2.0 * std::log(static_cast<double>(t)) / static_cast<double>(m));
    }

private:
    std::size_t at(std::size_t user, std::size_t channel) const {
        if (user >= users_ || channel >= channels_) throw std::out_of_range("central state index");
        return (homogeneous_ ? 0 : user) * channels_ + channel;
    }

    std::size_t users_;
    std::size_t channels_;
    bool homogeneous_;
    std::vector<double> mean_;
    std::vector<std::uint64_t> count_;
};

inline CentralState update_sample_mean(CentralState state, std::size_t user, std::size_t channel, double reward) {
    state.update(user, channel, reward);
    return state;
}

/// Initial sweep shared by both centralized policies: user k (1-based) on
/// channel ((k + t) mod N) + 1. Returned 0-based.
inline std::vector<std::size_t> central_sweep(std::size_t users, std::size_t channels, std::size_t t) {
    std::vector<std::size_t> sel(users);
    for (std::size_t k = 0; k < users; ++k) sel[k] = (k + 1 + t) % channels;
    return sel;
}

/// Cho-UCB: user k takes the channel with the k-th largest shared UCB.
inline std::vector<std::size_t> cho_ucb_round(const CentralState& st, std::size_t t) {
    if (t <= st.channels()) return central_sweep(st.users(), st.channels(), t);
    std::vector<double> u(st.channels());
    for (std::size_t i = 0; i < st.channels(); ++i) u[i] = st.ucb(0, i, t);
    const auto order = ucb_order(u);
    return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(st.users())};
}

/// Che-UCB: the maximum-weight matching of per-user UCBs.
inline Matching che_ucb_round(const CentralState& st, std::size_t t) {
    if (t <= st.channels()) {
        Matching m;
        m.assignment = central_sweep(st.users(), st.channels(), t);
        return m;
    }
    Matrix w(st.users(), st.channels());
    for (std::size_t k = 0; k < st.users(); ++k)
        for (std::size_t i = 0; i < st.channels(); ++i) w(k, i) = st.ucb(k, i, t);
    return hungarian(w);
}

/// [8 N ln T / l_min^2 + N + (pi^2/3) N] * l_max
inline double centralized_bound(double n, double t, double l_min, double l_max) {
    if (!(l_min > 0.0)) throw std::invalid_argument("centralized_bound: l_min must be positive");
    if (l_max < l_min) throw std::invalid_argument("centralized_bound: l_max must be >= l_min");
    if (!(t >= 1.0)) throw std::invalid_argument("centralized_bound: T must be >= 1");
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    return (8.0 * n * std::log(t) / (l_min * l_min) + n + pi2 / 3.0 * n) * l_max;
}

/// Per-(user, channel) Beta environment for the heterogeneous setting.
class HeterogeneousEnvironment {
public:
    HeterogeneousEnvironment(Matrix means, double concentration, std::uint64_t seed)
        : means_(std::move(means)), rng_(seed) {
        if (!(concentration > 0.0)) throw std::invalid_argument("concentration must be positive");
        for (std::size_t k = 0; k < means_.rows(); ++k)
            for (std::size_t i = 0; i < means_.cols(); ++i) {
                const double mu = means_(k, i);
                if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("user mean must lie strictly inside (0,1)");
                samplers_.emplace_back(concentration, concentration * (1.0 - mu) / mu);
            }
    }

    const Matrix& means() const noexcept { return means_; }
    std::size_t users() const noexcept { return means_.rows(); }
    std::size_t channels() const noexcept { return means_.cols(); }

    RoundOutcome play_round(std::span<const std::size_t> selections) {
        if (selections.size() != users()) throw std::invalid_argument("one selection per user expected");
        const auto flags = no_collision_flags(selections, channels());
        RoundOutcome out;
        out.servers.resize(selections.size());
        for (std::size_t k = 0; k < selections.size(); ++k) {
            auto& s = out.servers[k];
            s.sensor = selections[k];
            s.observed = samplers_[k * channels() + s.sensor](rng_);
            s.no_collision = flags[k];
            s.reward = s.no_collision ? s.observed : 0.0;
        }
        return out;
    }

private:
    Matrix means_;
    std::vector<BetaSampler> samplers_;
    Engine rng_;
};

// Uniform per-(user, channel) means, strictly inside (0,1).
inline Matrix random_user_means(std::size_t users, std::size_t channels, std::uint64_t seed) {
    Engine rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix mu(users, channels);
    for (std::size_t k = 0; k < users; ++k)
        for (std::size_t i = 0; i < channels; ++i) {
            double x = 0.0;
            while (x <= 0.0) x = unit(rng);
            mu(k, i) = x;
        }
    return mu;
}

} // namespace coop_bandit
