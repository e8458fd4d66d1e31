#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "centralized.hpp"
#include "env.hpp"
#include "matrix.hpp"

namespace coop_bandit {

enum class Phase : std::uint8_t { init, sweep, main };

inline std::string_view to_string(Phase p) {
    switch (p) {
    case Phase::init: return "init";
    case Phase::sweep: return "sweep";
    case Phase::main: return "main";
    }
    return "?";
}

/// Full history of one run. Storage is flat (round-major, then server).
/// Rounds are numbered 1.. in recording order.
class ExperimentTrace {
public:
    ExperimentTrace(std::size_t n_servers, std::vector<double> means)
        : m_(n_servers), means_(std::move(means)) {
        if (m_ == 0) throw std::invalid_argument("trace needs at least one server");
        if (m_ > means_.size()) throw std::invalid_argument("trace: more servers than sensors");
    }

    // Heterogeneous case: expected reward of server k on sensor i is user_means(k, i).
    ExperimentTrace(Matrix user_means) : ExperimentTrace(user_means.rows(), std::vector<double>(user_means.cols(), 0.0)) {
        user_means_ = std::move(user_means);
    }

    // `ranks` may be empty (no rank in play this round).
    void append(Phase phase, const RoundOutcome& out, std::span<const std::size_t> ranks = {}) {
        if (out.servers.size() != m_) throw std::invalid_argument("trace: wrong number of servers in round");
        phase_.push_back(phase);
        for (std::size_t k = 0; k < m_; ++k) {
            const auto& s = out.servers[k];
            sensor_.push_back(static_cast<std::uint32_t>(s.sensor));
            no_collision_.push_back(s.no_collision ? 1 : 0);
            reward_.push_back(s.reward);
            observed_.push_back(s.observed);
            rank_.push_back(ranks.empty() ? 0 : static_cast<std::uint32_t>(ranks[k]));
        }
    }

    std::size_t n_servers() const noexcept { return m_; }
    std::size_t n_sensors() const noexcept { return means_.size(); }
    std::size_t n_rounds() const noexcept { return phase_.size(); }
    const std::vector<double>& means() const noexcept { return means_; }
    const std::optional<Matrix>& user_means() const noexcept { return user_means_; }

    // r is a 0-based round index.
    Phase phase(std::size_t r) const { return phase_.at(r); }
    std::size_t sensor(std::size_t r, std::size_t k) const { return sensor_.at(r * m_ + k); }
    bool no_collision(std::size_t r, std::size_t k) const { return no_collision_.at(r * m_ + k) != 0; }
    double reward(std::size_t r, std::size_t k) const { return reward_.at(r * m_ + k); }
    double observed(std::size_t r, std::size_t k) const { return observed_.at(r * m_ + k); }
    std::size_t rank(std::size_t r, std::size_t k) const { return rank_.at(r * m_ + k); }

    double mean_of(std::size_t k, std::size_t sensor) const {
        return user_means_ ? (*user_means_)(k, sensor) : means_[sensor];
    }

    // mu_{i^k(t)} * eta^k(t)
    double expected_reward(std::size_t r, std::size_t k) const {
        return no_collision(r, k) ? mean_of(k, sensor(r, k)) : 0.0;
    }

    /// Per-round optimum: top-M mean sum, or the best matching when heterogeneous.
    double optimal_reward() const {
        if (user_means_) return hungarian(*user_means_).total_weight;
        std::vector<double> sorted = means_;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        double s = 0.0;
        for (std::size_t k = 0; k < m_; ++k) s += sorted[k];
        return s;
    }

    std::string fingerprint;

private:
    std::size_t m_;
    std::vector<double> means_;
    std::optional<Matrix> user_means_;
    std::vector<Phase> phase_;
    std::vector<std::uint32_t> sensor_;
    std::vector<std::uint8_t> no_collision_;
    std::vector<double> reward_;
    std::vector<double> observed_;
    std::vector<std::uint32_t> rank_;
};

/// Cumulative pseudo-regret RR_t, t = 1..rounds.
inline std::vector<double> reward_regret(const ExperimentTrace& tr) {
    const double best = tr.optimal_reward();
    std::vector<double> rr(tr.n_rounds());
    double acc = 0.0;
    for (std::size_t r = 0; r < tr.n_rounds(); ++r) {
        double got = 0.0;
        for (std::size_t k = 0; k < tr.n_servers(); ++k) got += tr.expected_reward(r, k);
        acc += best - got;
        rr[r] = acc;
    }
    return rr;
}

/// FR_t = sum_k | sum_{s<=t} (mu_bar(s) - mu_{i^k(s)} eta^k(s)) |, evaluated at every t.
inline std::vector<double> fairness_regret(const ExperimentTrace& tr) {
    const std::size_t m = tr.n_servers();
    std::vector<double> dev(m, 0.0), x(m);
    std::vector<double> fr(tr.n_rounds());
    for (std::size_t r = 0; r < tr.n_rounds(); ++r) {
        double bar = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            x[k] = tr.expected_reward(r, k);
            bar += x[k];
        }
        bar /= static_cast<double>(m);
        double total = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            dev[k] += bar - x[k];
            total += std::abs(dev[k]);
        }
        fr[r] = total;
    }
    return fr;
}

/// Cumulative number of server-rounds with eta = 0.
inline std::vector<std::uint64_t> collision_count(const ExperimentTrace& tr) {
    std::vector<std::uint64_t> c(tr.n_rounds());
    std::uint64_t acc = 0;
    for (std::size_t r = 0; r < tr.n_rounds(); ++r) {
        for (std::size_t k = 0; k < tr.n_servers(); ++k) acc += tr.no_collision(r, k) ? 0 : 1;
        c[r] = acc;
    }
    return c;
}

/// RR for a single server: t * mu_(k) - sum_s mu_{i^k(s)} eta^k(s), where
/// mu_(k) is the k-th largest mean. Summing over k gives reward_regret.
inline std::vector<double> server_reward_regret(const ExperimentTrace& tr, std::size_t k) {
    if (tr.user_means()) throw std::logic_error("per-server decomposition is defined for shared means only");
    std::vector<double> sorted = tr.means();
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<double> rr(tr.n_rounds());
    double acc = 0.0;
    for (std::size_t r = 0; r < tr.n_rounds(); ++r) {
        acc += sorted[k] - tr.expected_reward(r, k);
        rr[r] = acc;
    }
    return rr;
}

struct RegretCurves {
    std::vector<double> reward_regret;
    std::vector<double> fairness_regret;
    std::vector<std::uint64_t> collisions;
};

inline RegretCurves regret_curves(const ExperimentTrace& tr) {
    return {reward_regret(tr), fairness_regret(tr), collision_count(tr)};
}

/// Per-server mean realized reward over rounds of the given phases.
inline std::vector<double> per_server_average_reward(const ExperimentTrace& tr, bool skip_init = true) {
    std::vector<double> avg(tr.n_servers(), 0.0);
    std::size_t rounds = 0;
    for (std::size_t r = 0; r < tr.n_rounds(); ++r) {
        if (skip_init && tr.phase(r) == Phase::init) continue;
        ++rounds;
        for (std::size_t k = 0; k < tr.n_servers(); ++k) avg[k] += tr.reward(r, k);
    }
    if (rounds > 0)
        for (auto& a : avg) a /= static_cast<double>(rounds);
    return avg;
}

/// Incorrect-selection counts m~_i^k(T): server k at a main-phase round is
/// incorrect when it did not pick the h^k(t)-th best sensor by true mean.
/// Indexed [server][sensor].
inline std::vector<std::vector<std::uint64_t>> incorrect_selections(const ExperimentTrace& tr) {
    std::vector<std::size_t> by_mean(tr.n_sensors());
    for (std::size_t i = 0; i < by_mean.size(); ++i) by_mean[i] = i;
    std::stable_sort(by_mean.begin(), by_mean.end(),
                     [&](std::size_t a, std::size_t b) { return tr.means()[a] > tr.means()[b]; });
    std::vector<std::vector<std::uint64_t>> out(tr.n_servers(), std::vector<std::uint64_t>(tr.n_sensors(), 0));
    for (std::size_t r = 0; r < tr.n_rounds(); ++r) {
        if (tr.phase(r) != Phase::main) continue;
        for (std::size_t k = 0; k < tr.n_servers(); ++k) {
            const std::size_t h = tr.rank(r, k);
            if (h == 0) continue;
            const std::size_t i = tr.sensor(r, k);
            if (i != by_mean[h - 1]) ++out[k][i];
        }
    }
    return out;
}

/// Smallest nonzero gap between two means.
inline double min_gap(std::span<const double> means) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < means.size(); ++i)
        for (std::size_t j = i + 1; j < means.size(); ++j) {
            const double d = std::abs(means[i] - means[j]);
            if (d > 0.0) best = std::min(best, d);
        }
    if (!std::isfinite(best)) throw std::domain_error("min_gap: all means are equal");
    return best;
}

struct TheoreticalBounds {
    double delta_min = 0.0;
    double z = 0.0;
    double reward_bound = 0.0;   // (N + M^2) Z
    double fairness_bound = 0.0; // N Z
};

/// Z = 8 ln(MT)/D^2 + M eps_g + 2 pi^2/(3 M^3) + 1 and the two regret
/// bounds built from it.
inline TheoreticalBounds theoretical_bounds(std::span<const double> means, std::size_t m, std::size_t n,
                                            double t_horizon, double eps_g) {
    if (m == 0) throw std::invalid_argument("theoretical_bounds: M must be positive");
    if (eps_g < 0.0) throw std::invalid_argument("theoretical_bounds: eps_g must be nonnegative");
    if (!(t_horizon >= 1.0)) throw std::invalid_argument("theoretical_bounds: T must be >= 1");
    TheoreticalBounds b;
    b.delta_min = min_gap(means);
    const double md = static_cast<double>(m);
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    b.z = 8.0 * std::log(md * t_horizon) / (b.delta_min * b.delta_min) + md * eps_g + 2.0 * pi2 / (3.0 * md * md * md) +
          1.0;
    b.reward_bound = (static_cast<double>(n) + md * md) * b.z;
    b.fairness_bound = static_cast<double>(n) * b.z;
    return b;
}

} // namespace coop_bandit
