#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "consensus.hpp"

namespace coop_bandit {

enum class PolicyKind {
    dculcb,        // UCB set + LCB pick, cyclic rank
    dcucb,         // h-th largest UCB, cyclic rank
    static_rank,   // DC-ULCB with the INIT rank frozen (no fairness)
    dculcb_nocomm, // DC-ULCB with S = I
    cho,           // centralized, homogeneous users
    che,           // centralized, heterogeneous users
};

inline PolicyKind parse_policy(std::string_view name) {
    if (name == "dculcb") return PolicyKind::dculcb;
    if (name == "dcucb") return PolicyKind::dcucb;
    if (name == "static") return PolicyKind::static_rank;
    if (name == "dculcb-nocomm") return PolicyKind::dculcb_nocomm;
    if (name == "cho") return PolicyKind::cho;
    if (name == "che") return PolicyKind::che;
    throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

inline std::string_view to_string(PolicyKind p) {
    switch (p) {
    case PolicyKind::dculcb: return "dculcb";
    case PolicyKind::dcucb: return "dcucb";
    case PolicyKind::static_rank: return "static";
    case PolicyKind::dculcb_nocomm: return "dculcb-nocomm";
    case PolicyKind::cho: return "cho";
    case PolicyKind::che: return "che";
    }
    return "?";
}

inline bool is_centralized(PolicyKind p) { return p == PolicyKind::cho || p == PolicyKind::che; }

/// sqrt(2 ln(M t) / (M n_hat)). Uses ln(Mt) with the count from the end of
/// the previous round.
inline double confidence_radius(double n_hat, std::size_t m, std::size_t t) {
    if (!(n_hat > 0.0)) throw std::domain_error("confidence_radius: n_hat must be positive");
    if (m == 0 || t == 0) throw std::invalid_argument("confidence_radius: M and t must be positive");
    const double mt = static_cast<double>(m) * static_cast<double>(t);
    return std::sqrt(2.0 * std::log(mt) / (static_cast<double>(m) * n_hat));
}

/// h(t) = ((h0 + t) mod M) + 1, all 1-based.
constexpr std::size_t cycle_rank(std::size_t rank0, std::size_t t, std::size_t m) { return ((rank0 + t) % m) + 1; }

/// Exploration sweep for t <= N: sensor ((h0 + t) mod N) + 1, returned 0-based.
constexpr std::size_t sweep_sensor(std::size_t rank0, std::size_t t, std::size_t n) { return (rank0 + t) % n; }

// Sensor indices ordered by UCB descending; equal UCBs keep lower index first.
inline std::vector<std::size_t> ucb_order(std::span<const double> ucb) {
    std::vector<std::size_t> order(ucb.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ucb[a] > ucb[b]; });
    return order;
}

/// Among the h largest UCBs, the sensor with the smallest LCB (lowest index on ties).
inline std::size_t pick_ulcb(std::span<const double> ucb, std::span<const double> lcb, std::size_t h) {
    if (h == 0 || h > ucb.size() || lcb.size() != ucb.size())
        throw std::invalid_argument("pick_ulcb: rank out of range");
    const auto order = ucb_order(ucb);
    std::size_t best = order[0];
    for (std::size_t j = 1; j < h; ++j) {
        const std::size_t i = order[j];
        if (lcb[i] < lcb[best] || (lcb[i] == lcb[best] && i < best)) best = i;
    }
    return best;
}

/// The sensor with the h-th largest UCB.
inline std::size_t pick_ucb(std::span<const double> ucb, std::size_t h) {
    if (h == 0 || h > ucb.size()) throw std::invalid_argument("pick_ucb: rank out of range");
    return ucb_order(ucb)[h - 1];
}

/// One server's knobs after INIT.
struct ServerPolicyState {
    std::size_t server = 0; // 0-based row in the consensus state
    std::size_t rank0 = 1;  // h0, 1-based
    std::size_t m_known = 1;
    std::size_t n_sensors = 0;
};

// UCB and LCB of every sensor for one server at round t (> N).
struct ConfidenceBounds {
    std::vector<double> upper;
    std::vector<double> lower;
};

inline ConfidenceBounds confidence_bounds(const ConsensusState& cs, const ServerPolicyState& sp, std::size_t t) {
    ConfidenceBounds b;
    b.upper.resize(sp.n_sensors);
    b.lower.resize(sp.n_sensors);
    for (std::size_t i = 0; i < sp.n_sensors; ++i) {
        const double mu = cs.estimate(sp.server, i);
        const double c = confidence_radius(cs.n_hat(sp.server, i), sp.m_known, t);
        b.upper[i] = mu + c;
        b.lower[i] = mu - c;
    }
    return b;
}

inline double ucb(const ConsensusState& cs, const ServerPolicyState& sp, std::size_t sensor, std::size_t t) {
    return cs.estimate(sp.server, sensor) + confidence_radius(cs.n_hat(sp.server, sensor), sp.m_known, t);
}

inline double lcb(const ConsensusState& cs, const ServerPolicyState& sp, std::size_t sensor, std::size_t t) {
    return cs.estimate(sp.server, sensor) - confidence_radius(cs.n_hat(sp.server, sensor), sp.m_known, t);
}

enum class SelectionRule { ulcb, ucb };

/// Rank the server plays at round t: cyclic when fair, frozen h0 otherwise.
inline std::size_t effective_rank(const ServerPolicyState& sp, std::size_t t, bool fair) {
    return fair ? cycle_rank(sp.rank0, t, sp.m_known) : sp.rank0;
}

/// Generic distributed selection (0-based sensor). The consensus state must
/// be current through round t - 1.
inline std::size_t select_distributed(const ConsensusState& cs, const ServerPolicyState& sp, std::size_t t,
                                      SelectionRule rule, bool fair, const ConfidenceBounds* precomputed = nullptr) {
    if (t <= sp.n_sensors) return sweep_sensor(sp.rank0, t, sp.n_sensors);
    const std::size_t h = effective_rank(sp, t, fair);
    ConfidenceBounds local;
    if (!precomputed) {
        local = confidence_bounds(cs, sp, t);
        precomputed = &local;
    }
    return rule == SelectionRule::ulcb ? pick_ulcb(precomputed->upper, precomputed->lower, h)
                                       : pick_ucb(precomputed->upper, h);
}

inline std::size_t select_dculcb(const ConsensusState& cs, const ServerPolicyState& sp, std::size_t t) {
    return select_distributed(cs, sp, t, SelectionRule::ulcb, true);
}

inline std::size_t select_dcucb(const ConsensusState& cs, const ServerPolicyState& sp, std::size_t t) {
    return select_distributed(cs, sp, t, SelectionRule::ucb, true);
}

inline std::size_t select_static(const ConsensusState& cs, const ServerPolicyState& sp, std::size_t t) {
    return select_distributed(cs, sp, t, SelectionRule::ulcb, false);
}

} // namespace coop_bandit
