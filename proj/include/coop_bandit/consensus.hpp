#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "graph.hpp"

namespace coop_bandit {

/// Running-consensus statistics of all servers. For every sensor i the
/// network holds two M-vectors: g_hat_i (cumulative observed rate mass) and
/// n_hat_i (selection counts), both mixed through the gossip matrix each round.
class ConsensusState {
public:
    ConsensusState() = default;
    ConsensusState(std::size_t n_servers, std::size_t n_sensors)
        : m_(n_servers), n_(n_sensors), g_(n_servers * n_sensors, 0.0), c_(n_servers * n_sensors, 0.0) {}

    std::size_t n_servers() const noexcept { return m_; }
    std::size_t n_sensors() const noexcept { return n_; }

    double g_hat(std::size_t server, std::size_t sensor) const { return g_[at(server, sensor)]; }
    double n_hat(std::size_t server, std::size_t sensor) const { return c_[at(server, sensor)]; }

    // Column over servers for one sensor.
    std::span<const double> g_column(std::size_t sensor) const { return {g_.data() + sensor * m_, m_}; }
    std::span<const double> n_column(std::size_t sensor) const { return {c_.data() + sensor * m_, m_}; }

    /// g_i <- S (g_i + a_i o p_i), n_i <- S (n_i + p_i) for every sensor i.
    /// `selections[k]` is server k's sensor, `rates[k]` the rate it observed.
    void step(const GossipMatrix& s, std::span<const std::size_t> selections, std::span<const double> rates) {
        if (s.size() != m_ || selections.size() != m_ || rates.size() != m_)
            throw std::invalid_argument("consensus step: dimension mismatch");
        for (std::size_t k = 0; k < m_; ++k) {
            if (selections[k] >= n_) throw std::out_of_range("consensus step: sensor out of range");
            g_[at(k, selections[k])] += rates[k];
            c_[at(k, selections[k])] += 1.0;
        }
        if (s.is_identity()) return;
        scratch_.resize(m_);
        for (std::size_t i = 0; i < n_; ++i) {
            mix(s, std::span<double>(g_.data() + i * m_, m_));
            mix(s, std::span<double>(c_.data() + i * m_, m_));
        }
    }

    /// mu_hat = g_hat / n_hat; undefined until the sensor has reached this server.
    double estimate(std::size_t server, std::size_t sensor) const {
        const double n = n_hat(server, sensor);
        if (!(n > 0.0)) throw std::domain_error("estimate_rate: sensor not yet observed through the network");
        return g_hat(server, sensor) / n;
    }

    // server,sensor,g_hat,n_hat with 1-based ids.
    void write_csv(std::ostream& os) const {
        os << "server,sensor,g_hat,n_hat\n";
        const auto old = os.precision(17);
        for (std::size_t k = 0; k < m_; ++k)
            for (std::size_t i = 0; i < n_; ++i)
                os << k + 1 << ',' << i + 1 << ',' << g_hat(k, i) << ',' << n_hat(k, i) << '\n';
        os.precision(old);
    }

private:
    std::size_t at(std::size_t server, std::size_t sensor) const noexcept { return sensor * m_ + server; }

    void mix(const GossipMatrix& s, std::span<double> v) {
        std::copy(v.begin(), v.end(), scratch_.begin());
        multiply(s.entries(), scratch_, v);
    }

    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::vector<double> g_;
    std::vector<double> c_;
    std::vector<double> scratch_;
};

inline ConsensusState consensus_step(ConsensusState state, const GossipMatrix& s, std::span<const std::size_t> selections,
                                     std::span<const double> rates) {
    state.step(s, selections, rates);
    return state;
}

inline double estimate_rate(const ConsensusState& state, std::size_t server, std::size_t sensor) {
    return state.estimate(server, sensor);
}

} // namespace coop_bandit
