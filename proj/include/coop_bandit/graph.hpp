#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jacobi.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace coop_bandit {

using Edge = std::pair<std::size_t, std::size_t>; // 0-based, first < second

/// Undirected simple graph over the servers.
class NetworkGraph {
public:
    explicit NetworkGraph(std::size_t n_servers = 0) : n_(n_servers), adj_(n_servers) {}

    NetworkGraph(std::size_t n_servers, const std::vector<Edge>& edges) : NetworkGraph(n_servers) {
        for (auto [a, b] : edges) add_edge(a, b);
    }

    void add_edge(std::size_t a, std::size_t b) {
        if (a >= n_ || b >= n_) throw std::out_of_range("edge endpoint outside server range");
        if (a == b) throw std::invalid_argument("self-loops are not allowed");
        if (a > b) std::swap(a, b);
        if (edges_.insert({a, b}).second) {
            adj_[a].push_back(b);
            adj_[b].push_back(a);
        }
    }

    std::size_t n_servers() const noexcept { return n_; }
    std::size_t n_edges() const noexcept { return edges_.size(); }
    const std::set<Edge>& edges() const noexcept { return edges_; }
    std::size_t degree(std::size_t k) const { return adj_.at(k).size(); }
    bool has_edge(std::size_t a, std::size_t b) const {
        if (a > b) std::swap(a, b);
        return edges_.count({a, b}) > 0;
    }

    bool connected() const {
        if (n_ <= 1) return true;
        std::vector<bool> seen(n_, false);
        std::queue<std::size_t> frontier;
        frontier.push(0);
        seen[0] = true;
        std::size_t reached = 1;
        while (!frontier.empty()) {
            const auto k = frontier.front();
            frontier.pop();
            for (auto j : adj_[k])
                if (!seen[j]) {
                    seen[j] = true;
                    ++reached;
                    frontier.push(j);
                }
        }
        return reached == n_;
    }

private:
    std::size_t n_;
    std::set<Edge> edges_;
    std::vector<std::vector<std::size_t>> adj_;
};

/// Erdos-Renyi G(m, q), resampled until connected.
inline NetworkGraph generate_er(std::size_t m, double q, std::uint64_t seed, std::size_t max_retries = 10000) {
    if (m == 0) throw std::invalid_argument("generate_er: need at least one server");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("generate_er: q must be in [0,1]");
    if (max_retries == 0) throw std::invalid_argument("generate_er: max_retries must be positive");
    Engine rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
        NetworkGraph g(m);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b)
                if (unit(rng) < q) g.add_edge(a, b);
        if (g.connected()) return g;
    }
    throw std::runtime_error("generate_er: no connected graph after " + std::to_string(max_retries) +
                             " samples (q too small for m?)");
}

// Edge-list text: first line M, then one "k k'" pair per line, 1-based.
inline void write_edge_list(std::ostream& os, const NetworkGraph& g) {
    os << g.n_servers() << '\n';
    for (auto [a, b] : g.edges()) os << a + 1 << ' ' << b + 1 << '\n';
}

inline NetworkGraph read_edge_list(std::istream& is) {
    long long m = 0;
    if (!(is >> m) || m <= 0) throw std::runtime_error("edge list: missing or invalid server count");
    NetworkGraph g(static_cast<std::size_t>(m));
    long long a = 0, b = 0;
    while (is >> a >> b) {
        if (a < 1 || b < 1 || a > m || b > m) throw std::runtime_error("edge list: endpoint out of range");
        g.add_edge(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
    }
    if (!is.eof()) throw std::runtime_error("edge list: malformed line");
    return g;
}

inline std::vector<double> spectrum(const Matrix& s) { return jacobi_eigenvalues(s); }

/// Symmetric doubly stochastic matrix supported on the graph, with its
/// spectrum cached in descending order.
class GossipMatrix {
public:
    explicit GossipMatrix(Matrix entries) : entries_(std::move(entries)), eigenvalues_(spectrum(entries_)) {
        identity_ = entries_ == Matrix::identity(entries_.rows());
    }

    const Matrix& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.rows(); }
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
    bool is_identity() const noexcept { return identity_; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return entries_(r, c); }

    // Largest |lambda_x| for x >= 2; zero when M == 1.
    double second_modulus() const noexcept {
        double v = 0.0;
        for (std::size_t x = 1; x < eigenvalues_.size(); ++x) v = std::max(v, std::abs(eigenvalues_[x]));
        return v;
    }

private:
    Matrix entries_;
    std::vector<double> eigenvalues_;
    bool identity_ = false;
};

/// Metropolis-Hastings weights: S_kk' = 1 / (1 + max(d_k, d_k')) on edges,
/// diagonal takes the remainder.
inline GossipMatrix build_gossip(const NetworkGraph& g) {
    if (!g.connected()) throw std::invalid_argument("build_gossip: graph is not connected");
    const std::size_t m = g.n_servers();
    Matrix s(m, m);
    for (auto [a, b] : g.edges()) {
        const double w = 1.0 / (1.0 + static_cast<double>(std::max(g.degree(a), g.degree(b))));
        s(a, b) = w;
        s(b, a) = w;
    }
    for (std::size_t k = 0; k < m; ++k) {
        double off = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            if (j != k) off += s(k, j);
        s(k, k) = 1.0 - off;
    }
    return GossipMatrix(std::move(s));
}

// No links at all: each server keeps its own statistics.
inline GossipMatrix isolated_gossip(std::size_t m) { return GossipMatrix(Matrix::identity(m)); }

/// Graph structure index sqrt(M) * sum_{x>=2} |l_x| / (1 - |l_x|).
inline double epsilon_g(const GossipMatrix& s) {
    const auto& ev = s.eigenvalues();
    double sum = 0.0;
    for (std::size_t x = 1; x < ev.size(); ++x) {
        const double a = std::abs(ev[x]);
        if (a <= 1e-12) continue; // below solver resolution
        if (a >= 1.0 - 1e-12)
            throw std::domain_error("epsilon_g: non-principal eigenvalue of modulus 1 (disconnected graph?)");
        sum += a / (1.0 - a);
    }
    return std::sqrt(static_cast<double>(ev.size())) * sum;
}

} // namespace coop_bandit
