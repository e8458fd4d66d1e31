#include <cmath>

#include <gtest/gtest.h>

#include <coop_bandit/consensus.hpp>
#include <coop_bandit/env.hpp>

#include "oracles.hpp"

using namespace coop_bandit;

TEST(Consensus, IdentityCountsLocally) {
    ConsensusState cs(3, 4);
    const auto s = isolated_gossip(3);
    const std::vector<std::size_t> sel{0, 0, 3};
    const std::vector<double> a{0.2, 0.4, 0.9};
    cs.step(s, sel, a);
    cs.step(s, sel, a);
    EXPECT_EQ(cs.n_hat(0, 0), 2.0);
    EXPECT_EQ(cs.n_hat(1, 0), 2.0);
    EXPECT_EQ(cs.n_hat(2, 3), 2.0);
    EXPECT_EQ(cs.n_hat(2, 0), 0.0);
    EXPECT_NEAR(cs.estimate(2, 3), 0.9, 1e-15);
}

TEST(Consensus, TwoServerCompleteGraphByHand) {
    ConsensusState cs(2, 3);
    const auto s = build_gossip(NetworkGraph(2, {{0, 1}}));
    const std::vector<std::size_t> sel{1, 2};
    const std::vector<double> a{0.8, 0.3};
    cs.step(s, sel, a);
    EXPECT_NEAR(cs.g_hat(0, 1), 0.4, 1e-15);
    EXPECT_NEAR(cs.g_hat(1, 1), 0.4, 1e-15);
    EXPECT_NEAR(cs.n_hat(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(cs.n_hat(1, 1), 0.5, 1e-15);
    EXPECT_NEAR(estimate_rate(cs, 0, 1), 0.8, 1e-15);
    EXPECT_NEAR(estimate_rate(cs, 1, 1), 0.8, 1e-15);
}

TEST(Consensus, EstimateEdgeCases) {
    ConsensusState cs(2, 2);
    EXPECT_THROW(cs.estimate(0, 0), std::domain_error);
    cs.step(isolated_gossip(2), std::vector<std::size_t>{0, 1}, std::vector<double>{0.0, 0.5});
    EXPECT_EQ(cs.estimate(0, 0), 0.0);
}

TEST(Consensus, DimensionMismatch) {
    ConsensusState cs(2, 2);
    EXPECT_THROW(cs.step(isolated_gossip(3), std::vector<std::size_t>{0, 1, 0}, std::vector<double>{0, 0, 0}),
                 std::invalid_argument);
    EXPECT_THROW(cs.step(isolated_gossip(2), std::vector<std::size_t>{0}, std::vector<double>{0}), std::invalid_argument);
}

TEST(Consensus, AgreesWithMatrixFormOracle) {
    const std::size_t m = 6, n = 5;
    const auto s = build_gossip(generate_er(m, 0.4, 3));
    ConsensusState cs(m, n);
    Matrix g(m, n), c(m, n);
    Engine rng(4);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 300; ++t) {
        std::vector<std::size_t> sel(m);
        std::vector<double> a(m);
        Matrix inc_g(m, n), inc_c(m, n);
        for (std::size_t k = 0; k < m; ++k) {
            sel[k] = pick(rng);
            a[k] = unit(rng);
            inc_g(k, sel[k]) = a[k];
            inc_c(k, sel[k]) = 1.0;
        }
        cs.step(s, sel, a);
        g = oracle::consensus_matrix_step(s.entries(), g, inc_g);
        c = oracle::consensus_matrix_step(s.entries(), c, inc_c);
    }
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(cs.g_hat(k, i), g(k, i), 1e-10);
            EXPECT_NEAR(cs.n_hat(k, i), c(k, i), 1e-10);
        }
}

TEST(Consensus, ConservationAndNonnegativity) {
    const std::size_t m = 8, n = 6;
    const auto s = build_gossip(generate_er(m, 0.5, 9));
    ConsensusState cs(m, n);
    std::vector<double> total_sel(n, 0.0), total_rate(n, 0.0);
    Engine rng(2);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        std::vector<std::size_t> sel(m);
        std::vector<double> a(m);
        for (std::size_t k = 0; k < m; ++k) {
            sel[k] = pick(rng);
            a[k] = unit(rng);
            total_sel[sel[k]] += 1.0;
            total_rate[sel[k]] += a[k];
        }
        cs.step(s, sel, a);
        for (std::size_t i = 0; i < n; ++i) {
            double sn = 0.0, sg = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                ASSERT_GE(cs.n_hat(k, i), 0.0);
                ASSERT_GE(cs.g_hat(k, i), 0.0);
                sn += cs.n_hat(k, i);
                sg += cs.g_hat(k, i);
            }
            ASSERT_NEAR(sn, total_sel[i], 1e-8 * std::max(1.0, total_sel[i]));
            ASSERT_NEAR(sg, total_rate[i], 1e-8 * std::max(1.0, total_rate[i]));
        }
    }
}

TEST(Consensus, LagBoundedByGraphIndex) {
    const std::size_t m = 10, n = 5;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = build_gossip(generate_er(m, 0.5, seed));
        const double eps = epsilon_g(s);
        ConsensusState cs(m, n);
        std::vector<double> total(n, 0.0);
        Engine rng(seed + 50);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (int t = 0; t < 500; ++t) {
            std::vector<std::size_t> sel(m);
            for (auto& x : sel) {
                x = pick(rng);
                total[x] += 1.0;
            }
            cs.step(s, sel, std::vector<double>(m, 0.5));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < m; ++k)
                    ASSERT_LE(std::abs(cs.n_hat(k, i) - total[i] / m), eps + 1e-9);
        }
    }
}

TEST(Consensus, EstimateIsUnbiased) {
    // Average mu_hat of one (server, sensor) cell at a fixed round over many
    // independent runs; servers pick uniformly at random.
    const std::size_t m = 4, n = 3, rounds = 20, runs = 2000;
    const auto s = build_gossip(NetworkGraph(4, {{0, 1}, {1, 2}, {2, 3}}));
    const std::vector<double> mu{0.3, 0.5, 0.7};
    std::vector<double> samples;
    for (std::size_t r = 0; r < runs; ++r) {
        Environment env(mu, 20.0, 9000 + r);
        Engine rng(r);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        ConsensusState cs(m, n);
        for (std::size_t t = 0; t < rounds; ++t) {
            std::vector<std::size_t> sel(m);
            for (auto& x : sel) x = pick(rng);
            const auto out = env.play_round(sel);
            std::vector<double> a(m);
            for (std::size_t k = 0; k < m; ++k) a[k] = out.servers[k].observed;
            cs.step(s, sel, a);
        }
        if (cs.n_hat(3, 0) > 0.0) samples.push_back(cs.estimate(3, 0));
    }
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double x : samples) var += (x - mean) * (x - mean);
    const double se = std::sqrt(var / static_cast<double>(samples.size() - 1) / static_cast<double>(samples.size()));
    EXPECT_NEAR(mean, 0.3, 3.0 * se);
}

TEST(Consensus, CsvSnapshot) {
    ConsensusState cs(1, 2);
    cs.step(isolated_gossip(1), std::vector<std::size_t>{1}, std::vector<double>{0.5});
    std::ostringstream os;
    cs.write_csv(os);
    EXPECT_EQ(os.str(), "server,sensor,g_hat,n_hat\n1,1,0,0\n1,2,0.5,1\n");
}
