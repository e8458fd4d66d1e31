#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include <coop_bandit/policy.hpp>
#include <coop_bandit/rng.hpp>

using namespace coop_bandit;

namespace {

// One isolated server that has sampled every sensor `reps` times with a
// constant rate, so mu_hat is exact and n_hat = reps.
ConsensusState exact_state(const std::vector<double>& mu, std::size_t reps) {
    ConsensusState cs(1, mu.size());
    const auto s = isolated_gossip(1);
    for (std::size_t r = 0; r < reps; ++r)
        for (std::size_t i = 0; i < mu.size(); ++i)
            cs.step(s, std::vector<std::size_t>{i}, std::vector<double>{mu[i]});
    return cs;
}

} // namespace

TEST(Radius, Values) {
    EXPECT_NEAR(confidence_radius(5.0, 10, 100), 0.5256521769756931, 1e-14);
    // M t = 1 gives ln 1 = 0.
    EXPECT_EQ(confidence_radius(3.0, 1, 1), 0.0);
    EXPECT_THROW(confidence_radius(0.0, 10, 100), std::domain_error);
}

TEST(Radius, ShrinksWithCount) {
    double prev = std::numeric_limits<double>::infinity();
    for (double n = 0.5; n < 1000; n *= 2) {
        const double c = confidence_radius(n, 10, 5000);
        EXPECT_LT(c, prev);
        prev = c;
    }
}

TEST(Bounds, WidthIsTwiceRadius) {
    const std::vector<double> mu{0.1, 0.4, 0.6, 0.9};
    const auto cs = exact_state(mu, 7);
    const ServerPolicyState sp{0, 1, 1, 4};
    const auto b = confidence_bounds(cs, sp, 50);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(b.upper[i] - b.lower[i], 2.0 * confidence_radius(7.0, 1, 50), 1e-12);
        EXPECT_NEAR(0.5 * (b.upper[i] + b.lower[i]), mu[i], 1e-12);
        EXPECT_EQ(ucb(cs, sp, i, 50), b.upper[i]);
        EXPECT_EQ(lcb(cs, sp, i, 50), b.lower[i]);
    }
}

TEST(CycleRank, Examples) {
    EXPECT_EQ(cycle_rank(10, 10, 10), 1u);
    EXPECT_EQ(cycle_rank(2, 1, 3), 1u);
    EXPECT_EQ(cycle_rank(2, 2, 3), 2u);
    EXPECT_EQ(cycle_rank(2, 3, 3), 3u);
}

TEST(CycleRank, PermutationEveryRound) {
    for (std::size_t m = 1; m <= 12; ++m)
        for (std::size_t t = 1; t <= 50; ++t) {
            std::set<std::size_t> seen;
            for (std::size_t h0 = 1; h0 <= m; ++h0) {
                const auto h = cycle_rank(h0, t, m);
                EXPECT_GE(h, 1u);
                EXPECT_LE(h, m);
                seen.insert(h);
            }
            EXPECT_EQ(seen.size(), m);
        }
}

TEST(Sweep, CollisionFreeForDistinctRanks) {
    for (std::size_t n = 2; n <= 15; ++n)
        for (std::size_t m = 1; m < n; ++m)
            for (std::size_t t = 1; t <= n; ++t) {
                std::set<std::size_t> seen;
                for (std::size_t h0 = 1; h0 <= m; ++h0) seen.insert(sweep_sensor(h0, t, n));
                EXPECT_EQ(seen.size(), m);
            }
}

TEST(Sweep, EachServerVisitsEverySensorOnce) {
    const std::size_t n = 9;
    for (std::size_t h0 = 1; h0 <= 4; ++h0) {
        std::set<std::size_t> seen;
        for (std::size_t t = 1; t <= n; ++t) seen.insert(sweep_sensor(h0, t, n));
        EXPECT_EQ(seen.size(), n);
    }
}

TEST(Pick, WorkedExample) {
    const std::vector<double> u{0.9, 0.8, 0.7}, l{0.5, 0.6, 0.4};
    EXPECT_EQ(pick_ulcb(u, l, 2), 0u);
    EXPECT_EQ(pick_ucb(u, 2), 1u);
    EXPECT_EQ(pick_ulcb(u, l, 1), 0u);
    EXPECT_EQ(pick_ulcb(u, l, 3), 2u);
}

TEST(Pick, TiesPreferLowerIndex) {
    const std::vector<double> u{0.5, 0.7, 0.7, 0.5}, l{0.1, 0.2, 0.2, 0.1};
    EXPECT_EQ(pick_ucb(u, 1), 1u);
    EXPECT_EQ(pick_ucb(u, 2), 2u);
    EXPECT_EQ(pick_ucb(u, 3), 0u);
    EXPECT_EQ(pick_ulcb(u, l, 2), 1u);
    EXPECT_EQ(pick_ulcb(u, l, 4), 0u);
}

TEST(Pick, RankOutOfRange) {
    const std::vector<double> u{0.1, 0.2};
    EXPECT_THROW(pick_ucb(u, 0), std::invalid_argument);
    EXPECT_THROW(pick_ucb(u, 3), std::invalid_argument);
    EXPECT_THROW(pick_ulcb(u, u, 3), std::invalid_argument);
}

TEST(Pick, LabelEquivariance) {
    Engine rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 8;
        std::vector<double> u(n), l(n);
        for (std::size_t i = 0; i < n; ++i) {
            l[i] = unit(rng);
            u[i] = l[i] + unit(rng);
        }
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> pu(n), pl(n);
        for (std::size_t i = 0; i < n; ++i) {
            pu[perm[i]] = u[i];
            pl[perm[i]] = l[i];
        }
        for (std::size_t h = 1; h <= n; ++h) {
            EXPECT_EQ(pick_ucb(pu, h), perm[pick_ucb(u, h)]);
            EXPECT_EQ(pick_ulcb(pu, pl, h), perm[pick_ulcb(u, l, h)]);
        }
    }
}

TEST(Pick, UlcbChoosesWithinTopSet) {
    Engine rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> u(10), l(10);
        for (std::size_t i = 0; i < 10; ++i) {
            l[i] = unit(rng);
            u[i] = l[i] + unit(rng);
        }
        const std::size_t h = 1 + static_cast<std::size_t>(trial) % 10;
        const auto pick = pick_ulcb(u, l, h);
        const auto order = ucb_order(u);
        const auto top = std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(h));
        EXPECT_NE(std::find(top.begin(), top.end(), pick), top.end());
        for (std::size_t i : top) EXPECT_LE(l[pick], l[i]);
    }
}

TEST(Select, ConvergedEstimatesPickTrueRankOrder) {
    // Oracle: sort the true means descending and index by h.
    const std::vector<double> mu{0.35, 0.8, 0.1, 0.6, 0.5, 0.95};
    const auto cs = exact_state(mu, 200000); // radius << smallest gap
    std::vector<std::size_t> sorted(mu.size());
    std::iota(sorted.begin(), sorted.end(), 0);
    std::sort(sorted.begin(), sorted.end(), [&](auto a, auto b) { return mu[a] > mu[b]; });
    for (std::size_t h0 = 1; h0 <= 4; ++h0) {
        const ServerPolicyState sp{0, h0, 4, mu.size()};
        for (std::size_t t = 7; t < 30; ++t) {
            const auto h = cycle_rank(h0, t, 4);
            EXPECT_EQ(select_dcucb(cs, sp, t), sorted[h - 1]);
            EXPECT_EQ(select_dculcb(cs, sp, t), sorted[h - 1]);
            EXPECT_EQ(select_static(cs, sp, t), sorted[h0 - 1]);
        }
    }
}

TEST(Select, SweepPhaseIgnoresStatistics) {
    const ConsensusState cs(1, 5); // all-zero statistics would throw if consulted
    const ServerPolicyState sp{0, 2, 3, 5};
    for (std::size_t t = 1; t <= 5; ++t) EXPECT_EQ(select_dculcb(cs, sp, t), (2 + t) % 5);
}

TEST(Select, StaticRankIsFrozen) {
    const ServerPolicyState sp{0, 3, 5, 10};
    for (std::size_t t = 11; t < 40; ++t) {
        EXPECT_EQ(effective_rank(sp, t, false), 3u);
        EXPECT_EQ(effective_rank(sp, t, true), cycle_rank(3, t, 5));
    }
}

TEST(PolicyKind, NamesRoundTrip) {
    for (auto p : {PolicyKind::dculcb, PolicyKind::dcucb, PolicyKind::static_rank, PolicyKind::dculcb_nocomm,
                   PolicyKind::cho, PolicyKind::che})
        EXPECT_EQ(parse_policy(to_string(p)), p);
    EXPECT_THROW(parse_policy("ucb1"), std::invalid_argument);
}
