#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include <coop_bandit/centralized.hpp>

#include "oracles.hpp"

using namespace coop_bandit;

TEST(SampleMean, Update) {
    CentralState st(1, 2, false);
    for (int i = 0; i < 4; ++i) st.update(0, 1, i % 2 == 0 ? 0.5 + 0.5 : 0.0); // 1,0,1,0
    EXPECT_DOUBLE_EQ(st.mean(0, 1), 0.5);
    const auto next = update_sample_mean(st, 0, 1, 1.0);
    EXPECT_DOUBLE_EQ(next.mean(0, 1), 0.6);
    EXPECT_EQ(next.count(0, 1), 5u);
    EXPECT_EQ(st.count(0, 1), 4u); // by-value update leaves the source alone
}

TEST(SampleMean, HomogeneousSharesRow) {
    CentralState st(3, 4, true);
    st.update(0, 2, 0.3);
    st.update(2, 2, 0.5);
    EXPECT_EQ(st.count(1, 2), 2u);
    EXPECT_DOUBLE_EQ(st.mean(1, 2), 0.4);
}

TEST(CentralUcb, Formula) {
    CentralState st(1, 1, true);
    EXPECT_THROW(st.ucb(0, 0, 5), std::domain_error);
    st.update(0, 0, 0.2);
    st.update(0, 0, 0.4);
    EXPECT_NEAR(st.ucb(0, 0, 10), 0.3 + std::sqrt(2.0 * std::log(10.0) / 2.0), 1e-14);
}

TEST(Hungarian, Trivial) {
    const auto m = hungarian(Matrix::from_rows({{0.7}}));
    EXPECT_EQ(m.assignment, std::vector<std::size_t>{0});
    EXPECT_DOUBLE_EQ(m.total_weight, 0.7);
}

TEST(Hungarian, AntiDiagonal) {
    const auto m = hungarian(Matrix::from_rows({{1, 2}, {2, 1}}));
    EXPECT_EQ(m.assignment, (std::vector<std::size_t>{1, 0}));
    EXPECT_DOUBLE_EQ(m.total_weight, 4.0);
}

TEST(Hungarian, RejectsBadInput) {
    EXPECT_THROW(hungarian(Matrix(3, 2)), std::invalid_argument);
    auto w = Matrix(1, 2);
    w(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(hungarian(w), std::invalid_argument);
}

TEST(Hungarian, MatchesBruteForce) {
    Engine rng(12);
    std::uniform_real_distribution<double> unit(-1.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 6;
        const std::size_t m = 1 + rng() % n;
        Matrix w(m, n);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < n; ++c) w(r, c) = unit(rng);
        const auto got = hungarian(w);
        std::set<std::size_t> cols(got.assignment.begin(), got.assignment.end());
        ASSERT_EQ(cols.size(), m);
        double s = 0.0;
        for (std::size_t r = 0; r < m; ++r) s += w(r, got.assignment[r]);
        EXPECT_NEAR(s, got.total_weight, 1e-12);
        EXPECT_NEAR(got.total_weight, oracle::brute_force_assignment(w), 1e-9);
    }
}

TEST(CentralSweep, CollisionFreeAndCovering) {
    for (std::size_t n = 2; n < 12; ++n)
        for (std::size_t m = 1; m <= n; ++m) {
            std::vector<std::set<std::size_t>> visited(m);
            for (std::size_t t = 1; t <= n; ++t) {
                const auto sel = central_sweep(m, n, t);
                std::set<std::size_t> seen(sel.begin(), sel.end());
                EXPECT_EQ(seen.size(), m);
                for (std::size_t k = 0; k < m; ++k) visited[k].insert(sel[k]);
            }
            for (const auto& v : visited) EXPECT_EQ(v.size(), n);
        }
}

TEST(ChoUcb, AssignsByRank) {
    CentralState st(2, 3, true);
    const std::vector<double> r{0.2, 0.9, 0.5};
    for (std::size_t i = 0; i < 3; ++i) st.update(0, i, r[i]);
    const auto sel = cho_ucb_round(st, 4);
    EXPECT_EQ(sel, (std::vector<std::size_t>{1, 2}));
}

TEST(CheUcb, AgreesWithChoUnderSharedStatistics) {
    // Per-user statistics that are identical across users: any matching of the
    // top-M channels is optimal, so the total UCB must match Cho's.
    Engine rng(1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 3, n = 6;
        CentralState shared(m, n, true), per(m, n, false);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t reps = 1 + rng() % 5;
            for (std::size_t r = 0; r < reps; ++r) {
                const double x = unit(rng);
                shared.update(0, i, x);
                for (std::size_t k = 0; k < m; ++k) per.update(k, i, x);
            }
        }
        const std::size_t t = 50;
        const auto cho = cho_ucb_round(shared, t);
        const auto che = che_ucb_round(per, t);
        double cho_total = 0.0;
        for (auto i : cho) cho_total += shared.ucb(0, i, t);
        EXPECT_NEAR(che.total_weight, cho_total, 1e-12);
    }
}

TEST(CentralBound, Values) {
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    EXPECT_NEAR(centralized_bound(1, 1, 1, 1), 1.0 + pi2 / 3.0, 1e-12);
    EXPECT_NEAR(centralized_bound(1, std::numbers::e, 1, 1), 12.289868133696453, 1e-12);
    EXPECT_NEAR(centralized_bound(40, 1e4, 0.1, 0.5),
                (8.0 * 40 * std::log(1e4) / 0.01 + 40 + pi2 / 3.0 * 40) * 0.5, 1e-8);
    EXPECT_THROW(centralized_bound(1, 10, 0, 1), std::invalid_argument);
}

TEST(CentralBound, MonotoneInHorizon) {
    double prev = 0.0;
    for (double t = 1; t < 1e6; t *= 3) {
        const double b = centralized_bound(10, t, 0.05, 0.4);
        EXPECT_GE(b, prev);
        prev = b;
    }
}

TEST(CentralRun, NeverCollides) {
    const std::size_t m = 4, n = 9;
    const auto mu = random_user_means(m, n, 5);
    HeterogeneousEnvironment env(mu, 20.0, 6);
    CentralState het(m, n, false);
    Environment henv(linear_means(n), 20.0, 7);
    CentralState hom(m, n, true);
    for (std::size_t t = 1; t <= 400; ++t) {
        const auto a = che_ucb_round(het, t).assignment;
        const auto out = env.play_round(a);
        ASSERT_EQ(out.collisions(), 0u);
        for (std::size_t k = 0; k < m; ++k) het.update(k, a[k], out.servers[k].reward);

        const auto b = cho_ucb_round(hom, t);
        const auto out2 = henv.play_round(b);
        ASSERT_EQ(out2.collisions(), 0u);
        for (std::size_t k = 0; k < m; ++k) hom.update(k, b[k], out2.servers[k].reward);
    }
}

TEST(UserMeans, StrictlyInsideUnitInterval) {
    const auto mu = random_user_means(10, 40, 3);
    for (std::size_t k = 0; k < 10; ++k)
        for (std::size_t i = 0; i < 40; ++i) {
            EXPECT_GT(mu(k, i), 0.0);
            EXPECT_LT(mu(k, i), 1.0);
        }
}
