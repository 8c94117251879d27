#include <vector>

#include <gtest/gtest.h>

#include "relu_dp/instance_gen.hpp"
#include "relu_dp/knapsack.hpp"

using namespace relu_dp;

TEST(Instance, Validation) {
    EXPECT_THROW(KnapsackInstance({}, {}), validation_error);
    EXPECT_THROW(KnapsackInstance({1, 2}, {0.5}), validation_error);
    EXPECT_THROW(KnapsackInstance({0}, {0.5}), validation_error);
    EXPECT_THROW(KnapsackInstance({1}, {0.0}), validation_error);
    EXPECT_THROW(KnapsackInstance({1}, {1.5}), validation_error);
    EXPECT_NO_THROW(KnapsackInstance({1}, {1.0}));
    const std::vector<double> bad{2.5, 3.0};
    EXPECT_THROW(KnapsackInstance::from_real_profits(bad, {0.5, 0.5}), validation_error);
    const std::vector<double> good{2.0, 3.0};
    EXPECT_EQ(KnapsackInstance::from_real_profits(good, {0.5, 0.5}).total_profit(), 5);
}

TEST(DpTableOracle, SingleItem) {
    const auto t = dp_table(KnapsackInstance({1}, {0.5}), 1);
    EXPECT_EQ(t.value(1, 1), 0.5);
    EXPECT_EQ(t.value(1, 0), 2.0);
    EXPECT_EQ(t.value(0, 1), 0.0);
    EXPECT_EQ(t.value(-3, 0), 0.0);
}

TEST(DpTableOracle, ForcedSums) {
    const auto t = dp_table(KnapsackInstance({1, 1}, {0.6, 0.6}), 2);
    EXPECT_EQ(t.value(1, 2), 0.6);
    EXPECT_EQ(t.value(2, 2), 1.2);
    EXPECT_EQ(optimum_value(t), 1);
}

TEST(DpTableOracle, FrozenColumn) {
    const KnapsackInstance inst({5, 7, 3, 9, 4}, {0.3, 0.45, 0.2, 0.6, 0.25});
    const auto t = dp_table(inst, 28);
    const std::vector<double> want{0.2, 0.2, 0.2, 0.25, 0.3, 0.45, 0.45, 0.5, 0.55, 0.65, 0.7, 0.75, 0.85, 0.9,
                                   0.95, 1.0, 1.1, 1.15, 1.2, 1.3, 1.35, 1.5, 1.5, 1.55, 1.6, 1.8, 1.8, 1.8};
    for (std::int64_t p = 1; p <= 28; ++p) EXPECT_NEAR(t.value(p, 5), want[static_cast<std::size_t>(p - 1)], 1e-12) << p;
    EXPECT_EQ(optimum_value(t), 16);
}

TEST(OptimumValue, Examples) {
    EXPECT_EQ(optimum_value(dp_table(KnapsackInstance({3}, {1.0}), 3)), 3);
    DpTable nothing(4, 2);
    EXPECT_EQ(optimum_value(nothing), 0);
}

TEST(BruteForce, Examples) {
    const auto s = brute_force(KnapsackInstance({2, 3, 4}, {0.5, 0.5, 0.5}));
    EXPECT_EQ(s.value, 7.0);
    EXPECT_EQ(s.items, (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(brute_force(KnapsackInstance({4}, {1.0})).items, (std::vector<std::size_t>{0}));
    EXPECT_EQ(brute_force(KnapsackInstance({5, 5}, {0.6, 0.6})).value, 5.0);
    // tie between {0} and {1}: lexicographically smallest wins
    EXPECT_EQ(brute_force(KnapsackInstance({5, 5}, {0.6, 0.6})).items, (std::vector<std::size_t>{0}));
}

TEST(BruteForce, FrozenGeneratedInstances) {
    struct Case {
        std::uint64_t seed;
        std::int64_t p_star;
        double value;
        std::vector<std::size_t> items;
    };
    for (const Case& c : {Case{1, 20, 18, {0, 2, 3}}, Case{42, 37, 34, {0, 2, 4}}, Case{7, 30, 28, {0, 1, 3}}}) {
        const auto inst = gen_knapsack({c.seed, c.p_star});
        const auto s = brute_force(inst);
        EXPECT_EQ(s.value, c.value) << c.seed;
        EXPECT_EQ(s.items, c.items) << c.seed;
        EXPECT_EQ(optimum_value(dp_table(inst, c.p_star)), static_cast<std::int64_t>(c.value)) << c.seed;
    }
}

TEST(BruteForce, SizeGuard) {
    const KnapsackInstance big(std::vector<std::int64_t>(26, 1), std::vector<double>(26, 0.01));
    EXPECT_THROW(brute_force(big), size_guard_error);
}

TEST(Backtrack, Examples) {
    const KnapsackInstance one({1}, {0.5});
    EXPECT_EQ(backtrack(dp_table(one, 1), one, 1).items, (std::vector<std::size_t>{0}));
    const KnapsackInstance two({1, 1}, {0.6, 0.6});
    const auto s = backtrack(dp_table(two, 2), two, 1);
    EXPECT_EQ(s.items.size(), 1u);
    EXPECT_EQ(s.size, 0.6);
    EXPECT_THROW(backtrack(dp_table(two, 2), two, 2), infeasible_error);
}

TEST(Backtrack, RandomInstancesFeasible) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = gen_knapsack({seed, 25});
        const auto t = dp_table(inst, 25);
        const auto best = optimum_value(t);
        ASSERT_GT(best, 0);
        const auto s = backtrack(t, inst, best);
        EXPECT_GE(s.profit, best);
        EXPECT_LE(s.size, 1.0 + capacity_tolerance);
    }
}

TEST(RoundedRecursion, SelectionIndices) {
    // P = 5, D_old = 5 (d = 1), D_new = 10 (d = 2), item profit 10
    for (std::int64_t p = 1; p <= 5; ++p) {
        const auto sel = selection_indices(5, 5, 10, 10, p);
        EXPECT_EQ(sel.without_item, 2 * p);
        EXPECT_LE(sel.with_item, 0);
    }
    EXPECT_EQ(ceil_div(7, 2), 4);
    EXPECT_EQ(ceil_div(-7, 2), -3);
    EXPECT_EQ(ceil_div(6, 3), 2);
    EXPECT_EQ(scaled_granularity(5, 3), 5);
    EXPECT_EQ(scaled_granularity(5, 12), 12);
}

TEST(RoundedRecursion, SingleItemExample) {
    const auto t = fptas_reference(KnapsackInstance({10}, {0.4}), 5);
    EXPECT_EQ(t.granularity(1), 2.0);
    for (std::int64_t p = 1; p <= 5; ++p) EXPECT_EQ(t.value(p, 1), 0.4);
    const auto best = fptas_optimum(t);
    EXPECT_EQ(best.level, 5);
    EXPECT_EQ(best.value(), 10.0);
    EXPECT_EQ(backtrack_fptas(t, KnapsackInstance({10}, {0.4}), 5).items, (std::vector<std::size_t>{0}));
}

TEST(RoundedRecursion, FrozenLevels) {
    const KnapsackInstance inst({5, 7, 3, 9, 4}, {0.3, 0.45, 0.2, 0.6, 0.25});
    struct Case {
        std::int64_t P, level;
        double value;
    };
    for (const Case& c : {Case{1, 0, 0.0}, Case{2, 0, 0.0}, Case{3, 1, 28.0 / 3.0}, Case{5, 2, 11.2}, Case{10, 5, 14.0},
                          Case{28, 16, 16.0}}) {
        const auto best = fptas_optimum(fptas_reference(inst, c.P));
        EXPECT_EQ(best.level, c.level) << c.P;
        EXPECT_NEAR(best.value(), c.value, 1e-12) << c.P;
    }
}

TEST(RoundedRecursion, MatchesExactTableWhenResolutionCoversProfits) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto inst = gen_knapsack({seed, 20});
        const auto r = fptas_reference(inst, 24);
        const auto d = dp_table(inst, 24);
        for (std::size_t i = 0; i <= inst.size(); ++i) {
            for (std::int64_t p = 1; p <= 24; ++p) EXPECT_NEAR(r.value(p, i), d.value(p, i), 1e-12);
        }
    }
}
