#include <algorithm>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "relu_dp/instance_gen.hpp"

using namespace relu_dp;

TEST(Rng, EngineMatchesStandardReference) {
    std::mt19937_64 ref;
    Rng rng(std::mt19937_64::default_seed);
    std::uint64_t last = 0;
    for (int i = 0; i < 10000; ++i) last = rng.bits();
    EXPECT_EQ(last, 9981545732273789042ULL);
    ref.discard(9999);
    EXPECT_EQ(ref(), 9981545732273789042ULL);
}

TEST(Rng, FrozenDraws) {
    Rng rng(0);
    EXPECT_EQ(rng.bits(), 2947667278772165694ULL);
    EXPECT_EQ(rng.uniform_int(1, 6), 6);
    EXPECT_EQ(rng.u01(), 0.039569025844865657);
}

TEST(Rng, UniformIntCoversRange) {
    Rng rng(5);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) ++hits[static_cast<std::size_t>(rng.uniform_int(0, 6))];
    for (int h : hits) EXPECT_GT(h, 800);
    EXPECT_THROW(rng.uniform_int(3, 2), argument_error);
}

TEST(Rng, ShuffleIsPermutation) {
    Rng rng(8);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    auto w = v;
    rng.shuffle(w);
    EXPECT_NE(v, w);
    std::sort(w.begin(), w.end());
    EXPECT_EQ(v, w);
}

TEST(GenKnapsack, FrozenInstance) {
    const auto inst = gen_knapsack({1, 20});
    EXPECT_EQ(inst.profits(), (std::vector<std::int64_t>{2, 1, 7, 9, 1}));
    const std::vector<double> sizes{0.0704748616080742, 0.4381803415614901, 0.6221199154787053, 0.17461201625088138,
                                    0.32984408341458527};
    EXPECT_EQ(inst.sizes(), sizes);
    EXPECT_EQ(gen_knapsack({42, 37}).profits(), (std::vector<std::int64_t>{25, 1, 2, 2, 7}));
    EXPECT_EQ(gen_knapsack({7, 30}).profits(), (std::vector<std::int64_t>{16, 7, 1, 5, 1}));
}

TEST(GenKnapsack, Invariants) {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const std::int64_t ps = 2 + static_cast<std::int64_t>(seed % 300);
        const auto inst = gen_knapsack({seed, ps});
        EXPECT_EQ(inst.total_profit(), ps);
        EXPECT_GE(inst.size(), 2u);
        const double sum = std::accumulate(inst.sizes().begin(), inst.sizes().end(), 0.0);
        EXPECT_GT(sum, 1.0);
        EXPECT_LT(sum, 2.0);
        for (double s : inst.sizes()) {
            EXPECT_GT(s, 0.0);
            EXPECT_LE(s, 1.0);
        }
    }
}

TEST(GenKnapsack, SingleUnitProfit) {
    const auto inst = gen_knapsack({3, 1});
    EXPECT_EQ(inst.size(), 1u);
    EXPECT_GT(inst.item_size(0), 0.0);
    EXPECT_LT(inst.item_size(0), 1.0);
}

TEST(GenKnapsack, Deterministic) {
    EXPECT_EQ(gen_knapsack({99, 123}).sizes(), gen_knapsack({99, 123}).sizes());
    EXPECT_NE(gen_knapsack({99, 123}).sizes(), gen_knapsack({100, 123}).sizes());
    EXPECT_THROW(gen_knapsack({1, 0}), argument_error);
}

TEST(GenGraph, Shapes) {
    const auto g = gen_graph(4, 3.0, 2, true);
    EXPECT_TRUE(g.has_resources());
    for (std::size_t u = 0; u < 4; ++u) {
        EXPECT_EQ(g.length(u, u), 0.0);
        for (std::size_t v = 0; v < 4; ++v) {
            EXPECT_GE(g.length(u, v), 0.0);
            EXPECT_LT(g.length(u, v), 3.0);
        }
    }
    GraphGenConfig sparse;
    sparse.n = 6;
    sparse.arc_probability = 0.0;
    const auto empty = gen_graph(sparse);
    for (std::size_t u = 0; u < 6; ++u)
        for (std::size_t v = 0; v < 6; ++v) EXPECT_EQ(empty.has_arc(u, v), false);
    EXPECT_THROW(gen_graph(1, 3.0, 0, false), argument_error);
}

TEST(GenSequences, AlphabetAndGuards) {
    const auto p = gen_sequences(30, 20, 4, 11);
    EXPECT_EQ(p.x.size(), 30u);
    EXPECT_EQ(p.y.size(), 20u);
    for (auto v : p.x) {
        EXPECT_GE(v, 1);
        EXPECT_LE(v, 4);
    }
    EXPECT_THROW(gen_sequences(0, 3, 2, 0), argument_error);
    EXPECT_THROW(gen_sequences(3, 3, 0, 0), argument_error);
}
