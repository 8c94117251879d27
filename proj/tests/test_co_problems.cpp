#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "relu_dp/co_oracles.hpp"
#include "relu_dp/co_problems.hpp"
#include "relu_dp/instance_gen.hpp"

using namespace relu_dp;

namespace {

std::size_t ceil_log2(std::size_t n) { return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1)); }

} // namespace

TEST(Lcs, SmallExamples) {
    EXPECT_EQ(run_lcs({{1, 2, 3, 2}, {2, 3, 2, 1}}), 3);
    EXPECT_EQ(run_lcs({{1, 1}, {2, 2}}), 0);
    EXPECT_EQ(run_lcs({{}, {1}}), 0);
    const auto seq = gen_sequences(8, 7, 3, 5);
    EXPECT_EQ(seq.x, (std::vector<std::int64_t>{2, 2, 3, 2, 3, 3, 1, 2}));
    EXPECT_EQ(seq.y, (std::vector<std::int64_t>{1, 2, 2, 3, 2, 1, 3}));
    EXPECT_EQ(run_lcs(seq), 5);
    EXPECT_EQ(oracle::lcs_length(seq), 5);
}

TEST(Lcs, EqualityGateVanishesOnlyOnMatch) {
    const LcsCell cell(4);
    for (std::int64_t x = -3; x <= 3; ++x) {
        for (std::int64_t y = -3; y <= 3; ++y) {
            const std::vector<double> in{2, 2, 1, static_cast<double>(x), static_cast<double>(y)};
            const auto t = cell.network().evaluate_trace(in);
            const double gate = t[1][LcsCell::gate_plus().index] + t[1][LcsCell::gate_minus().index];
            EXPECT_EQ(gate == 0.0, x == y);
            EXPECT_EQ(t.back()[0], x == y ? 3.0 : 2.0);
        }
    }
    EXPECT_EQ(cell.step(3, 1, 2, 7, 7), 4.0);
    EXPECT_EQ(cell.step(3, 1, 2, 7, 8), 2.0);
}

TEST(Lcs, UnfoldedGridMatchesOracle) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto seq = gen_sequences(5, 6, 3, seed);
        const auto net = unfold_lcs(5, 6);
        std::vector<double> x;
        for (auto v : seq.x) x.push_back(static_cast<double>(v));
        for (auto v : seq.y) x.push_back(static_cast<double>(v));
        EXPECT_EQ(net.evaluate(x)[0], static_cast<double>(oracle::lcs_length(seq))) << seed;
    }
    EXPECT_THROW(unfold_lcs(0, 3), argument_error);
}

TEST(Lcs, FromRealsRejectsFractions) {
    const std::vector<double> ok{1, 2}, bad{1, 2.5};
    EXPECT_NO_THROW(IntSequencePair::from_reals(ok, ok));
    EXPECT_THROW(IntSequencePair::from_reals(ok, bad), validation_error);
}

TEST(BellmanFord, TriangleWithMissingArc) {
    const WeightedGraph g(3, {0, 4, 1, infinity, 0, infinity, infinity, 2, 0});
    const auto r = run_bellman_ford(g);
    EXPECT_EQ(r.distances, (std::vector<double>{0, 3, 1}));
    EXPECT_EQ(r.rounds, 2u);
}

TEST(BellmanFord, UnreachableIsInfinite) {
    const WeightedGraph g(3, {0, 1, infinity, infinity, 0, infinity, infinity, infinity, 0});
    EXPECT_EQ(run_bellman_ford(g).distances, (std::vector<double>{0, 1, infinity}));
}

TEST(BellmanFord, FrozenGeneratedGraph) {
    const auto g = gen_graph({5, 10, 3});
    const auto r = run_bellman_ford(g);
    const std::vector<double> want{0, 3.6189937507523418, 1.9576375476116181, 3.0834378460268197, 3.2878035726352728};
    for (std::size_t v = 0; v < 5; ++v) EXPECT_NEAR(r.distances[v], want[v], 1e-12);
    const auto ref = oracle::bellman_ford(g);
    for (std::size_t v = 0; v < 5; ++v) EXPECT_NEAR(r.distances[v], ref[v], 1e-12);
}

TEST(BellmanFord, CompleteGraphStats) {
    for (std::size_t n : {2u, 3u, 5u, 9u}) {
        const auto s = build_bellman_ford_cell(gen_graph({n, 10, 1})).stats();
        EXPECT_EQ(s.size, n * (n - 1)) << n;
        EXPECT_EQ(s.depth, ceil_log2(n) + 1) << n;
    }
}

TEST(Apsp, SquaringsAndStats) {
    EXPECT_EQ(apsp_squarings(1), 0u);
    EXPECT_EQ(apsp_squarings(2), 0u);
    EXPECT_EQ(apsp_squarings(3), 1u);
    EXPECT_EQ(apsp_squarings(4), 2u);
    EXPECT_EQ(apsp_squarings(5), 2u);
    EXPECT_EQ(apsp_squarings(6), 3u);
    for (std::size_t n : {2u, 4u, 6u}) EXPECT_EQ(build_apsp_cell(n).stats().size, n * n * (n - 1)) << n;
}

TEST(Apsp, MatchesFloydWarshallWithNegativeArcs) {
    const WeightedGraph g(4, {0, 3, infinity, 7, 8, 0, -2, infinity, 5, infinity, 0, 1, 2, infinity, infinity, 0});
    const auto fw = oracle::floyd_warshall(g);
    const auto got = run_apsp(g).distances;
    for (std::size_t k = 0; k < fw.size(); ++k) EXPECT_NEAR(got[k], fw[k], 1e-12);
    EXPECT_EQ(run_apsp(g).distances[0 * 4 + 2], 1.0);
}

TEST(Apsp, ExtraSquaringsAreIdempotent) {
    const auto g = gen_graph({6, 10, 4});
    const auto base = run_apsp(g);
    const auto more = run_apsp(g, base.squarings + 2).distances;
    for (std::size_t k = 0; k < more.size(); ++k) EXPECT_NEAR(more[k], base.distances[k], 1e-12);
}

TEST(Apsp, NegativeCycleOracleThrows) {
    const WeightedGraph g(2, {0, 1, -3, 0});
    EXPECT_THROW(oracle::floyd_warshall(g), infeasible_error);
}

TEST(Csp, FrozenGeneratedGraph) {
    GraphGenConfig cfg;
    cfg.n = 4;
    cfg.max_len = 4;
    cfg.seed = 9;
    cfg.with_resources = true;
    cfg.integral = true;
    const auto g = gen_graph(cfg);
    EXPECT_EQ(g.lengths(), (std::vector<double>{0, 4, 4, 2, 4, 0, 3, 1, 2, 1, 0, 2, 1, 4, 4, 0}));
    using L = std::vector<std::optional<std::int64_t>>;
    EXPECT_EQ(run_csp(g, 8, 0).lengths, (L{0, std::nullopt, std::nullopt, std::nullopt}));
    EXPECT_EQ(run_csp(g, 8, 1).lengths, (L{0, std::nullopt, 6, 2}));
    EXPECT_EQ(run_csp(g, 8, 3).lengths, (L{0, 4, 6, 2}));
    EXPECT_EQ(run_csp(g, 8, 100).lengths, (L{0, 4, 4, 2}));
    for (double R : {0.0, 1.0, 3.0, 100.0}) EXPECT_EQ(run_csp(g, 8, R).lengths, oracle::constrained_shortest_paths(g, R));
}

TEST(Csp, StatsFormula) {
    for (std::size_t n : {2u, 3u, 4u}) {
        for (std::int64_t c : {1, 3, 5}) {
            const auto cs = static_cast<std::size_t>(c);
            const auto s = CspNetwork(n, 0, c, 2.0).network().stats();
            EXPECT_EQ(s.size, 2 * n * (n - 1) * cs + n * (n - 1) * cs * (cs + 1) / 2 + n * n * cs) << n << "," << c;
            EXPECT_EQ(s.depth, 2 * cs + 2 + cs * ceil_log2(n)) << n << "," << c;
        }
    }
}

TEST(Csp, RejectsBadInputs) {
    const WeightedGraph no_res(2, {0, 1, 1, 0});
    EXPECT_THROW(run_csp(no_res, 3, 1), validation_error);
    const WeightedGraph frac(2, {0, 1.5, 1, 0}, 0, std::vector<double>{0, 1, 1, 0});
    EXPECT_THROW(run_csp(frac, 3, 1), validation_error);
    const WeightedGraph zero(2, {0, 0, 1, 0}, 0, std::vector<double>{0, 1, 1, 0});
    EXPECT_THROW(run_csp(zero, 3, 1), validation_error);
    EXPECT_THROW(run_csp(frac, 3, -1), argument_error);
}

TEST(Tsp, FrozenAndSmall) {
    const auto g = gen_graph({5, 10, 3});
    EXPECT_NEAR(run_tsp(g), 13.376502202978847, 1e-12);
    EXPECT_NEAR(run_tsp(g), oracle::tsp_brute_force(g.lengths(), 5), 1e-12);
    const std::vector<double> sq{0, 1, 9, 1, 1, 0, 1, 9, 9, 1, 0, 1, 1, 9, 1, 0};
    EXPECT_EQ(run_tsp(sq, 4), 4.0);
    const std::vector<double> two{0, 3, 5, 0};
    EXPECT_EQ(run_tsp(two, 2), 8.0);
}

TEST(Tsp, SizeFormula) {
    for (std::size_t n : {3u, 4u, 5u, 7u}) {
        const std::size_t m = n - 1;
        const std::size_t want = m * (m - 1) * (std::size_t{1} << (m - 2)) + m - 1;
        EXPECT_EQ(build_tsp_network(n).stats().size, want) << n;
    }
    EXPECT_EQ(build_tsp_network(4).stats().size, 14u);
}

TEST(Tsp, Guards) {
    EXPECT_THROW(build_tsp_network(20), size_guard_error);
    const std::vector<double> d(400, 1.0);
    EXPECT_THROW(run_tsp(d, 20), size_guard_error);
    const std::vector<double> neg{0, -1, 1, 0};
    EXPECT_THROW(run_tsp(neg, 2), validation_error);
}
