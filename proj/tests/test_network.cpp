#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "relu_dp/builder.hpp"
#include "relu_dp/gadgets.hpp"
#include "relu_dp/network.hpp"

using namespace relu_dp;

namespace {

// One hidden unit max{0, x - 2} feeding the output with weight 1.
ReluNetwork single_unit() {
    const std::vector<Arc> arcs{{{0, 0}, {1, 0}, 1.0}, {{1, 0}, {2, 0}, 1.0}};
    return ReluNetwork({1, 1, 1}, arcs, {{}, {-2.0}, {0.0}});
}

} // namespace

TEST(Network, RectifierKillsNegativePreActivation) {
    const auto net = single_unit();
    EXPECT_EQ(net.evaluate(std::vector{1.5})[0], 0.0);
    EXPECT_EQ(net.evaluate(std::vector{3.5})[0], 1.5);
}

TEST(Network, OutputLayerIsLinear) {
    const std::vector<Arc> arcs{{{0, 0}, {1, 0}, -3.0}};
    const ReluNetwork net({1, 1}, arcs, {{}, {1.0}});
    EXPECT_EQ(net.evaluate(std::vector{2.0})[0], -5.0);
    const auto s = net.stats();
    EXPECT_EQ(s.depth, 1u);
    EXPECT_EQ(s.width, 0u);
    EXPECT_EQ(s.size, 0u);
}

TEST(Network, StatsFollowLayerSizes) {
    const auto s = min2_gadget().stats();
    EXPECT_EQ(s, (NetworkStats{2, 1, 1, 4}));
}

TEST(Network, InputShapeChecked) {
    const auto net = single_unit();
    EXPECT_THROW(net.evaluate(std::vector{1.0, 2.0}), input_shape_error);
    EXPECT_THROW(net.evaluate(std::vector<double>{}), input_shape_error);
}

TEST(Network, NonFiniteIntermediateRaises) {
    const std::vector<Arc> arcs{{{0, 0}, {1, 0}, 1e300}, {{1, 0}, {2, 0}, 1e300}};
    const ReluNetwork net({1, 1, 1}, arcs, {});
    EXPECT_THROW(net.evaluate(std::vector{1e300}), numeric_overflow_error);
    EXPECT_THROW(net.evaluate(std::vector{std::numeric_limits<double>::quiet_NaN()}), numeric_overflow_error);
}

TEST(Network, ConstructionRejectsBackwardArcs) {
    const std::vector<Arc> back{{{1, 0}, {1, 0}, 1.0}};
    EXPECT_THROW(ReluNetwork({1, 1, 1}, back, {}), construction_error);
    const std::vector<Arc> dangling{{{0, 3}, {1, 0}, 1.0}};
    EXPECT_THROW(ReluNetwork({1, 1, 1}, dangling, {}), construction_error);
    EXPECT_THROW(ReluNetwork({1, 1, 1}, {}, {{}, {1.0, 2.0}}), construction_error);
    EXPECT_THROW(ReluNetwork({1}, {}, {}), construction_error);
}

TEST(Network, SkipArcsReachOutput) {
    const auto net = min2_gadget();
    ASSERT_TRUE(net.find_arc({0, 1}, {2, 0}).has_value());
    EXPECT_EQ(net.arc(*net.find_arc({0, 1}, {2, 0})).weight, 1.0);
    EXPECT_EQ(net.arc(*net.find_arc({1, 0}, {2, 0})).weight, -1.0);
    EXPECT_EQ(net.arc(*net.find_arc({0, 0}, {1, 0})).weight, -1.0);
    EXPECT_EQ(net.arc(*net.find_arc({0, 1}, {1, 0})).weight, 1.0);
    EXPECT_EQ(net.longest_path(), 2u);
}

TEST(Network, ModifiedCopiesLeaveOriginalIntact) {
    const auto net = single_unit();
    const auto heavier = net.with_arc_weight(0, 2.0);
    const auto shifted = net.with_bias({1, 0}, 0.0);
    EXPECT_EQ(net.evaluate(std::vector{3.0})[0], 1.0);
    EXPECT_EQ(heavier.evaluate(std::vector{3.0})[0], 4.0);
    EXPECT_EQ(shifted.evaluate(std::vector{3.0})[0], 3.0);
    EXPECT_FALSE(net == heavier);
    EXPECT_TRUE(net == single_unit());
}

TEST(Network, TraceHoldsEveryLayer) {
    const auto trace = min2_gadget().evaluate_trace(std::vector{3.0, 5.0});
    ASSERT_EQ(trace.size(), 3u);
    EXPECT_EQ(trace[0], (std::vector{3.0, 5.0}));
    EXPECT_EQ(trace[1], (std::vector{2.0}));
    EXPECT_EQ(trace[2], (std::vector{3.0}));
}

TEST(Network, EmptyNetworkCannotEvaluate) {
    const ReluNetwork empty;
    EXPECT_THROW(empty.evaluate(std::vector<double>{}), construction_error);
}

TEST(Builder, AutoPlacementAndPadding) {
    NetworkBuilder b(2);
    const auto h = b.relu(b.input(0) - b.input(1));
    const auto g = b.relu(h + 1.0);
    EXPECT_EQ(h.max_layer(), 1u);
    EXPECT_EQ(g.max_layer(), 2u);
    EXPECT_THROW(b.relu(g, 2), construction_error);
    b.add_output(g + b.input(1));
    const auto net = std::move(b).build(5);
    EXPECT_EQ(net.layer_sizes(), (std::vector<std::size_t>{2, 1, 1, 0, 0, 1}));
    EXPECT_EQ(net.evaluate(std::vector{4.0, 1.0})[0], 5.0);
}

TEST(Builder, MergesRepeatedTerms) {
    NetworkBuilder b(1);
    AffineExpr e = b.input(0) + b.input(0) - 2.0 * b.input(0) + 3.0;
    EXPECT_TRUE(e.merged_terms().empty());
    b.add_output(e);
    const auto net = std::move(b).build();
    EXPECT_EQ(net.num_arcs(), 0u);
    EXPECT_EQ(net.evaluate(std::vector{9.0})[0], 3.0);
}
