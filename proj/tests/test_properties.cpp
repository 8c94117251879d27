// Randomized structural properties of the constructions.
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "relu_dp/dp_nn.hpp"
#include "relu_dp/fptas_nn.hpp"
#include "relu_dp/gadgets.hpp"
#include "relu_dp/instance_gen.hpp"

using namespace relu_dp;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, double scale) {
    std::vector<double> x(n);
    for (double& v : x) v = scale * (2.0 * rng.u01() - 1.0);
    return x;
}

// Sum of |w| along all paths bounds the Lipschitz constant in the sup norm.
double path_weight_bound(const ReluNetwork& net) {
    std::vector<std::vector<double>> mass(net.layer_count());
    for (std::size_t l = 0; l < net.layer_count(); ++l) mass[l].assign(net.layer_size(l), l == 0 ? 1.0 : 0.0);
    for (std::size_t l = 1; l < net.layer_count(); ++l) {
        for (const Arc& a : net.arcs()) {
            if (a.target.layer == l) mass[l][a.target.index] += std::abs(a.weight) * mass[a.source.layer][a.source.index];
        }
    }
    double best = 0.0;
    for (double m : mass.back()) best = std::max(best, m);
    return best;
}

} // namespace

TEST(Properties, MinGadgetsArePositivelyHomogeneousAndShiftEquivariant) {
    Rng rng(21);
    for (std::size_t n : {2u, 3u, 6u, 11u}) {
        const auto net = min_n_gadget(n);
        for (int t = 0; t < 200; ++t) {
            auto x = random_vector(rng, n, 50.0);
            const double base = net.evaluate(x)[0];
            auto scaled = x;
            for (double& v : scaled) v *= 4.0;
            EXPECT_EQ(net.evaluate(scaled)[0], 4.0 * base);
            auto shifted = x;
            for (double& v : shifted) v += 0.5;
            EXPECT_NEAR(net.evaluate(shifted)[0], base + 0.5, 1e-12);
        }
    }
}

TEST(Properties, CellsAreLipschitz) {
    Rng rng(22);
    const DpCell dp(6);
    const FptasCell fp(4);
    for (const ReluNetwork* net : {&dp.network(), &fp.network()}) {
        const double L = path_weight_bound(*net);
        for (int t = 0; t < 300; ++t) {
            const auto x = random_vector(rng, net->input_size(), 10.0);
            auto y = x;
            double dist = 0.0;
            for (double& v : y) {
                const double d = 1e-3 * (2.0 * rng.u01() - 1.0);
                v += d;
                dist = std::max(dist, std::abs(d));
            }
            const auto fx = net->evaluate(x), fy = net->evaluate(y);
            for (std::size_t k = 0; k < fx.size(); ++k) EXPECT_LE(std::abs(fx[k] - fy[k]), L * dist + 1e-9);
        }
    }
}

TEST(Properties, PiecewiseLinearAlongSegments) {
    // On a segment the output is piecewise linear: second differences vanish
    // except near finitely many breakpoints.
    Rng rng(23);
    const DpCell cell(5);
    const auto& net = cell.network();
    const auto a = random_vector(rng, net.input_size(), 3.0);
    const auto b = random_vector(rng, net.input_size(), 3.0);
    const int steps = 2000;
    std::vector<double> ys;
    for (int s = 0; s <= steps; ++s) {
        std::vector<double> x(a.size());
        const double t = static_cast<double>(s) / steps;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = (1 - t) * a[i] + t * b[i];
        ys.push_back(net.evaluate(x)[0]);
    }
    int kinks = 0;
    for (int s = 1; s < steps; ++s) kinks += std::abs(ys[s + 1] - 2 * ys[s] + ys[s - 1]) > 1e-9;
    const auto size = static_cast<int>(net.stats().size);
    EXPECT_LE(kinks, 2 * size);
}

TEST(Properties, AffineUnfoldOfRandomCellEqualsIteration) {
    Rng rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        NetworkBuilder b(3);
        const auto h1 = b.relu(rng.u01() * b.input(0) - rng.u01() * b.input(2) + (rng.u01() - 0.5));
        const auto h2 = b.relu(b.input(1) - h1 * rng.u01());
        b.add_output(h2 - 0.7 * h1 + b.input(0) * (rng.u01() - 0.5));
        b.add_output(h1 + b.input(2));
        const auto cell = std::move(b).build();
        const std::vector<Feedback> fb{{0, 0}, {1, 2}};
        const std::size_t steps = 5;
        const auto net = unfold(cell, steps, fb, StateLink::affine);
        auto x = random_vector(rng, net.input_size(), 2.0);
        std::vector<double> state{x[0], x[1]};
        for (std::size_t s = 0; s < steps; ++s) {
            state = cell.evaluate(std::vector<double>{state[0], x[2 + s], state[1]});
        }
        const auto out = net.evaluate(x);
        ASSERT_EQ(out.size(), 2u);
        EXPECT_NEAR(out[0], state[0], 1e-12);
        EXPECT_NEAR(out[1], state[1], 1e-12);
    }
}

TEST(Properties, BuildsAreDeterministic) {
    EXPECT_TRUE(DpCell(9).network() == DpCell(9).network());
    EXPECT_TRUE(FptasCell(7).network() == FptasCell(7).network());
    const auto inst = gen_knapsack({5, 40});
    EXPECT_EQ(run_recurrent(DpCell(40), inst).states, run_recurrent(DpCell(40), inst).states);
}
