// Builds the exact and the rounded knapsack networks for a small instance
// and solves a shortest path problem with the relaxation network.

#include <iostream>

#include "relu_dp.hpp"

int main() {
    using namespace relu_dp;

    const KnapsackInstance inst({2, 3, 4}, {0.5, 0.5, 0.5});
    const Solution exact = solve_exact(inst);
    std::cout << "DP network: value " << exact.value << ", items";
    for (auto i : exact.items) std::cout << ' ' << i;
    std::cout << " (cell " << DpCell(inst.total_profit()).network().stats() << ")\n";

    const Solution approx = solve_approx(inst, 0.5);
    std::cout << "rounded network, eps=0.5: value " << approx.value << " (P=" << resolution_for(inst.size(), 0.5)
              << ")\n";

    const WeightedGraph g(3, {0, 1, 4, infinity, 0, 2, 1, infinity, 0});
    const auto sp = run_bellman_ford(g);
    std::cout << "shortest paths from 0:";
    for (double d : sp.distances) std::cout << ' ' << d;
    std::cout << "\n";
}
