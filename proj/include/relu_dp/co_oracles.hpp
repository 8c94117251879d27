#pragma once

// Classical reference algorithms for the graph and sequence networks. None of
// them touches the network code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "relu_dp/co_problems.hpp"
#include "relu_dp/errors.hpp"

namespace relu_dp::oracle {

inline std::int64_t lcs_length(std::span<const std::int64_t> x, std::span<const std::int64_t> y) {
    std::vector<std::vector<std::int64_t>> f(x.size() + 1, std::vector<std::int64_t>(y.size() + 1, 0));
    for (std::size_t i = 1; i <= x.size(); ++i) {
        for (std::size_t j = 1; j <= y.size(); ++j) {
            f[i][j] = x[i - 1] == y[j - 1] ? f[i - 1][j - 1] + 1 : std::max(f[i - 1][j], f[i][j - 1]);
        }
    }
    return f[x.size()][y.size()];
}

inline std::int64_t lcs_length(const IntSequencePair& p) { return lcs_length(p.x, p.y); }

/// Edge-relaxation Bellman-Ford from the graph's source; +infinity if unreachable.
inline std::vector<double> bellman_ford(const WeightedGraph& g) {
    const std::size_t n = g.size();
    std::vector<double> d(n, infinity);
    d[g.source()] = 0.0;
    for (std::size_t round = 0; round + 1 < n; ++round) {
        bool changed = false;
        for (std::size_t u = 0; u < n; ++u) {
            if (!std::isfinite(d[u])) continue;
            for (std::size_t v = 0; v < n; ++v) {
                if (g.has_arc(u, v) && d[u] + g.length(u, v) < d[v]) {
                    d[v] = d[u] + g.length(u, v);
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
    return d;
}

/// Row-major all-pairs distances. Throws if a negative cycle shows up.
inline std::vector<double> floyd_warshall(const WeightedGraph& g) {
    const std::size_t n = g.size();
    std::vector<double> d(n * n, infinity);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v) d[u * n + v] = 0.0;
            else if (g.has_arc(u, v)) d[u * n + v] = g.length(u, v);
        }
    }
    for (std::size_t w = 0; w < n; ++w) {
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = 0; v < n; ++v) {
                const double via = d[u * n + w] + d[w * n + v];
                if (via < d[u * n + v]) d[u * n + v] = via;
            }
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (d[v * n + v] < 0.0) throw infeasible_error("negative cycle in graph");
    }
    return d;
}

/// Shortest length of a simple s-v path whose resource sum stays within R,
/// by exhaustive depth-first enumeration. Lengths are returned as integers.
inline std::vector<std::optional<std::int64_t>> constrained_shortest_paths(const WeightedGraph& g,
                                                                           double resource_limit,
                                                                           double tol = 1e-9) {
    const std::size_t n = g.size();
    std::vector<std::optional<std::int64_t>> best(n);
    std::vector<bool> on_path(n, false);
    auto visit = [&](auto&& self, std::size_t u, double length, double resource) -> void {
        const auto len = static_cast<std::int64_t>(std::llround(length));
        if (!best[u] || len < *best[u]) best[u] = len;
        on_path[u] = true;
        for (std::size_t v = 0; v < n; ++v) {
            if (on_path[v] || !g.has_arc(u, v)) continue;
            const double r = resource + g.resource(u, v);
            if (r <= resource_limit + tol) self(self, v, length + g.length(u, v), r);
        }
        on_path[u] = false;
    };
    visit(visit, g.source(), 0.0, 0.0);
    return best;
}

/// Optimal tour from vertex 0 by trying all (n-1)! orders.
inline double tsp_brute_force(std::span<const double> dist, std::size_t n) {
    if (dist.size() != n * n) throw validation_error("distance matrix must be n x n");
    if (n <= 1) return 0.0;
    std::vector<std::size_t> order(n - 1);
    std::iota(order.begin(), order.end(), std::size_t{1});
    double best = infinity;
    do {
        double len = dist[order.front()];
        for (std::size_t i = 0; i + 1 < order.size(); ++i) len += dist[order[i] * n + order[i + 1]];
        len += dist[order.back() * n];
        best = std::min(best, len);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

} // namespace relu_dp::oracle
