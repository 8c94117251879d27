#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relu_dp/builder.hpp"
#include "relu_dp/errors.hpp"
#include "relu_dp/gadgets.hpp"
#include "relu_dp/network.hpp"

namespace relu_dp {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Dense directed graph. Missing arcs have length +infinity; the optional
/// resource matrix is only read by the constrained shortest path builder.
class WeightedGraph {
public:
    WeightedGraph(std::size_t n, std::vector<double> lengths, std::size_t source = 0,
                  std::optional<std::vector<double>> resources = std::nullopt)
        : n_(n), lengths_(std::move(lengths)), resources_(std::move(resources)), source_(source) {
        if (n_ == 0) throw validation_error("graph needs at least one vertex");
        if (lengths_.size() != n_ * n_) throw validation_error("length matrix must be n x n");
        if (source_ >= n_) throw validation_error("source vertex out of range");
        for (double c : lengths_) {
            if (std::isnan(c) || c == -infinity) throw validation_error("lengths must be finite or +infinity");
        }
        if (resources_) {
            if (resources_->size() != n_ * n_) throw validation_error("resource matrix must be n x n");
            for (double r : *resources_) {
                if (!std::isfinite(r) || r < 0.0) throw validation_error("resources must be finite and non-negative");
            }
        }
    }

    std::size_t size() const { return n_; }
    std::size_t source() const { return source_; }
    double length(std::size_t u, std::size_t v) const { return lengths_.at(u * n_ + v); }
    bool has_arc(std::size_t u, std::size_t v) const { return u != v && std::isfinite(length(u, v)); }
    bool has_resources() const { return resources_.has_value(); }
    double resource(std::size_t u, std::size_t v) const {
        return resources_ ? resources_->at(u * n_ + v) : 0.0;
    }
    const std::vector<double>& lengths() const { return lengths_; }
    const std::optional<std::vector<double>>& resources() const { return resources_; }

    /// Largest finite |c_uv| over off-diagonal arcs.
    double max_abs_length() const {
        double m = 0.0;
        for (std::size_t u = 0; u < n_; ++u) {
            for (std::size_t v = 0; v < n_; ++v) {
                if (has_arc(u, v)) m = std::max(m, std::abs(length(u, v)));
            }
        }
        return m;
    }

private:
    std::size_t n_;
    std::vector<double> lengths_;
    std::optional<std::vector<double>> resources_;
    std::size_t source_;
};

struct IntSequencePair {
    std::vector<std::int64_t> x;
    std::vector<std::int64_t> y;

    static IntSequencePair from_reals(std::span<const double> x, std::span<const double> y) {
        auto conv = [](std::span<const double> s, const char* name) {
            std::vector<std::int64_t> out;
            for (double v : s) {
                if (!std::isfinite(v) || std::floor(v) != v || std::abs(v) > 1e15) {
                    throw validation_error(std::string("sequence ") + name + " has a non-integral entry");
                }
                out.push_back(static_cast<std::int64_t>(v));
            }
            return out;
        };
        return {conv(x, "x"), conv(y, "y")};
    }
};

// ---------------------------------------------------------------------------
// Longest common subsequence

/// Constant-size cell (f(i-1,j-1), f(i-1,j), f(i,j-1), x_i, y_j) -> f(i,j).
///
/// Layer 1 holds the equality gate pair max{0, x-y}, max{0, y-x} (both zero
/// iff x = y for integers) and the max helper max{0, left-up]. Layer 2 gates
/// diag+1 by the pair and forms the equality indicator; layer 3 gates
/// max{up, left} by that indicator. Values must stay in [0, value_bound].
class LcsCell {
public:
    enum Input : std::size_t { diag = 0, up = 1, left = 2, x = 3, y = 4 };

    explicit LcsCell(std::int64_t value_bound) : value_bound_(value_bound) {
        if (value_bound < 0) throw argument_error("LCS cell: value bound must be non-negative");
        const double gate = 2.0 * (static_cast<double>(value_bound) + 1.0);
        NetworkBuilder b(5);
        const AffineExpr d = b.input(diag), u = b.input(up), l = b.input(left);
        const AffineExpr xi = b.input(x), yj = b.input(y);
        const AffineExpr gp = b.relu(xi - yj, 1);
        const AffineExpr gm = b.relu(yj - xi, 1);
        const AffineExpr t = b.relu(l - u, 1);
        const AffineExpr match = b.relu(d + 1.0 - gate * (gp + gm), 2);
        const AffineExpr equal = b.relu(1.0 - gp - gm, 2);
        const AffineExpr skip = b.relu(u + t - gate * equal, 3);
        b.add_output(match + skip);
        net_ = std::move(b).build(4);
    }

    const ReluNetwork& network() const { return net_; }
    std::int64_t value_bound() const { return value_bound_; }
    static NeuronRef gate_plus() { return {1, 0}; }
    static NeuronRef gate_minus() { return {1, 1}; }

    double step(double diag_v, double up_v, double left_v, std::int64_t xi, std::int64_t yj) const {
        const std::vector<double> in{diag_v, up_v, left_v, static_cast<double>(xi), static_cast<double>(yj)};
        return net_.evaluate(in)[0];
    }

private:
    std::int64_t value_bound_;
    ReluNetwork net_;
};

inline ReluNetwork build_lcs_cell(std::int64_t value_bound) { return LcsCell(value_bound).network(); }

/// Applies the LCS cell over the m x n grid with zero boundary.
inline std::int64_t run_lcs(const IntSequencePair& pair) {
    const std::size_t m = pair.x.size(), n = pair.y.size();
    if (m == 0 || n == 0) return 0;
    const LcsCell cell(static_cast<std::int64_t>(std::min(m, n)));
    std::vector<double> prev(n + 1, 0.0), cur(n + 1, 0.0);
    for (std::size_t i = 1; i <= m; ++i) {
        cur[0] = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            cur[j] = cell.step(prev[j - 1], prev[j], cur[j - 1], pair.x[i - 1], pair.y[j - 1]);
        }
        std::swap(prev, cur);
    }
    return std::llround(prev[n]);
}

/// The whole m x n grid unrolled into one network (inputs x_1..x_m, y_1..y_n).
inline ReluNetwork unfold_lcs(std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) throw argument_error("unfold_lcs: sequences must be non-empty");
    const LcsCell cell(static_cast<std::int64_t>(std::min(m, n)));
    NetworkBuilder b(m + n);
    std::vector<std::vector<AffineExpr>> f(m + 1, std::vector<AffineExpr>(n + 1, AffineExpr(0.0)));
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            const std::vector<AffineExpr> in{f[i - 1][j - 1], f[i - 1][j], f[i][j - 1], b.input(i - 1),
                                             b.input(m + j - 1)};
            f[i][j] = embed(b, cell.network(), in).front();
        }
    }
    b.add_output(f[m][n]);
    return std::move(b).build();
}

// ---------------------------------------------------------------------------
// Single-source shortest paths (Bellman-Ford)

/// Finite stand-in for an unreached vertex: 2 * (n * max|c| + 1).
inline double bellman_ford_big(const WeightedGraph& g) {
    return 2.0 * (static_cast<double>(g.size()) * g.max_abs_length() + 1.0);
}

/// One relaxation round f(v) <- min_u {f(u) + c_uv} as a network. The self
/// term u = v uses length 0 and absent arcs are left out of the minimum.
inline ReluNetwork build_bellman_ford_cell(const WeightedGraph& g) {
    const std::size_t n = g.size();
    NetworkBuilder b(n);
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<AffineExpr> candidates;
        for (std::size_t u = 0; u < n; ++u) {
            if (u == v) {
                candidates.push_back(b.input(u));
            } else if (g.has_arc(u, v)) {
                candidates.push_back(b.input(u) + g.length(u, v));
            }
        }
        b.add_output(min_of(b, std::move(candidates)));
    }
    return std::move(b).build();
}

struct ShortestPathResult {
    std::vector<double> distances; // +infinity when unreachable
    NetworkStats cell_stats;
    std::size_t rounds = 0;
};

/// Applies the relaxation cell n-1 times from (0 at the source, BIG elsewhere).
inline ShortestPathResult run_bellman_ford(const WeightedGraph& g) {
    const std::size_t n = g.size();
    const ReluNetwork cell = build_bellman_ford_cell(g);
    const double big = bellman_ford_big(g);
    std::vector<double> state(n, big);
    state[g.source()] = 0.0;
    for (std::size_t r = 0; r + 1 < n; ++r) state = cell.evaluate(state);
    for (double& d : state) {
        if (d >= big / 2.0) d = infinity;
    }
    return {std::move(state), cell.stats(), n - 1};
}

// ---------------------------------------------------------------------------
// All-pairs shortest paths by min-plus squaring

/// Min-plus square D'(u,v) = min_w {D(u,w) + D(w,v)} of an n x n matrix
/// (row-major inputs and outputs).
inline ReluNetwork build_apsp_cell(std::size_t n) {
    if (n == 0) throw argument_error("APSP cell: n must be positive");
    NetworkBuilder b(n * n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            std::vector<AffineExpr> sums;
            sums.reserve(n);
            for (std::size_t w = 0; w < n; ++w) sums.push_back(b.input(u * n + w) + b.input(w * n + v));
            b.add_output(min_of(b, std::move(sums)));
        }
    }
    return std::move(b).build();
}

/// ceil(log2(n-1)) squarings cover every path of at most n-1 arcs.
inline std::size_t apsp_squarings(std::size_t n) {
    if (n <= 2) return 0;
    return static_cast<std::size_t>(std::bit_width(n - 2));
}

/// Stand-in for absent arcs: 2 * (L * max|c| + 1) with L = max(n, 2^squarings),
/// the longest walk any squared entry can represent.
inline double apsp_big(const WeightedGraph& g, std::size_t squarings) {
    const double walk = std::max<double>(static_cast<double>(g.size()), std::ldexp(1.0, static_cast<int>(squarings)));
    return 2.0 * (walk * g.max_abs_length() + 1.0);
}

struct ApspResult {
    std::vector<double> distances; // row-major, +infinity when unreachable
    NetworkStats cell_stats;
    std::size_t squarings = 0;
};

inline ApspResult run_apsp(const WeightedGraph& g, std::optional<std::size_t> squarings = std::nullopt) {
    const std::size_t n = g.size();
    const std::size_t rounds = squarings.value_or(apsp_squarings(n));
    const double big = apsp_big(g, rounds);
    std::vector<double> d(n * n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) d[u * n + v] = u == v ? 0.0 : (g.has_arc(u, v) ? g.length(u, v) : big);
    }
    const ReluNetwork cell = build_apsp_cell(n);
    for (std::size_t r = 0; r < rounds; ++r) d = cell.evaluate(d);
    for (double& x : d) {
        if (x >= big / 2.0) x = infinity;
    }
    return {std::move(d), cell.stats(), rounds};
}

// ---------------------------------------------------------------------------
// Constrained shortest path, parameterized by (integral) length values

/// Network computing f(c, v), the least resource of an s-v path of length
/// at most c, for c = 0..c*, from arc lengths and resources given as inputs.
///
/// Inputs: lengths of the n(n-1) ordered pairs u != v (row-major, diagonal
/// skipped; integral, >= 1, a value above c* marks a missing arc), then the
/// resources in the same order. Outputs: f(c, v) for c = 0..c*, v = 0..n-1,
/// truncated at `resource_cap` the way knapsack sizes are truncated at 2.
///
/// f(c - c_uv, u) is picked with the same two-sided gate as the knapsack cell
/// picks f_in(p - p_in); unmatched selections report resource_cap.
class CspNetwork {
public:
    CspNetwork(std::size_t n, std::size_t source, std::int64_t c_star, double resource_cap)
        : n_(n), source_(source), c_star_(c_star), cap_(resource_cap) {
        if (n == 0 || source >= n) throw argument_error("CSP network: bad vertex count or source");
        if (c_star < 1) throw argument_error("CSP network: c* must be positive");
        if (!(resource_cap > 0.0) || !std::isfinite(resource_cap)) {
            throw argument_error("CSP network: resource cap must be positive");
        }
        const std::size_t pairs = n * (n - 1);
        const auto cs = static_cast<std::size_t>(c_star);
        NetworkBuilder b(2 * pairs);

        // gate[(pair * c*) + k-1] = (max{0, c_uv - k}, max{0, k - c_uv})
        std::vector<AffineExpr> gate_sum;
        gate_sum.reserve(pairs * cs);
        std::vector<AffineExpr> plus, minus;
        for (std::size_t e = 0; e < pairs; ++e) {
            for (std::int64_t k = 1; k <= c_star; ++k) {
                plus.push_back(b.relu(b.input(e) - static_cast<double>(k), 1));
            }
        }
        for (std::size_t e = 0; e < pairs; ++e) {
            for (std::int64_t k = 1; k <= c_star; ++k) {
                minus.push_back(b.relu(static_cast<double>(k) - b.input(e), 1));
            }
        }
        for (std::size_t j = 0; j < pairs * cs; ++j) gate_sum.push_back(plus[j] + minus[j]);

        std::vector<std::vector<AffineExpr>> f(cs + 1);
        for (std::size_t v = 0; v < n; ++v) f[0].push_back(AffineExpr(v == source ? 0.0 : cap_));
        for (std::size_t c = 1; c <= cs; ++c) {
            for (std::size_t v = 0; v < n; ++v) {
                std::vector<AffineExpr> candidates{f[c - 1][v]};
                for (std::size_t u = 0; u < n; ++u) {
                    if (u == v) continue;
                    const std::size_t e = pair_index(u, v);
                    AffineExpr selected(cap_);
                    for (std::size_t k = 1; k <= c; ++k) {
                        selected -= b.relu(cap_ - f[c - k][u] - cap_ * gate_sum[e * cs + (k - 1)]);
                    }
                    candidates.push_back(selected + b.input(pairs + e));
                }
                f[c].push_back(b.relu(min_of(b, std::move(candidates))));
            }
        }
        for (std::size_t c = 0; c <= cs; ++c) {
            for (std::size_t v = 0; v < n; ++v) b.add_output(f[c][v]);
        }
        net_ = std::move(b).build();
    }

    const ReluNetwork& network() const { return net_; }
    std::size_t vertices() const { return n_; }
    std::int64_t c_star() const { return c_star_; }
    double resource_cap() const { return cap_; }

    std::size_t pair_index(std::size_t u, std::size_t v) const { return u * (n_ - 1) + (v < u ? v : v - 1); }

    /// Network input for a graph: integral lengths >= 1 (missing arcs become c* + 1).
    std::vector<double> input_for(const WeightedGraph& g) const {
        if (g.size() != n_) throw argument_error("CSP network: vertex count mismatch");
        const std::size_t pairs = n_ * (n_ - 1);
        std::vector<double> x(2 * pairs, 0.0);
        for (std::size_t u = 0; u < n_; ++u) {
            for (std::size_t v = 0; v < n_; ++v) {
                if (u == v) continue;
                const std::size_t e = pair_index(u, v);
                if (g.has_arc(u, v)) {
                    const double c = g.length(u, v);
                    if (std::floor(c) != c || c < 1.0) {
                        throw validation_error("constrained shortest path needs integral lengths >= 1");
                    }
                    x[e] = std::min(c, static_cast<double>(c_star_ + 1));
                    x[pairs + e] = g.resource(u, v);
                } else {
                    x[e] = static_cast<double>(c_star_ + 1);
                }
            }
        }
        return x;
    }

    /// table[c][v] = f(c, v).
    std::vector<std::vector<double>> evaluate(const WeightedGraph& g) const {
        const auto out = net_.evaluate(input_for(g));
        std::vector<std::vector<double>> table(static_cast<std::size_t>(c_star_) + 1);
        for (std::size_t c = 0; c < table.size(); ++c) {
            table[c].assign(out.begin() + static_cast<std::ptrdiff_t>(c * n_),
                            out.begin() + static_cast<std::ptrdiff_t>((c + 1) * n_));
        }
        return table;
    }

private:
    std::size_t n_;
    std::size_t source_;
    std::int64_t c_star_;
    double cap_;
    ReluNetwork net_;
};

struct CspResult {
    std::vector<std::optional<std::int64_t>> lengths; // per vertex; empty when no feasible path of length <= c*
    NetworkStats stats;
};

/// Per vertex, the least length c <= c* whose resource f(c, v) stays within R.
inline CspResult run_csp(const WeightedGraph& g, std::int64_t c_star, double resource_limit,
                         double tol = 1e-9) {
    if (!(resource_limit >= 0.0) || !std::isfinite(resource_limit)) {
        throw argument_error("resource limit must be finite and non-negative");
    }
    if (!g.has_resources()) throw validation_error("constrained shortest path needs a resource matrix");
    const CspNetwork net(g.size(), g.source(), c_star, resource_limit + 1.0);
    const auto table = net.evaluate(g);
    CspResult res;
    res.stats = net.network().stats();
    res.lengths.assign(g.size(), std::nullopt);
    for (std::size_t v = 0; v < g.size(); ++v) {
        for (std::size_t c = 0; c < table.size(); ++c) {
            if (table[c][v] <= resource_limit + tol) {
                res.lengths[v] = static_cast<std::int64_t>(c);
                break;
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Travelling salesperson (Bellman-Held-Karp)

inline constexpr std::size_t tsp_max_vertices = 16;

/// All f(T, v) over subsets T of V \ {s}, one cardinality after another,
/// closed by min_u {f(V \ {s}, u) + c_us}. Inputs: the n x n distance
/// matrix row-major (diagonal unused), start vertex 0. Every f(T, v) with
/// |T| >= 2 passes through one rectified neuron, so distances must be >= 0.
inline ReluNetwork build_tsp_network(std::size_t n) {
    if (n < 2) throw argument_error("TSP network needs at least two vertices");
    if (n > tsp_max_vertices) {
        throw size_guard_error("TSP network limited to " + std::to_string(tsp_max_vertices) + " vertices");
    }
    NetworkBuilder b(n * n);
    auto dist = [&](std::size_t u, std::size_t v) { return b.input(u * n + v); };
    const std::size_t m = n - 1; // vertices 1..n-1 map to bits 0..m-1
    const std::uint32_t full = (std::uint32_t{1} << m) - 1;
    std::vector<std::vector<AffineExpr>> f(std::size_t{1} << m);

    std::vector<std::vector<std::uint32_t>> by_size(m + 1);
    for (std::uint32_t t = 1; t <= full; ++t) by_size[static_cast<std::size_t>(std::popcount(t))].push_back(t);

    for (std::size_t bit = 0; bit < m; ++bit) {
        f[std::size_t{1} << bit].assign(m, AffineExpr());
        f[std::size_t{1} << bit][bit] = dist(0, bit + 1);
    }
    for (std::size_t card = 2; card <= m; ++card) {
        for (std::uint32_t t : by_size[card]) {
            f[t].assign(m, AffineExpr());
            for (std::size_t vb = 0; vb < m; ++vb) {
                if (!(t >> vb & 1u)) continue;
                const std::uint32_t rest = t & ~(std::uint32_t{1} << vb);
                std::vector<AffineExpr> candidates;
                for (std::size_t ub = 0; ub < m; ++ub) {
                    if (rest >> ub & 1u) candidates.push_back(f[rest][ub] + dist(ub + 1, vb + 1));
                }
                f[t][vb] = b.relu(min_of(b, std::move(candidates)));
            }
        }
    }
    std::vector<AffineExpr> closing;
    for (std::size_t ub = 0; ub < m; ++ub) closing.push_back(f[full][ub] + dist(ub + 1, 0));
    b.add_output(min_of(b, std::move(closing)));
    return std::move(b).build();
}

/// Optimal tour length of a complete directed distance matrix (row-major).
inline double run_tsp(std::span<const double> dist, std::size_t n) {
    if (dist.size() != n * n) throw validation_error("distance matrix must be n x n");
    if (n > tsp_max_vertices) {
        throw size_guard_error("TSP limited to " + std::to_string(tsp_max_vertices) + " vertices");
    }
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            const double c = dist[u * n + v];
            if (u != v && (!std::isfinite(c) || c < 0.0)) {
                throw validation_error("TSP distances must be finite and non-negative");
            }
        }
    }
    if (n == 1) return 0.0;
    std::vector<double> x(dist.begin(), dist.end());
    for (std::size_t u = 0; u < n; ++u) x[u * n + u] = 0.0;
    return build_tsp_network(n).evaluate(x)[0];
}

inline double run_tsp(const WeightedGraph& g) { return run_tsp(g.lengths(), g.size()); }

} // namespace relu_dp
