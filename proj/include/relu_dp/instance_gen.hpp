#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "relu_dp/co_problems.hpp"
#include "relu_dp/errors.hpp"
#include "relu_dp/knapsack.hpp"

namespace relu_dp {

/// Seeded source of reproducible draws.
///
/// Raw bits come from std::mt19937_64, whose output sequence is fixed by the
/// C++ standard (the 10000th output for the default seed is
/// 9981545732273789042). The standard distributions are implementation
/// defined, so integer and real draws are derived here by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform integer in [lo, hi] by rejection (no modulo bias).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (hi < lo) throw argument_error("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
        if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(bits());
        const std::uint64_t range = span + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
        std::uint64_t r;
        do {
            r = bits();
        } while (r >= limit);
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + r % range);
    }

    /// Uniform real in [0, 1) on the 2^-53 grid.
    double u01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    /// Uniform real in ]0, 1[.
    double open01() {
        double u;
        do {
            u = u01();
        } while (u == 0.0);
        return u;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i - 1)));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

struct GenConfig {
    std::uint64_t seed = 0;
    std::int64_t p_star = 10;
};

namespace detail {

inline std::vector<std::int64_t> draw_profits(Rng& rng, std::int64_t p_star) {
    std::vector<std::int64_t> profits;
    std::int64_t remaining = p_star;
    while (remaining > 0) {
        const std::int64_t p = rng.uniform_int(1, remaining);
        profits.push_back(p);
        remaining -= p;
    }
    return profits;
}

} // namespace detail

/// Random knapsack instance with profits summing to p* and sizes summing to
/// a uniform draw from ]1,2[.
///
/// Profits are drawn one after another uniformly from [1, p* - sum so far]
/// and then shuffled. A single-item draw is redrawn when p* >= 2, since one
/// size in ]0,1] cannot sum into ]1,2[; for p* = 1 the lone item gets a
/// uniform size in ]0,1[. Sizes start uniform in [0,1) and are scaled to the
/// target sum; the whole size vector is redrawn if any entry leaves ]0,1].
inline KnapsackInstance gen_knapsack(const GenConfig& cfg) {
    if (cfg.p_star < 1 || cfg.p_star > max_profit) throw argument_error("gen_knapsack: p* must lie in [1, 2^40]");
    Rng rng(cfg.seed);
    std::vector<std::int64_t> profits;
    do {
        profits = detail::draw_profits(rng, cfg.p_star);
    } while (profits.size() == 1 && cfg.p_star >= 2);
    rng.shuffle(profits);

    const std::size_t n = profits.size();
    if (n == 1) return KnapsackInstance(std::move(profits), {rng.open01()});

    std::vector<double> sizes(n);
    for (;;) {
        const double target = 1.0 + rng.open01();
        double raw_sum = 0.0;
        for (double& s : sizes) {
            s = rng.u01();
            raw_sum += s;
        }
        if (raw_sum == 0.0) continue;
        bool ok = true;
        double sum = 0.0;
        for (double& s : sizes) {
            s = s / raw_sum * target;
            ok = ok && s > 0.0 && s <= 1.0;
            sum += s;
        }
        if (ok && sum > 1.0 && sum < 2.0) break;
    }
    return KnapsackInstance(std::move(profits), std::move(sizes));
}

struct GraphGenConfig {
    std::size_t n = 5;
    double max_len = 10.0;
    std::uint64_t seed = 0;
    bool with_resources = false;
    // Integral lengths uniform in [1, floor(max_len)] instead of reals in [0, max_len].
    bool integral = false;
    // Each off-diagonal arc is kept with this probability.
    double arc_probability = 1.0;
};

inline WeightedGraph gen_graph(const GraphGenConfig& cfg) {
    if (cfg.n < 2) throw argument_error("gen_graph: n must be at least 2");
    if (!(cfg.max_len >= 0.0) || !std::isfinite(cfg.max_len)) throw argument_error("gen_graph: bad max_len");
    if (cfg.integral && cfg.max_len < 1.0) throw argument_error("gen_graph: integral lengths need max_len >= 1");
    if (!(cfg.arc_probability >= 0.0 && cfg.arc_probability <= 1.0)) {
        throw argument_error("gen_graph: arc probability must lie in [0,1]");
    }
    Rng rng(cfg.seed);
    const std::size_t n = cfg.n;
    std::vector<double> lengths(n * n, 0.0);
    std::vector<double> resources(n * n, 0.0);
    const auto top = static_cast<std::int64_t>(std::floor(cfg.max_len));
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v) continue;
            lengths[u * n + v] = cfg.integral ? static_cast<double>(rng.uniform_int(1, top)) : rng.u01() * cfg.max_len;
            if (cfg.with_resources) resources[u * n + v] = rng.u01() * cfg.max_len;
            if (cfg.arc_probability < 1.0 && !(rng.u01() < cfg.arc_probability)) lengths[u * n + v] = infinity;
        }
    }
    if (!cfg.with_resources) return WeightedGraph(n, std::move(lengths));
    return WeightedGraph(n, std::move(lengths), 0, std::move(resources));
}

inline WeightedGraph gen_graph(std::size_t n, double max_len, std::uint64_t seed, bool with_resources) {
    return gen_graph(GraphGenConfig{n, max_len, seed, with_resources});
}

inline IntSequencePair gen_sequences(std::size_t m, std::size_t n, std::int64_t alphabet, std::uint64_t seed) {
    if (m == 0 || n == 0) throw argument_error("gen_sequences: lengths must be at least 1");
    if (alphabet < 1) throw argument_error("gen_sequences: alphabet must be at least 1");
    Rng rng(seed);
    IntSequencePair pair;
    for (std::size_t i = 0; i < m; ++i) pair.x.push_back(rng.uniform_int(1, alphabet));
    for (std::size_t j = 0; j < n; ++j) pair.y.push_back(rng.uniform_int(1, alphabet));
    return pair;
}

} // namespace relu_dp
