#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relu_dp/builder.hpp"
#include "relu_dp/errors.hpp"
#include "relu_dp/knapsack.hpp"
#include "relu_dp/network.hpp"

namespace relu_dp {

inline constexpr std::int64_t fptas_cell_max_resolution = 1500;

/// Largest integer magnitude we allow inside comparison pre-activations.
inline constexpr double exact_integer_limit = 4503599627370496.0; // 2^52

/// One step of the rounded knapsack recursion with resolution P.
///
/// Inputs: g_in(1..P), the running profit p*_in, item profit p_in and size
/// s_in. Outputs: g_out(1..P) and p*_out = p*_in + p_in.
///
/// The granularity units are stored scaled by P: layer 1 computes
/// max{0, p*_in - P} instead of max{0, p*_in/P - 1}, so P*d_old and P*d_new
/// are integers carried in exact arithmetic and every comparison in layer 2
/// is an exact integer. The function computed is the same.
class FptasCell {
public:
    explicit FptasCell(std::int64_t resolution) : resolution_(resolution) {
        if (resolution < 1 || resolution > fptas_cell_max_resolution) {
            throw argument_error("FPTAS cell: P must lie in [1, " + std::to_string(fptas_cell_max_resolution) + "]");
        }
        const std::int64_t P = resolution;
        const auto Pd = static_cast<double>(P);
        const std::size_t Ps = static_cast<std::size_t>(P);
        NetworkBuilder b(Ps + 3);
        auto g_in = [&](std::int64_t k) { return b.input(static_cast<std::size_t>(k - 1)); };
        const AffineExpr prefix_in = b.input(Ps);
        const AffineExpr p_in = b.input(Ps + 1);
        const AffineExpr s_in = b.input(Ps + 2);

        const AffineExpr old_unit = b.relu(prefix_in - Pd, 1);
        const AffineExpr new_unit = b.relu(prefix_in + p_in - Pd, 1);
        const AffineExpr d_old = old_unit + Pd; // P * d_old
        const AffineExpr d_new = new_unit + Pd; // P * d_new

        const std::size_t tri = Ps * (Ps + 1) / 2;
        std::vector<AffineExpr> up_plus, up_minus, down_plus, down_minus;
        up_plus.reserve(tri);
        up_minus.reserve(tri);
        down_plus.reserve(tri);
        down_minus.reserve(tri);
        for (std::int64_t p = 1; p <= P; ++p) {
            for (std::int64_t k = p; k <= P; ++k) {
                const auto pd = static_cast<double>(p), kd = static_cast<double>(k);
                up_plus.push_back(b.relu(2.0 * (pd * d_new - kd * d_old), 2));
            }
        }
        for (std::int64_t p = 1; p <= P; ++p) {
            for (std::int64_t k = p; k <= P; ++k) {
                const auto pd = static_cast<double>(p), kd = static_cast<double>(k);
                up_minus.push_back(b.relu(2.0 * ((kd - 1.0) * d_old - pd * d_new) + 2.0, 2));
            }
        }
        for (std::int64_t p = 1; p <= P; ++p) {
            for (std::int64_t k = 1; k <= p; ++k) {
                const auto pd = static_cast<double>(p), kd = static_cast<double>(k);
                down_plus.push_back(b.relu(2.0 * (pd * d_new - kd * d_old) - 2.0 * Pd * p_in, 2));
            }
        }
        for (std::int64_t p = 1; p <= P; ++p) {
            for (std::int64_t k = 1; k <= p; ++k) {
                const auto pd = static_cast<double>(p), kd = static_cast<double>(k);
                down_minus.push_back(b.relu(2.0 * ((kd - 1.0) * d_old + Pd * p_in - pd * d_new) + 2.0, 2));
            }
        }

        std::vector<AffineExpr> keep, take;
        keep.reserve(tri);
        take.reserve(tri);
        for (std::int64_t p = 1; p <= P; ++p) {
            for (std::int64_t k = p; k <= P; ++k) {
                const std::size_t j = up_index(p, k);
                keep.push_back(b.relu(2.0 - g_in(k) - up_plus[j] - up_minus[j], 3));
            }
        }
        for (std::int64_t p = 1; p <= P; ++p) {
            for (std::int64_t k = 1; k <= p; ++k) {
                const std::size_t j = down_index(p, k);
                take.push_back(b.relu(g_in(k) - down_plus[j] - down_minus[j], 3));
            }
        }

        for (std::int64_t p = 1; p <= P; ++p) {
            AffineExpr h1(2.0);
            for (std::int64_t k = p; k <= P; ++k) h1 -= keep[up_index(p, k)];
            AffineExpr h2;
            for (std::int64_t k = 1; k <= p; ++k) h2 += take[down_index(p, k)];
            const AffineExpr o4 = b.relu(h1 - s_in - h2, 4);
            b.add_output(h1 - o4);
        }
        b.add_output(prefix_in + p_in);
        net_ = std::move(b).build(5);
    }

    const ReluNetwork& network() const { return net_; }
    std::int64_t resolution() const { return resolution_; }

    std::size_t prefix_input() const { return static_cast<std::size_t>(resolution_); }
    std::size_t profit_input() const { return static_cast<std::size_t>(resolution_) + 1; }
    std::size_t size_input() const { return static_cast<std::size_t>(resolution_) + 2; }
    std::size_t prefix_output() const { return static_cast<std::size_t>(resolution_); }

    /// Layer-1 units, holding P*max{0, x/P - 1} for x = p*_in resp. p*_in + p_in.
    NeuronRef old_unit() const { return {1, 0}; }
    NeuronRef new_unit() const { return {1, 1}; }

    NeuronRef up_plus(std::int64_t p, std::int64_t k) const { return {2, u32(up_index(p, k))}; }
    NeuronRef up_minus(std::int64_t p, std::int64_t k) const { return {2, u32(tri() + up_index(p, k))}; }
    NeuronRef down_plus(std::int64_t p, std::int64_t k) const { return {2, u32(2 * tri() + down_index(p, k))}; }
    NeuronRef down_minus(std::int64_t p, std::int64_t k) const { return {2, u32(3 * tri() + down_index(p, k))}; }
    NeuronRef keep_select(std::int64_t p, std::int64_t k) const { return {3, u32(up_index(p, k))}; }
    NeuronRef take_select(std::int64_t p, std::int64_t k) const { return {3, u32(tri() + down_index(p, k))}; }
    NeuronRef min_unit(std::int64_t p) const { return {4, u32(static_cast<std::size_t>(p - 1))}; }

    std::vector<double> step_input(std::span<const double> state, double prefix, double p_in, double s_in) const {
        if (state.size() != static_cast<std::size_t>(resolution_)) {
            throw input_shape_error("FPTAS state must have P entries");
        }
        if (!std::isfinite(p_in) || std::floor(p_in) != p_in || !std::isfinite(prefix) || std::floor(prefix) != prefix) {
            throw validation_error("profits fed to the FPTAS cell must be integral");
        }
        std::vector<double> x(state.begin(), state.end());
        x.push_back(prefix);
        x.push_back(p_in);
        x.push_back(s_in);
        return x;
    }

private:
    static std::uint32_t u32(std::size_t v) { return static_cast<std::uint32_t>(v); }
    std::size_t tri() const {
        const auto P = static_cast<std::size_t>(resolution_);
        return P * (P + 1) / 2;
    }
    // Position of (p, k), p <= k, in row-major order over p = 1..P, k = p..P.
    std::size_t up_index(std::int64_t p, std::int64_t k) const {
        const auto P = static_cast<std::size_t>(resolution_);
        const auto q = static_cast<std::size_t>(p - 1);
        return q * (P + 1) - q * (q + 1) / 2 + static_cast<std::size_t>(k - p);
    }
    // Position of (p, k), k <= p, in row-major order over p = 1..P, k = 1..p.
    static std::size_t down_index(std::int64_t p, std::int64_t k) {
        const auto q = static_cast<std::size_t>(p - 1);
        return q * (q + 1) / 2 + static_cast<std::size_t>(k - 1);
    }

    std::int64_t resolution_;
    ReluNetwork net_;
};

inline FptasCell build_fptas_cell(std::int64_t resolution) { return FptasCell(resolution); }

/// Throws overflow_risk_error when an instance could push the integer
/// comparisons of a resolution-P cell past exact double range.
inline void check_fptas_magnitude(std::int64_t resolution, const KnapsackInstance& inst) {
    const double bound = 2.0 * static_cast<double>(resolution) *
                         (static_cast<double>(inst.total_profit()) + static_cast<double>(inst.max_item_profit()) +
                          static_cast<double>(resolution));
    if (!(bound < exact_integer_limit)) {
        throw overflow_risk_error("instance profits too large for exact evaluation at P=" + std::to_string(resolution));
    }
}

struct FptasRun {
    FptasTable table;
    std::int64_t final_prefix = 0;
    std::vector<LayerActivations> traces; // per step, only when recorded
};

/// Feeds the items one by one through the cell from g(., 0) = 2, p*_0 = 0.
inline FptasRun run_fptas(const FptasCell& cell, const KnapsackInstance& inst, bool record_activations = false) {
    check_fptas_magnitude(cell.resolution(), inst);
    const std::int64_t P = cell.resolution();
    FptasRun run{FptasTable(P, inst.size()), 0, {}};
    std::vector<double> state(static_cast<std::size_t>(P), truncation_value);
    std::int64_t prefix = 0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const auto x = cell.step_input(state, static_cast<double>(prefix), static_cast<double>(inst.profit(i)),
                                       inst.item_size(i));
        std::vector<double> out;
        if (record_activations) {
            auto trace = cell.network().evaluate_trace(x);
            out = trace.back();
            run.traces.push_back(std::move(trace));
        } else {
            out = cell.network().evaluate(x);
        }
        const double next_prefix = out[cell.prefix_output()];
        prefix = static_cast<std::int64_t>(next_prefix);
        if (static_cast<double>(prefix) != next_prefix) throw numeric_overflow_error("profit prefix lost exactness");
        out.pop_back();
        state = std::move(out);
        run.table.set_prefix_profit(i + 1, prefix);
        for (std::int64_t p = 1; p <= P; ++p) run.table.set(p, i + 1, state[static_cast<std::size_t>(p - 1)]);
    }
    run.final_prefix = prefix;
    return run;
}

/// P = ceil(n^2 / epsilon), the resolution that guarantees a (1 - epsilon) ratio.
inline std::int64_t resolution_for(std::size_t n, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw argument_error("epsilon must lie in ]0,1]");
    const double p = std::ceil(static_cast<double>(n) * static_cast<double>(n) / epsilon);
    if (p > static_cast<double>(fptas_cell_max_resolution)) {
        throw size_guard_error("resolution P=" + std::to_string(static_cast<long long>(p)) + " exceeds the cell cap");
    }
    return static_cast<std::int64_t>(p);
}

/// Runs the rounded network with resolution P and recovers a subset of
/// profit >= the reported value p^NN = max{p * d_n : g(p, n) <= 1}.
inline Solution solve_fptas(const KnapsackInstance& inst, std::int64_t resolution) {
    const FptasCell cell(resolution);
    const FptasRun run = run_fptas(cell, inst);
    const FptasOptimum best = fptas_optimum(run.table);
    if (best.level == 0) return make_solution(inst, 0.0, {});
    return backtrack_fptas(run.table, inst, best.level);
}

inline Solution solve_approx(const KnapsackInstance& inst, double epsilon) {
    return solve_fptas(inst, resolution_for(inst.size(), epsilon));
}

struct CurvePoint {
    std::int64_t resolution = 0;
    std::size_t width = 0;
    double p_nn = 0.0;
    double p_opt = 0.0;
    double ratio = 0.0;
};

/// Solution quality as a function of cell width, against the brute-force optimum.
inline std::vector<CurvePoint> width_quality_curve(const KnapsackInstance& inst, std::span<const std::int64_t> resolutions) {
    const double opt = brute_force(inst).value;
    std::vector<CurvePoint> out;
    for (std::int64_t P : resolutions) {
        const FptasCell cell(P);
        const FptasRun run = run_fptas(cell, inst);
        CurvePoint pt;
        pt.resolution = P;
        pt.width = cell.network().stats().width;
        pt.p_nn = fptas_optimum(run.table).value();
        pt.p_opt = opt;
        pt.ratio = opt > 0.0 ? pt.p_nn / opt : 1.0;
        out.push_back(pt);
    }
    return out;
}

} // namespace relu_dp
