#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relu_dp/builder.hpp"
#include "relu_dp/errors.hpp"
#include "relu_dp/gadgets.hpp"
#include "relu_dp/knapsack.hpp"
#include "relu_dp/network.hpp"

namespace relu_dp {

inline constexpr std::int64_t dp_cell_max_p_star = std::int64_t{1} << 20;

/// One step of the exact profit-indexed knapsack DP as a fixed-weight ReLU network.
///
/// Inputs are the previous state f_in(1..p*), the item profit p_in and the
/// item size s_in; outputs are f_out(1..p*). Hidden layers:
///   1. o1+(k) = max{0, 2(p_in - k)}, o1-(k) = max{0, 2(k - p_in)}        (2p* units)
///   2. o2(p,k) = max{0, f_in(p-k) - o1+(k) - o1-(k)},  k < p              (p*(p*-1)/2 units)
///   3. o3(p)  = max{0, f_in(p) - s_in - sum_k o2(p,k)}                    (p* units)
/// and f_out(p) = f_in(p) - o3(p).
class DpCell {
public:
    explicit DpCell(std::int64_t p_star) : p_star_(p_star) {
        if (p_star < 1 || p_star > dp_cell_max_p_star) {
            throw argument_error("DP cell: p* must lie in [1, 2^20]");
        }
        const std::size_t ps = static_cast<std::size_t>(p_star);
        NetworkBuilder b(ps + 2);
        const AffineExpr p_in = b.input(ps);
        const AffineExpr s_in = b.input(ps + 1);
        auto f_in = [&](std::int64_t p) { return b.input(static_cast<std::size_t>(p - 1)); };

        std::vector<AffineExpr> plus, minus;
        plus.reserve(ps);
        minus.reserve(ps);
        for (std::int64_t k = 1; k <= p_star; ++k) plus.push_back(b.relu(2.0 * p_in - 2.0 * static_cast<double>(k), 1));
        for (std::int64_t k = 1; k <= p_star; ++k) minus.push_back(b.relu(2.0 * static_cast<double>(k) - 2.0 * p_in, 1));

        std::vector<std::vector<AffineExpr>> selected(ps);
        for (std::int64_t p = 2; p <= p_star; ++p) {
            auto& row = selected[static_cast<std::size_t>(p - 1)];
            for (std::int64_t k = 1; k < p; ++k) {
                const auto kk = static_cast<std::size_t>(k - 1);
                row.push_back(b.relu(f_in(p - k) - plus[kk] - minus[kk], 2));
            }
        }

        for (std::int64_t p = 1; p <= p_star; ++p) {
            AffineExpr pre = f_in(p) - s_in;
            for (const auto& o2 : selected[static_cast<std::size_t>(p - 1)]) pre -= o2;
            const AffineExpr o3 = b.relu(pre, 3);
            b.add_output(f_in(p) - o3);
        }
        net_ = std::move(b).build(4);
    }

    const ReluNetwork& network() const { return net_; }
    std::int64_t p_star() const { return p_star_; }

    std::size_t input_size() const { return net_.input_size(); }
    std::size_t profit_input() const { return static_cast<std::size_t>(p_star_); }
    std::size_t size_input() const { return static_cast<std::size_t>(p_star_) + 1; }

    NeuronRef o1_plus(std::int64_t k) const { return {1, idx(k - 1)}; }
    NeuronRef o1_minus(std::int64_t k) const { return {1, idx(p_star_ + k - 1)}; }
    NeuronRef o2(std::int64_t p, std::int64_t k) const { return {2, idx((p - 1) * (p - 2) / 2 + (k - 1))}; }
    NeuronRef o3(std::int64_t p) const { return {3, idx(p - 1)}; }

    /// Cell input vector for one step. Rejects non-integral profits.
    std::vector<double> step_input(std::span<const double> state, double p_in, double s_in) const {
        if (state.size() != static_cast<std::size_t>(p_star_)) {
            throw input_shape_error("DP state must have p* entries");
        }
        if (!std::isfinite(p_in) || std::floor(p_in) != p_in) {
            throw validation_error("item profit fed to the DP cell must be integral");
        }
        std::vector<double> x(state.begin(), state.end());
        x.push_back(p_in);
        x.push_back(s_in);
        return x;
    }

    std::vector<double> step(std::span<const double> state, double p_in, double s_in) const {
        return net_.evaluate(step_input(state, p_in, s_in));
    }

    LayerActivations step_trace(std::span<const double> state, double p_in, double s_in) const {
        return net_.evaluate_trace(step_input(state, p_in, s_in));
    }

private:
    static std::uint32_t idx(std::int64_t v) { return static_cast<std::uint32_t>(v); }

    std::int64_t p_star_;
    ReluNetwork net_;
};

inline DpCell build_dp_cell(std::int64_t p_star) { return DpCell(p_star); }

/// State sequence of a recurrent run: states[i] is the state after i items.
struct DpRun {
    std::vector<std::vector<double>> states;
    std::vector<LayerActivations> traces; // per step, only when recorded
};

inline std::vector<double> dp_initial_state(std::int64_t p_star) {
    return std::vector<double>(static_cast<std::size_t>(p_star), truncation_value);
}

/// Feeds the items one by one through the cell, starting from the all-2 state.
inline DpRun run_recurrent(const DpCell& cell, const KnapsackInstance& inst, bool record_activations = false) {
    DpRun run;
    run.states.reserve(inst.size() + 1);
    run.states.push_back(dp_initial_state(cell.p_star()));
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const auto& prev = run.states.back();
        const auto p_in = static_cast<double>(inst.profit(i));
        if (record_activations) {
            auto trace = cell.step_trace(prev, p_in, inst.item_size(i));
            run.states.push_back(trace.back());
            run.traces.push_back(std::move(trace));
        } else {
            run.states.push_back(cell.step(prev, p_in, inst.item_size(i)));
        }
    }
    return run;
}

/// Runs the DP network and recovers an optimal subset by backtracking over
/// the recorded states. `p_star` must bound the optimum (Σp_i always does).
inline Solution solve_exact(const KnapsackInstance& inst, std::int64_t p_star) {
    const DpCell cell(p_star);
    const DpRun run = run_recurrent(cell, inst);
    const DpTable table = DpTable::from_columns(run.states);
    const std::int64_t best = optimum_value(table);
    if (best == 0) return make_solution(inst, 0.0, {});
    return backtrack(table, inst, best);
}

inline Solution solve_exact(const KnapsackInstance& inst) { return solve_exact(inst, inst.total_profit()); }

/// The DP network unrolled over n items. Inputs: the p* initial state
/// entries, then (p_i, s_i) for each item; outputs: the final state.
inline ReluNetwork unfold_dp(std::int64_t p_star, std::size_t n) {
    const DpCell cell(p_star);
    std::vector<Feedback> feedback;
    for (std::size_t p = 0; p < static_cast<std::size_t>(p_star); ++p) feedback.push_back({p, p});
    return unfold(cell.network(), n, feedback, StateLink::rectified);
}

inline std::vector<double> unfolded_dp_input(const KnapsackInstance& inst, std::int64_t p_star) {
    std::vector<double> x = dp_initial_state(p_star);
    for (std::size_t i = 0; i < inst.size(); ++i) {
        x.push_back(static_cast<double>(inst.profit(i)));
        x.push_back(inst.item_size(i));
    }
    return x;
}

} // namespace relu_dp
