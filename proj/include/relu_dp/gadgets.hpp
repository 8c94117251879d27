#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "relu_dp/builder.hpp"
#include "relu_dp/errors.hpp"
#include "relu_dp/network.hpp"

namespace relu_dp {

/// min{a, b} as b - max{0, b - a}: one rectified neuron, linear tail left open.
inline AffineExpr min2(NetworkBuilder& b, const AffineExpr& lhs, const AffineExpr& rhs,
                       std::optional<std::size_t> layer = std::nullopt) {
    return rhs - b.relu(rhs - lhs, layer);
}

/// max{a, b} as a + max{0, b - a}.
inline AffineExpr max2(NetworkBuilder& b, const AffineExpr& lhs, const AffineExpr& rhs,
                       std::optional<std::size_t> layer = std::nullopt) {
    return lhs + b.relu(rhs - lhs, layer);
}

/// Minimum of `values` by a balanced pairwise tree of min2 units.
///
/// Each tree level costs one hidden layer: the affine tail of a min2 unit is
/// folded into the next level's rectifier, so n values need ceil(log2 n) hidden
/// layers and n - 1 neurons.
inline AffineExpr min_of(NetworkBuilder& b, std::vector<AffineExpr> values) {
    if (values.empty()) throw construction_error("minimum of an empty set");
    while (values.size() > 1) {
        std::vector<AffineExpr> next;
        next.reserve((values.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < values.size(); i += 2) {
            next.push_back(min2(b, values[i], values[i + 1]));
        }
        if (values.size() % 2 == 1) next.push_back(std::move(values.back()));
        values = std::move(next);
    }
    return std::move(values.front());
}

/// The two-input minimum network: one hidden unit, depth 2, four arcs.
inline ReluNetwork min2_gadget() {
    NetworkBuilder b(2);
    b.add_output(min2(b, b.input(0), b.input(1)));
    return std::move(b).build();
}

inline ReluNetwork min_n_gadget(std::size_t n) {
    if (n == 0) throw argument_error("min_n_gadget: need at least one input");
    NetworkBuilder b(n);
    b.add_output(min_of(b, b.inputs()));
    return std::move(b).build();
}

/// How the fed-back state crosses step boundaries in `unfold`.
enum class StateLink {
    // Each fed-back value passes through its own rectified neuron. Matches
    // the usual RNN unrolling (depth = steps * cell depth) but requires the
    // fed-back values to be non-negative.
    rectified,
    // The cell's affine output map is folded into the next step's first
    // layer. Exact for any sign; depth = steps * (cell depth - 1) + 1.
    affine,
};

struct Feedback {
    std::size_t output;
    std::size_t input;
};

/// Input layout of an unfolded network: state inputs first (ascending cell
/// input index), then each step's external inputs in ascending cell order.
struct UnfoldLayout {
    std::vector<std::size_t> state_inputs;
    std::vector<std::size_t> external_inputs;
    std::size_t steps = 0;

    std::size_t input_size() const { return state_inputs.size() + steps * external_inputs.size(); }
};

inline UnfoldLayout unfold_layout(const ReluNetwork& cell, std::size_t steps,
                                  std::span<const Feedback> feedback) {
    std::set<std::size_t> outs;
    std::set<std::size_t> ins;
    for (const auto& f : feedback) {
        if (f.output >= cell.output_size() || f.input >= cell.input_size()) {
            throw construction_error("unfold: feedback index out of range");
        }
        if (!outs.insert(f.output).second || !ins.insert(f.input).second) {
            throw construction_error("unfold: feedback map is not injective");
        }
    }
    if (steps == 0) throw construction_error("unfold: need at least one step");
    UnfoldLayout layout;
    layout.steps = steps;
    layout.state_inputs.assign(ins.begin(), ins.end());
    for (std::size_t i = 0; i < cell.input_size(); ++i) {
        if (!ins.contains(i)) layout.external_inputs.push_back(i);
    }
    return layout;
}

/// Unrolls `steps` applications of `cell` into one feedforward network whose
/// outputs are the final step's outputs.
inline ReluNetwork unfold(const ReluNetwork& cell, std::size_t steps, std::span<const Feedback> feedback,
                          StateLink link = StateLink::rectified) {
    const UnfoldLayout layout = unfold_layout(cell, steps, feedback);
    const std::size_t depth = cell.depth();
    const std::size_t stride = link == StateLink::rectified ? depth : depth - 1;

    NetworkBuilder b(layout.input_size());
    std::vector<AffineExpr> cell_in(cell.input_size());
    std::size_t next_input = 0;
    for (std::size_t i : layout.state_inputs) cell_in[i] = b.input(next_input++);

    std::vector<AffineExpr> out;
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t i : layout.external_inputs) cell_in[i] = b.input(next_input++);
        out = embed(b, cell, cell_in, t * stride);
        if (t + 1 == steps) break;
        for (const auto& f : feedback) {
            cell_in[f.input] = link == StateLink::rectified ? b.relu(out[f.output], (t + 1) * stride)
                                                            : out[f.output];
        }
    }
    for (auto& e : out) b.add_output(std::move(e));
    return std::move(b).build(steps * stride + (link == StateLink::rectified ? 0 : 1));
}

inline ReluNetwork unfold(const ReluNetwork& cell, std::size_t steps, std::initializer_list<Feedback> feedback,
                          StateLink link = StateLink::rectified) {
    return unfold(cell, steps, std::span<const Feedback>(feedback.begin(), feedback.size()), link);
}

} // namespace relu_dp
