#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relu_dp/errors.hpp"
#include "relu_dp/network.hpp"

namespace relu_dp {

/// Affine form `constant + sum(coeff * neuron output)` over already-placed neurons.
///
/// Used to express values that never get their own neuron: network outputs,
/// skip-forwarded inputs and the linear tail of a min gadget that is folded
/// into whatever consumes it.
class AffineExpr {
public:
    using Term = std::pair<NeuronRef, double>;

    AffineExpr() = default;
    explicit AffineExpr(double constant) : constant_(constant) {}
    AffineExpr(NeuronRef n, double coeff = 1.0) : terms_{{n, coeff}} {}

    const std::vector<Term>& terms() const { return terms_; }
    double constant() const { return constant_; }

    /// Highest layer referenced, 0 for expressions over inputs or constants only.
    std::uint32_t max_layer() const {
        std::uint32_t m = 0;
        for (const auto& [n, c] : terms_) m = std::max(m, n.layer);
        return m;
    }

    AffineExpr& operator+=(const AffineExpr& o) {
        terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
        constant_ += o.constant_;
        return *this;
    }
    AffineExpr& operator-=(const AffineExpr& o) { return *this += (-o); }
    AffineExpr& operator+=(double c) {
        constant_ += c;
        return *this;
    }
    AffineExpr& operator-=(double c) {
        constant_ -= c;
        return *this;
    }
    AffineExpr& operator*=(double s) {
        for (auto& t : terms_) t.second *= s;
        constant_ *= s;
        return *this;
    }

    AffineExpr operator-() const {
        AffineExpr r = *this;
        r *= -1.0;
        return r;
    }

    friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
    friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
    friend AffineExpr operator+(AffineExpr a, double c) { return a += c; }
    friend AffineExpr operator+(double c, AffineExpr a) { return a += c; }
    friend AffineExpr operator-(AffineExpr a, double c) { return a -= c; }
    friend AffineExpr operator-(double c, const AffineExpr& a) { return (-a) += c; }
    friend AffineExpr operator*(double s, AffineExpr a) { return a *= s; }
    friend AffineExpr operator*(AffineExpr a, double s) { return a *= s; }

    /// Merge repeated neurons (first occurrence keeps its position) and drop zero coefficients.
    std::vector<Term> merged_terms() const {
        std::vector<Term> out;
        out.reserve(terms_.size());
        if (terms_.size() <= 16) {
            for (const auto& t : terms_) {
                auto it = std::find_if(out.begin(), out.end(),
                                       [&](const Term& o) { return o.first == t.first; });
                if (it == out.end()) {
                    out.push_back(t);
                } else {
                    it->second += t.second;
                }
            }
        } else {
            std::unordered_map<std::uint64_t, std::size_t> slot;
            slot.reserve(terms_.size());
            for (const auto& t : terms_) {
                const std::uint64_t key = (std::uint64_t{t.first.layer} << 32) | t.first.index;
                auto [it, fresh] = slot.try_emplace(key, out.size());
                if (fresh) {
                    out.push_back(t);
                } else {
                    out[it->second].second += t.second;
                }
            }
        }
        std::erase_if(out, [](const Term& t) { return t.second == 0.0; });
        return out;
    }

private:
    std::vector<Term> terms_;
    double constant_ = 0.0;
};

/// Incrementally assembles a ReluNetwork from affine expressions.
///
/// Hidden neurons are placed either in an explicit layer or, by default, one
/// layer above the deepest neuron they read. Outputs are collected as affine
/// expressions and materialized into the final layer by `build`.
class NetworkBuilder {
public:
    explicit NetworkBuilder(std::size_t num_inputs) : layer_sizes_{num_inputs} { biases_.emplace_back(); }

    std::size_t num_inputs() const { return layer_sizes_.front(); }

    AffineExpr input(std::size_t i) const {
        if (i >= num_inputs()) throw construction_error("input index out of range");
        return AffineExpr(NeuronRef{0, static_cast<std::uint32_t>(i)});
    }

    std::vector<AffineExpr> inputs() const {
        std::vector<AffineExpr> v;
        v.reserve(num_inputs());
        for (std::size_t i = 0; i < num_inputs(); ++i) v.push_back(input(i));
        return v;
    }

    /// Adds a rectified neuron computing max{0, expr}.
    NeuronRef add_relu(const AffineExpr& expr, std::optional<std::size_t> layer = std::nullopt) {
        const std::size_t min_layer = expr.max_layer() + 1u;
        const std::size_t l = layer.value_or(min_layer);
        if (l < min_layer) {
            throw construction_error("hidden neuron placed at or below a layer it reads from");
        }
        if (!std::isfinite(expr.constant())) throw construction_error("non-finite bias");
        while (layer_sizes_.size() <= l) {
            layer_sizes_.push_back(0);
            biases_.emplace_back();
        }
        const NeuronRef ref{static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(layer_sizes_[l]++)};
        biases_[l].push_back(expr.constant());
        for (const auto& [src, w] : expr.merged_terms()) arcs_.push_back({src, ref, w});
        return ref;
    }

    AffineExpr relu(const AffineExpr& expr, std::optional<std::size_t> layer = std::nullopt) {
        return AffineExpr(add_relu(expr, layer));
    }

    void add_output(AffineExpr expr) { outputs_.push_back(std::move(expr)); }

    /// Highest layer holding a hidden neuron (0 if there is none yet).
    std::size_t hidden_depth() const { return layer_sizes_.size() - 1; }

    /// Finalizes the network. The output layer defaults to one above the
    /// deepest hidden neuron or output dependency.
    ReluNetwork build(std::optional<std::size_t> output_layer = std::nullopt) && {
        std::size_t needed = hidden_depth() + 1;
        for (const auto& o : outputs_) needed = std::max<std::size_t>(needed, o.max_layer() + 1u);
        const std::size_t out_l = output_layer.value_or(needed);
        if (out_l < needed) throw construction_error("output layer below hidden layers");
        while (layer_sizes_.size() < out_l) {
            layer_sizes_.push_back(0);
            biases_.emplace_back();
        }
        layer_sizes_.push_back(outputs_.size());
        biases_.emplace_back();
        for (std::size_t i = 0; i < outputs_.size(); ++i) {
            const NeuronRef ref{static_cast<std::uint32_t>(out_l), static_cast<std::uint32_t>(i)};
            biases_[out_l].push_back(outputs_[i].constant());
            for (const auto& [src, w] : outputs_[i].merged_terms()) arcs_.push_back({src, ref, w});
        }
        return ReluNetwork(std::move(layer_sizes_), arcs_, std::move(biases_));
    }

private:
    std::vector<std::size_t> layer_sizes_;
    std::vector<std::vector<double>> biases_;
    std::vector<Arc> arcs_;
    std::vector<AffineExpr> outputs_;
};

/// Copies `cell` into `builder`, wiring its inputs to `cell_inputs` and
/// shifting hidden layer l to `layer_offset + l`. Returns the cell's outputs as
/// affine expressions (the output layer itself is folded into its consumers).
inline std::vector<AffineExpr> embed(NetworkBuilder& builder, const ReluNetwork& cell,
                                     std::span<const AffineExpr> cell_inputs,
                                     std::optional<std::size_t> layer_offset = std::nullopt) {
    if (cell_inputs.size() != cell.input_size()) {
        throw construction_error("embed: cell input count mismatch");
    }
    std::uint32_t base = 0;
    for (const auto& e : cell_inputs) base = std::max(base, e.max_layer());
    const std::size_t offset = layer_offset.value_or(base);
    if (offset < base) throw construction_error("embed: layer offset below cell inputs");

    std::vector<std::vector<AffineExpr>> mapped(cell.layer_count());
    mapped[0].assign(cell_inputs.begin(), cell_inputs.end());
    const std::vector<Arc> arcs = cell.arcs();
    std::size_t cursor = 0;
    const std::size_t last = cell.layer_count() - 1;
    for (std::size_t l = 1; l <= last; ++l) {
        mapped[l].reserve(cell.layer_size(l));
        for (std::size_t i = 0; i < cell.layer_size(l); ++i) {
            const NeuronRef self{static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(i)};
            AffineExpr e(cell.bias(self));
            while (cursor < arcs.size() && arcs[cursor].target == self) {
                const Arc& a = arcs[cursor++];
                e += a.weight * mapped[a.source.layer][a.source.index];
            }
            if (l == last) {
                mapped[l].push_back(std::move(e));
            } else {
                mapped[l].push_back(builder.relu(e, offset + l));
            }
        }
    }
    return mapped[last];
}

} // namespace relu_dp
