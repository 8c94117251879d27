#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "relu_dp/errors.hpp"

namespace relu_dp {

struct NeuronRef {
    std::uint32_t layer = 0;
    std::uint32_t index = 0;

    friend auto operator<=>(const NeuronRef&, const NeuronRef&) = default;
};

struct Arc {
    NeuronRef source;
    NeuronRef target;
    double weight = 0.0;

    friend bool operator==(const Arc&, const Arc&) = default;
};

struct NetworkStats {
    std::size_t depth = 0;
    std::size_t width = 0;
    std::size_t size = 0;
    std::size_t num_arcs = 0;

    friend bool operator==(const NetworkStats&, const NetworkStats&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const NetworkStats& s) {
    return os << "depth=" << s.depth << " width=" << s.width << " size=" << s.size
              << " arcs=" << s.num_arcs;
}

// Per-layer neuron outputs: layer 0 holds the inputs, hidden layers hold
// rectified outputs and the last layer holds raw (affine) activations.
using LayerActivations = std::vector<std::vector<double>>;

/// Layered feedforward ReLU network with arbitrary forward skip arcs.
///
/// Layer 0 is the input layer and the last layer the (linear) output layer;
/// every other neuron applies max{0, z}. Arcs may connect any layer to any
/// strictly later layer. Instances are immutable; evaluation is const and
/// reentrant.
class ReluNetwork {
public:
    ReluNetwork() = default;

    /// `biases[l]` must have `layer_sizes[l]` entries for l >= 1; `biases[0]`
    /// is ignored and may be empty. Arcs keep their relative order per target,
    /// which fixes the floating-point summation order.
    ReluNetwork(std::vector<std::size_t> layer_sizes, std::span<const Arc> arcs,
                std::vector<std::vector<double>> biases)
        : layer_sizes_(std::move(layer_sizes)) {
        if (layer_sizes_.size() < 2) {
            throw construction_error("network needs at least an input and an output layer");
        }
        layer_offset_.resize(layer_sizes_.size() + 1, 0);
        for (std::size_t l = 0; l < layer_sizes_.size(); ++l) {
            layer_offset_[l + 1] = layer_offset_[l] + layer_sizes_[l];
        }
        if (layer_offset_.back() >= std::numeric_limits<std::uint32_t>::max()) {
            throw construction_error("network exceeds 2^32 neurons");
        }
        bias_.assign(layer_offset_.back(), 0.0);
        if (biases.size() > layer_sizes_.size()) {
            throw construction_error("more bias layers than network layers");
        }
        for (std::size_t l = 1; l < biases.size(); ++l) {
            if (biases[l].empty()) continue;
            if (biases[l].size() != layer_sizes_[l]) {
                throw construction_error("bias vector size mismatch in layer " + std::to_string(l));
            }
            for (std::size_t i = 0; i < biases[l].size(); ++i) {
                if (!std::isfinite(biases[l][i])) throw construction_error("non-finite bias");
                bias_[layer_offset_[l] + i] = biases[l][i];
            }
        }

        packed_.reserve(arcs.size());
        for (const Arc& a : arcs) {
            check_ref(a.source);
            check_ref(a.target);
            if (a.source.layer >= a.target.layer) {
                throw construction_error("arc must strictly increase the layer index");
            }
            if (!std::isfinite(a.weight)) throw construction_error("non-finite arc weight");
            packed_.push_back({global(a.source), global(a.target), a.weight});
        }
        std::stable_sort(packed_.begin(), packed_.end(),
                         [](const Packed& x, const Packed& y) { return x.target < y.target; });

        arc_offset_.assign(layer_sizes_.size() + 1, 0);
        std::size_t cursor = 0;
        for (std::size_t l = 0; l < layer_sizes_.size(); ++l) {
            while (cursor < packed_.size() && packed_[cursor].target < layer_offset_[l + 1]) ++cursor;
            arc_offset_[l + 1] = cursor;
        }
    }

    std::size_t depth() const { return layer_sizes_.empty() ? 0 : layer_sizes_.size() - 1; }
    std::size_t layer_count() const { return layer_sizes_.size(); }
    const std::vector<std::size_t>& layer_sizes() const { return layer_sizes_; }
    std::size_t layer_size(std::size_t l) const { return layer_sizes_.at(l); }
    std::size_t input_size() const { return layer_sizes_.empty() ? 0 : layer_sizes_.front(); }
    std::size_t output_size() const { return layer_sizes_.empty() ? 0 : layer_sizes_.back(); }
    std::size_t num_arcs() const { return packed_.size(); }
    std::size_t num_neurons() const { return layer_offset_.empty() ? 0 : layer_offset_.back(); }

    NetworkStats stats() const {
        NetworkStats s;
        s.depth = depth();
        for (std::size_t l = 1; l + 1 < layer_sizes_.size(); ++l) {
            s.width = std::max(s.width, layer_sizes_[l]);
            s.size += layer_sizes_[l];
        }
        s.num_arcs = num_arcs();
        return s;
    }

    double bias(NeuronRef n) const {
        check_ref(n);
        return bias_[global(n)];
    }

    /// Arcs in storage order (grouped by target, insertion order within a target).
    Arc arc(std::size_t i) const {
        const Packed& p = packed_.at(i);
        return {local(p.source), local(p.target), p.weight};
    }

    std::vector<Arc> arcs() const {
        std::vector<Arc> out;
        out.reserve(packed_.size());
        for (std::size_t i = 0; i < packed_.size(); ++i) out.push_back(arc(i));
        return out;
    }

    std::vector<Arc> incoming(NeuronRef target) const {
        check_ref(target);
        const auto g = global(target);
        auto lo = std::lower_bound(packed_.begin(), packed_.end(), g,
                                   [](const Packed& p, std::uint32_t t) { return p.target < t; });
        std::vector<Arc> out;
        for (; lo != packed_.end() && lo->target == g; ++lo) {
            out.push_back({local(lo->source), target, lo->weight});
        }
        return out;
    }

    std::optional<std::size_t> find_arc(NeuronRef source, NeuronRef target) const {
        check_ref(source);
        check_ref(target);
        const auto gs = global(source);
        const auto gt = global(target);
        auto lo = std::lower_bound(packed_.begin(), packed_.end(), gt,
                                   [](const Packed& p, std::uint32_t t) { return p.target < t; });
        for (; lo != packed_.end() && lo->target == gt; ++lo) {
            if (lo->source == gs) return static_cast<std::size_t>(lo - packed_.begin());
        }
        return std::nullopt;
    }

    /// Copy with one arc weight replaced (fault injection in harness tests).
    ReluNetwork with_arc_weight(std::size_t i, double weight) const {
        if (!std::isfinite(weight)) throw construction_error("non-finite arc weight");
        ReluNetwork copy = *this;
        copy.packed_.at(i).weight = weight;
        return copy;
    }

    ReluNetwork with_bias(NeuronRef n, double value) const {
        check_ref(n);
        if (n.layer == 0) throw construction_error("input neurons carry no bias");
        if (!std::isfinite(value)) throw construction_error("non-finite bias");
        ReluNetwork copy = *this;
        copy.bias_[global(n)] = value;
        return copy;
    }

    std::vector<double> evaluate(std::span<const double> input) const {
        std::vector<double> values;
        run(input, values);
        const std::size_t out_begin = layer_offset_[layer_sizes_.size() - 1];
        return {values.begin() + static_cast<std::ptrdiff_t>(out_begin), values.end()};
    }

    LayerActivations evaluate_trace(std::span<const double> input) const {
        std::vector<double> values;
        run(input, values);
        LayerActivations out(layer_sizes_.size());
        for (std::size_t l = 0; l < layer_sizes_.size(); ++l) {
            out[l].assign(values.begin() + static_cast<std::ptrdiff_t>(layer_offset_[l]),
                          values.begin() + static_cast<std::ptrdiff_t>(layer_offset_[l + 1]));
        }
        return out;
    }

    /// Number of arcs on a longest input-to-any-neuron path. Equals depth()
    /// unless some layer is empty or bypassed entirely.
    std::size_t longest_path() const {
        std::vector<std::size_t> len(num_neurons(), 0);
        std::size_t best = 0;
        for (const Packed& p : packed_) {
            len[p.target] = std::max(len[p.target], len[p.source] + 1);
            best = std::max(best, len[p.target]);
        }
        return best;
    }

    friend bool operator==(const ReluNetwork& a, const ReluNetwork& b) {
        return a.layer_sizes_ == b.layer_sizes_ && a.bias_ == b.bias_ && a.packed_ == b.packed_;
    }

private:
    struct Packed {
        std::uint32_t source;
        std::uint32_t target;
        double weight;
        friend bool operator==(const Packed&, const Packed&) = default;
    };

    void check_ref(NeuronRef n) const {
        if (n.layer >= layer_sizes_.size() || n.index >= layer_sizes_[n.layer]) {
            throw construction_error("neuron reference (" + std::to_string(n.layer) + "," +
                                     std::to_string(n.index) + ") out of range");
        }
    }

    std::uint32_t global(NeuronRef n) const {
        return static_cast<std::uint32_t>(layer_offset_[n.layer] + n.index);
    }

    NeuronRef local(std::uint32_t g) const {
        auto it = std::upper_bound(layer_offset_.begin(), layer_offset_.end(), std::size_t{g});
        const auto l = static_cast<std::size_t>(it - layer_offset_.begin()) - 1;
        return {static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(g - layer_offset_[l])};
    }

    void run(std::span<const double> input, std::vector<double>& values) const {
        if (layer_sizes_.empty()) throw construction_error("evaluating an empty network");
        if (input.size() != input_size()) {
            throw input_shape_error("expected " + std::to_string(input_size()) + " inputs, got " +
                                    std::to_string(input.size()));
        }
        values = bias_;
        std::copy(input.begin(), input.end(), values.begin());
        const std::size_t last = layer_sizes_.size() - 1;
        for (std::size_t l = 1; l <= last; ++l) {
            for (std::size_t a = arc_offset_[l]; a < arc_offset_[l + 1]; ++a) {
                const Packed& p = packed_[a];
                values[p.target] += p.weight * values[p.source];
            }
            for (std::size_t v = layer_offset_[l]; v < layer_offset_[l + 1]; ++v) {
                if (!std::isfinite(values[v])) {
                    throw numeric_overflow_error("non-finite activation in layer " + std::to_string(l));
                }
                if (l != last && values[v] < 0.0) values[v] = 0.0;
            }
        }
    }

    std::vector<std::size_t> layer_sizes_;
    std::vector<std::size_t> layer_offset_;
    std::vector<std::size_t> arc_offset_;
    std::vector<double> bias_;
    std::vector<Packed> packed_;
};

inline NetworkStats stats(const ReluNetwork& net) { return net.stats(); }

inline std::vector<double> evaluate(const ReluNetwork& net, std::span<const double> input) {
    return net.evaluate(input);
}

} // namespace relu_dp
