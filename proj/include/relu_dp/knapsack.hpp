#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relu_dp/errors.hpp"

namespace relu_dp {

/// Slack allowed on every "total size <= 1" test.
inline constexpr double capacity_tolerance = 1e-9;

/// Value standing in for +infinity in truncated tables (capacity is 1).
inline constexpr double truncation_value = 2.0;

/// Largest profit (and profit sum) accepted; keeps every profit exact in a double.
inline constexpr std::int64_t max_profit = std::int64_t{1} << 40;

/// Knapsack instance with integral profits and sizes in ]0,1]; capacity is 1.
class KnapsackInstance {
public:
    KnapsackInstance(std::vector<std::int64_t> profits, std::vector<double> sizes)
        : profits_(std::move(profits)), sizes_(std::move(sizes)) {
        if (profits_.empty()) throw validation_error("instance needs at least one item");
        if (profits_.size() != sizes_.size()) {
            throw validation_error("profits and sizes differ in length");
        }
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < profits_.size(); ++i) {
            if (profits_[i] < 1 || profits_[i] > max_profit) {
                throw validation_error("profit of item " + std::to_string(i) + " outside [1, 2^40]");
            }
            sum += profits_[i];
            if (sum > max_profit) throw validation_error("profit sum exceeds 2^40");
            if (!(sizes_[i] > 0.0 && sizes_[i] <= 1.0)) {
                throw validation_error("size of item " + std::to_string(i) + " outside ]0,1]");
            }
        }
        total_profit_ = sum;
    }

    /// Accepts profits given as reals (e.g. parsed JSON) and rejects non-integral ones.
    static KnapsackInstance from_real_profits(std::span<const double> profits, std::vector<double> sizes) {
        std::vector<std::int64_t> p;
        p.reserve(profits.size());
        for (std::size_t i = 0; i < profits.size(); ++i) {
            const double v = profits[i];
            if (!std::isfinite(v) || std::floor(v) != v) {
                throw validation_error("profit of item " + std::to_string(i) + " is not integral");
            }
            if (v < 1.0 || v > static_cast<double>(max_profit)) {
                throw validation_error("profit of item " + std::to_string(i) + " outside [1, 2^40]");
            }
            p.push_back(static_cast<std::int64_t>(v));
        }
        return KnapsackInstance(std::move(p), std::move(sizes));
    }

    std::size_t size() const { return profits_.size(); }
    std::int64_t profit(std::size_t i) const { return profits_.at(i); }
    double item_size(std::size_t i) const { return sizes_.at(i); }
    const std::vector<std::int64_t>& profits() const { return profits_; }
    const std::vector<double>& sizes() const { return sizes_; }
    std::int64_t total_profit() const { return total_profit_; }
    std::int64_t max_item_profit() const { return *std::max_element(profits_.begin(), profits_.end()); }

    friend bool operator==(const KnapsackInstance&, const KnapsackInstance&) = default;

private:
    std::vector<std::int64_t> profits_;
    std::vector<double> sizes_;
    std::int64_t total_profit_ = 0;
};

/// Objective value plus the chosen items (0-based, ascending).
struct Solution {
    double value = 0.0;
    std::vector<std::size_t> items;
    std::int64_t profit = 0;
    double size = 0.0;
};

inline Solution make_solution(const KnapsackInstance& inst, double value, std::vector<std::size_t> items) {
    std::sort(items.begin(), items.end());
    Solution s{value, std::move(items), 0, 0.0};
    for (std::size_t i : s.items) {
        s.profit += inst.profit(i);
        s.size += inst.item_size(i);
    }
    return s;
}

/// Truncated profit-indexed table: value(p, i) is the least total size of a
/// subset of the first i items with profit >= p, capped at 2.
class DpTable {
public:
    DpTable(std::int64_t p_star, std::size_t items) : p_star_(p_star), items_(items) {
        if (p_star < 1) throw argument_error("p* must be positive");
        values_.assign(static_cast<std::size_t>(p_star) * (items + 1), truncation_value);
    }

    /// Table from per-step state vectors (column i = state after i items).
    static DpTable from_columns(const std::vector<std::vector<double>>& columns) {
        if (columns.empty() || columns.front().empty()) throw argument_error("empty state sequence");
        DpTable t(static_cast<std::int64_t>(columns.front().size()), columns.size() - 1);
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i].size() != columns.front().size()) throw argument_error("ragged state sequence");
            for (std::size_t p = 0; p < columns[i].size(); ++p) t.values_[t.slot(static_cast<std::int64_t>(p) + 1, i)] = columns[i][p];
        }
        return t;
    }

    std::int64_t p_star() const { return p_star_; }
    std::size_t items() const { return items_; }

    /// Starting-value convention: 0 for every p <= 0.
    double value(std::int64_t p, std::size_t i) const {
        if (p <= 0) return 0.0;
        return values_.at(slot(p, i));
    }

    void set(std::int64_t p, std::size_t i, double v) { values_.at(slot(p, i)) = v; }

    std::vector<double> column(std::size_t i) const {
        std::vector<double> c(static_cast<std::size_t>(p_star_));
        for (std::int64_t p = 1; p <= p_star_; ++p) c[static_cast<std::size_t>(p - 1)] = value(p, i);
        return c;
    }

private:
    std::size_t slot(std::int64_t p, std::size_t i) const {
        if (p < 1 || p > p_star_ || i > items_) throw argument_error("table index out of range");
        return i * static_cast<std::size_t>(p_star_) + static_cast<std::size_t>(p - 1);
    }

    std::int64_t p_star_;
    std::size_t items_;
    std::vector<double> values_;
};

/// The classical profit-indexed knapsack recursion truncated at 2.
inline DpTable dp_table(const KnapsackInstance& inst, std::int64_t p_star) {
    if (p_star < 1) throw argument_error("p* must be positive");
    DpTable t(p_star, inst.size());
    for (std::size_t i = 1; i <= inst.size(); ++i) {
        const std::int64_t pi = inst.profit(i - 1);
        const double si = inst.item_size(i - 1);
        for (std::int64_t p = 1; p <= p_star; ++p) {
            const double skip = t.value(p, i - 1);
            const double take = t.value(p - pi, i - 1) + si;
            t.set(p, i, std::min({skip, take, truncation_value}));
        }
    }
    return t;
}

/// max{p : value(p, n) <= 1 + tol}, or 0 when no profit level fits.
inline std::int64_t optimum_value(const DpTable& table, double tol = capacity_tolerance) {
    for (std::int64_t p = table.p_star(); p >= 1; --p) {
        const double v = table.value(p, table.items());
        if (v < truncation_value && v <= 1.0 + tol) return p;
    }
    return 0;
}

inline constexpr std::size_t brute_force_max_items = 25;

/// Exhaustive search over all 2^n subsets. Ties on profit go to the
/// lexicographically smallest index set.
inline Solution brute_force(const KnapsackInstance& inst, double tol = capacity_tolerance) {
    const std::size_t n = inst.size();
    if (n > brute_force_max_items) {
        throw size_guard_error("brute force limited to " + std::to_string(brute_force_max_items) + " items");
    }
    auto as_items = [n](std::uint32_t mask) {
        std::vector<std::size_t> v;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1u) v.push_back(i);
        }
        return v;
    };
    std::int64_t best_profit = 0;
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
        std::int64_t profit = 0;
        double size = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1u) {
                profit += inst.profit(i);
                size += inst.item_size(i);
            }
        }
        if (size > 1.0 + tol || profit < best_profit) continue;
        if (profit > best_profit || as_items(mask) < as_items(best_mask)) {
            best_profit = profit;
            best_mask = mask;
        }
    }
    return make_solution(inst, static_cast<double>(best_profit), as_items(best_mask));
}

/// Recovers a subset reaching `target_p` by walking the table backwards.
/// Item i is taken only when the take-branch was strictly better (by more
/// than tol); ties keep the item out.
inline Solution backtrack(const DpTable& table, const KnapsackInstance& inst, std::int64_t target_p,
                          double tol = capacity_tolerance) {
    if (table.items() != inst.size()) throw argument_error("table does not match instance");
    if (target_p < 1 || target_p > table.p_star()) throw infeasible_error("target profit outside [1, p*]");
    const double final_size = table.value(target_p, inst.size());
    if (!(final_size < truncation_value && final_size <= 1.0 + tol)) {
        throw infeasible_error("no subset of size <= 1 reaches profit " + std::to_string(target_p));
    }
    std::vector<std::size_t> chosen;
    std::int64_t p = target_p;
    for (std::size_t i = inst.size(); i >= 1 && p > 0; --i) {
        if (table.value(p, i) < table.value(p, i - 1) - tol) {
            chosen.push_back(i - 1);
            p -= inst.profit(i - 1);
        }
    }
    if (p > 0) throw infeasible_error("table is inconsistent with the instance");
    return make_solution(inst, static_cast<double>(target_p), std::move(chosen));
}

// ---------------------------------------------------------------------------
// Rounded (approximation) recursion.

/// Smallest integer k with k * den >= num (den > 0).
inline std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw argument_error("ceil_div: non-positive denominator");
    if (num >= 0) return (num + den - 1) / den;
    return -((-num) / den);
}

/// Granularity scaled by the resolution: P * max{1, prefix/P} = max{P, prefix}.
/// Always integral, which keeps every comparison below in exact integers.
inline std::int64_t scaled_granularity(std::int64_t resolution, std::int64_t prefix_profit) {
    return std::max(resolution, prefix_profit);
}

struct SelectionIndices {
    std::int64_t without_item = 0; // smallest k with k*d_old >= p*d_new
    std::int64_t with_item = 0;    // smallest k with k*d_old + p_in >= p*d_new (may be <= 0)
};

inline SelectionIndices selection_indices(std::int64_t resolution, std::int64_t scaled_old,
                                          std::int64_t scaled_new, std::int64_t item_profit,
                                          std::int64_t p) {
    return {ceil_div(p * scaled_new, scaled_old),
            ceil_div(p * scaled_new - item_profit * resolution, scaled_old)};
}

/// g(p, i) values of the rounded recursion together with the profit prefix
/// sums and granularities driving it.
class FptasTable {
public:
    FptasTable(std::int64_t resolution, std::size_t items) : resolution_(resolution), items_(items) {
        if (resolution < 1) throw argument_error("resolution P must be positive");
        values_.assign(static_cast<std::size_t>(resolution) * (items + 1), truncation_value);
        prefix_.assign(items + 1, 0);
    }

    std::int64_t resolution() const { return resolution_; }
    std::size_t items() const { return items_; }

    double value(std::int64_t p, std::size_t i) const { return values_.at(slot(p, i)); }
    void set(std::int64_t p, std::size_t i, double v) { values_.at(slot(p, i)) = v; }

    /// Profit of the first i items (p*_i).
    std::int64_t prefix_profit(std::size_t i) const { return prefix_.at(i); }
    void set_prefix_profit(std::size_t i, std::int64_t v) { prefix_.at(i) = v; }

    /// P * d_i, an integer.
    std::int64_t scaled_granularity(std::size_t i) const {
        return relu_dp::scaled_granularity(resolution_, prefix_profit(i));
    }
    double granularity(std::size_t i) const {
        return static_cast<double>(scaled_granularity(i)) / static_cast<double>(resolution_);
    }

    std::vector<double> column(std::size_t i) const {
        std::vector<double> c(static_cast<std::size_t>(resolution_));
        for (std::int64_t p = 1; p <= resolution_; ++p) c[static_cast<std::size_t>(p - 1)] = value(p, i);
        return c;
    }

private:
    std::size_t slot(std::int64_t p, std::size_t i) const {
        if (p < 1 || p > resolution_ || i > items_) throw argument_error("table index out of range");
        return i * static_cast<std::size_t>(resolution_) + static_cast<std::size_t>(p - 1);
    }

    std::int64_t resolution_;
    std::size_t items_;
    std::vector<double> values_;
    std::vector<std::int64_t> prefix_;
};

/// Direct (non-network) evaluation of the rounded recursion with resolution P.
inline FptasTable fptas_reference(const KnapsackInstance& inst, std::int64_t resolution) {
    if (resolution < 1) throw argument_error("resolution P must be positive");
    FptasTable t(resolution, inst.size());
    for (std::size_t i = 1; i <= inst.size(); ++i) {
        const std::int64_t pi = inst.profit(i - 1);
        const double si = inst.item_size(i - 1);
        t.set_prefix_profit(i, t.prefix_profit(i - 1) + pi);
        const std::int64_t d_old = t.scaled_granularity(i - 1);
        const std::int64_t d_new = t.scaled_granularity(i);
        for (std::int64_t p = 1; p <= resolution; ++p) {
            const auto sel = selection_indices(resolution, d_old, d_new, pi, p);
            const double h1 = sel.without_item <= resolution ? t.value(sel.without_item, i - 1) : truncation_value;
            const double h2 = sel.with_item >= 1 ? t.value(sel.with_item, i - 1) : 0.0;
            t.set(p, i, std::min(h1, si + h2));
        }
    }
    return t;
}

/// Best guaranteed profit level of a rounded table: p * d_n for the largest p
/// with g(p, n) <= 1 + tol. An entry equal to 2 never counts as feasible.
struct FptasOptimum {
    std::int64_t level = 0;            // p, 0 if nothing fits
    std::int64_t scaled_value = 0;     // p * P * d_n
    std::int64_t resolution = 1;       // P
    double value() const { return static_cast<double>(scaled_value) / static_cast<double>(resolution); }
};

inline FptasOptimum fptas_optimum(const FptasTable& table, double tol = capacity_tolerance) {
    FptasOptimum best;
    best.resolution = table.resolution();
    const std::size_t n = table.items();
    for (std::int64_t p = table.resolution(); p >= 1; --p) {
        const double v = table.value(p, n);
        if (v < truncation_value && v <= 1.0 + tol) {
            best.level = p;
            best.scaled_value = p * table.scaled_granularity(n);
            break;
        }
    }
    return best;
}

/// Subset reaching profit >= level * d_n, recovered by replaying the
/// selection indices over the stored g columns.
inline Solution backtrack_fptas(const FptasTable& table, const KnapsackInstance& inst, std::int64_t level,
                                double tol = capacity_tolerance) {
    if (table.items() != inst.size()) throw argument_error("table does not match instance");
    const std::int64_t P = table.resolution();
    if (level < 1 || level > P) throw infeasible_error("level outside [1, P]");
    const double final_size = table.value(level, inst.size());
    if (!(final_size < truncation_value && final_size <= 1.0 + tol)) {
        throw infeasible_error("level " + std::to_string(level) + " is not feasible");
    }
    std::vector<std::size_t> chosen;
    std::int64_t p = level;
    for (std::size_t i = inst.size(); i >= 1 && p > 0; --i) {
        const auto sel = selection_indices(P, table.scaled_granularity(i - 1), table.scaled_granularity(i),
                                           inst.profit(i - 1), p);
        const double h1 = sel.without_item <= P ? table.value(sel.without_item, i - 1) : truncation_value;
        const double h2 = sel.with_item >= 1 ? table.value(sel.with_item, i - 1) : 0.0;
        if (inst.item_size(i - 1) + h2 < h1 - tol) {
            chosen.push_back(i - 1);
            p = sel.with_item;
        } else {
            p = sel.without_item;
        }
    }
    if (p > 0) throw infeasible_error("rounded table is inconsistent with the instance");
    const double value = static_cast<double>(level * table.scaled_granularity(inst.size())) / static_cast<double>(P);
    return make_solution(inst, value, std::move(chosen));
}

} // namespace relu_dp
