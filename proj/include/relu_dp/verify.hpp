#pragma once

// Randomized property suites shared by the CLI `verify` command and the
// acceptance binary. Every suite counts individual checks and keeps the first
// failure message for diagnostics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relu_dp/co_oracles.hpp"
#include "relu_dp/co_problems.hpp"
#include "relu_dp/dp_nn.hpp"
#include "relu_dp/fptas_nn.hpp"
#include "relu_dp/instance_gen.hpp"
#include "relu_dp/io.hpp"
#include "relu_dp/knapsack.hpp"

namespace relu_dp::verify {

struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string first_failure;

    bool passed() const { return checks > 0 && failures == 0; }

    template <class Describe>
    void check(bool ok, Describe&& describe) {
        ++checks;
        if (ok) return;
        if (failures++ == 0) first_failure = describe();
    }
};

inline SuiteResult named(std::string name) {
    SuiteResult r;
    r.name = std::move(name);
    return r;
}

inline json to_json(const SuiteResult& r) {
    json j{{"name", r.name}, {"checks", r.checks}, {"failures", r.failures}, {"passed", r.passed()}};
    if (!r.first_failure.empty()) j["first_failure"] = r.first_failure;
    return j;
}

inline std::string num(double v) { return format_double(v); }

namespace detail {

/// Random truncated state entry in ]0,2]; a quarter of the entries sit at 2.
inline double random_state_value(Rng& rng) {
    if (rng.uniform_int(0, 3) == 0) return truncation_value;
    return 2.0 * rng.open01();
}

inline double random_size(Rng& rng) { return 1.0 - rng.u01(); } // ]0,1]

/// Draws instances from the generator with p* uniform in [lo, hi] until the
/// item count lies in [min_n, max_n].
inline KnapsackInstance draw_instance(Rng& meta, std::int64_t lo, std::int64_t hi, std::size_t min_n,
                                      std::size_t max_n) {
    for (;;) {
        const std::int64_t p_star = meta.uniform_int(lo, hi);
        KnapsackInstance inst = gen_knapsack({meta.bits(), p_star});
        if (inst.size() >= min_n && inst.size() <= max_n) return inst;
    }
}

inline bool close(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= tol;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Layer lemmas of the DP cell

/// Lemmas 1-3 on random cell inputs (p* in [1,30], p_in in [1,p*+3], state
/// entries in ]0,2], s_in in ]0,1]). `perturb` shifts one first-layer bias
/// to show that the harness notices a broken gate.
inline std::vector<SuiteResult> dp_lemmas(std::size_t probes, std::uint64_t seed, bool perturb = false) {
    std::vector<SuiteResult> res{named("dp.lemma1.gate_pair"), named("dp.lemma2.selection"),
                                 named("dp.lemma3.difference")};
    Rng rng(seed);
    std::map<std::int64_t, std::pair<DpCell, ReluNetwork>> cells;
    while (std::min({res[0].checks, res[1].checks, res[2].checks}) < probes) {
        const std::int64_t ps = rng.uniform_int(1, 30);
        auto it = cells.find(ps);
        if (it == cells.end()) {
            DpCell cell(ps);
            ReluNetwork net = cell.network();
            if (perturb) net = net.with_bias(cell.o1_plus(1), -1.5);
            it = cells.emplace(ps, std::make_pair(std::move(cell), std::move(net))).first;
        }
        const DpCell& cell = it->second.first;
        const ReluNetwork& net = it->second.second;
        const std::int64_t p_in = rng.uniform_int(1, ps + 3);
        const double s_in = detail::random_size(rng);
        std::vector<double> f(static_cast<std::size_t>(ps));
        for (double& v : f) v = detail::random_state_value(rng);
        const auto act = net.evaluate_trace(cell.step_input(f, static_cast<double>(p_in), s_in));
        auto at = [&](NeuronRef r) { return act[r.layer][r.index]; };
        auto fin = [&](std::int64_t p) { return f[static_cast<std::size_t>(p - 1)]; };

        for (std::int64_t k = 1; k <= ps; ++k) {
            const double sum = at(cell.o1_plus(k)) + at(cell.o1_minus(k));
            const bool ok = k == p_in ? sum == 0.0 : sum >= 2.0;
            res[0].check(ok, [&] {
                return "p*=" + std::to_string(ps) + " p_in=" + std::to_string(p_in) + " k=" + std::to_string(k) +
                       " gate sum " + num(sum);
            });
        }
        for (std::int64_t p = 2; p <= ps; ++p) {
            for (std::int64_t k = 1; k < p; ++k) {
                const double o2 = at(cell.o2(p, k));
                const double want = k == p_in ? fin(p - k) : 0.0;
                res[1].check(o2 == want, [&] {
                    return "p*=" + std::to_string(ps) + " p=" + std::to_string(p) + " k=" + std::to_string(k) +
                           " o2=" + num(o2) + " want " + num(want);
                });
            }
        }
        for (std::int64_t p = 1; p <= ps; ++p) {
            const double o3 = at(cell.o3(p));
            const double want = p <= p_in ? std::max(0.0, fin(p) - s_in)
                                          : std::max(0.0, fin(p) - (fin(p - p_in) + s_in));
            res[2].check(detail::close(o3, want, 1e-12), [&] {
                return "p*=" + std::to_string(ps) + " p=" + std::to_string(p) + " o3=" + num(o3) + " want " + num(want);
            });
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Layer lemmas of the rounded cell

/// Lemmas 4-9 on random cell inputs (P in [1,12], p*_in in [0,4P],
/// p_in in [1,3P], state entries in ]0,2], s_in in ]0,1]).
inline std::vector<SuiteResult> fptas_lemmas(std::size_t probes, std::uint64_t seed) {
    std::vector<SuiteResult> res;
    for (const char* name : {"fptas.lemma4.granularity", "fptas.lemma5.up_gate", "fptas.lemma6.down_gate",
                             "fptas.lemma7.keep", "fptas.lemma8.take", "fptas.lemma9.minimum"}) {
        res.push_back(named(name));
    }
    Rng rng(seed);
    std::map<std::int64_t, FptasCell> cells;
    auto done = [&] {
        return std::all_of(res.begin(), res.end(), [&](const SuiteResult& r) { return r.checks >= probes; });
    };
    while (!done()) {
        const std::int64_t P = rng.uniform_int(1, 12);
        const FptasCell& cell = cells.try_emplace(P, P).first->second;
        const std::int64_t prefix = rng.uniform_int(0, 4 * P);
        const std::int64_t p_in = rng.uniform_int(1, 3 * P);
        const double s_in = detail::random_size(rng);
        std::vector<double> g(static_cast<std::size_t>(P));
        for (double& v : g) v = detail::random_state_value(rng);
        const auto act = cell.network().evaluate_trace(
            cell.step_input(g, static_cast<double>(prefix), static_cast<double>(p_in), s_in));
        auto at = [&](NeuronRef r) { return act[r.layer][r.index]; };
        auto gin = [&](std::int64_t k) { return g[static_cast<std::size_t>(k - 1)]; };
        const std::string tag = "P=" + std::to_string(P) + " p*_in=" + std::to_string(prefix) +
                                " p_in=" + std::to_string(p_in);

        const std::int64_t d_old = scaled_granularity(P, prefix);
        const std::int64_t d_new = scaled_granularity(P, prefix + p_in);
        const double u_old = at(cell.old_unit()), u_new = at(cell.new_unit());
        res[0].check(u_old + static_cast<double>(P) == static_cast<double>(d_old) &&
                         u_new + static_cast<double>(P) == static_cast<double>(d_new),
                     [&] { return tag + " units " + num(u_old) + "," + num(u_new); });

        for (std::int64_t p = 1; p <= P; ++p) {
            const auto sel = selection_indices(P, d_old, d_new, p_in, p);
            for (std::int64_t k = p; k <= P; ++k) {
                const double sum = at(cell.up_plus(p, k)) + at(cell.up_minus(p, k));
                const bool ok = k == sel.without_item ? sum == 0.0 : sum >= 2.0;
                res[1].check(ok, [&] {
                    return tag + " p=" + std::to_string(p) + " k=" + std::to_string(k) + " sum " + num(sum);
                });
            }
            for (std::int64_t k = 1; k <= p; ++k) {
                const double sum = at(cell.down_plus(p, k)) + at(cell.down_minus(p, k));
                const bool ok = k == sel.with_item ? sum == 0.0 : sum >= 2.0;
                res[2].check(ok, [&] {
                    return tag + " p=" + std::to_string(p) + " k=" + std::to_string(k) + " sum " + num(sum);
                });
            }

            double h1 = 2.0;
            for (std::int64_t k = p; k <= P; ++k) h1 -= at(cell.keep_select(p, k));
            const double want1 = sel.without_item <= P ? gin(sel.without_item) : 2.0;
            res[3].check(sel.without_item > P ? h1 == 2.0 : detail::close(h1, want1, 1e-12), [&] {
                return tag + " p=" + std::to_string(p) + " h1=" + num(h1) + " want " + num(want1);
            });

            double h2 = 0.0;
            for (std::int64_t k = 1; k <= p; ++k) h2 += at(cell.take_select(p, k));
            const double want2 = sel.with_item >= 1 ? gin(sel.with_item) : 0.0;
            res[4].check(h2 == want2, [&] {
                return tag + " p=" + std::to_string(p) + " h2=" + num(h2) + " want " + num(want2);
            });

            const double out = act.back()[static_cast<std::size_t>(p - 1)];
            const double want = std::min(h1, s_in + h2);
            res[5].check(detail::close(out, want, 1e-12), [&] {
                return tag + " p=" + std::to_string(p) + " g_out=" + num(out) + " want " + num(want);
            });
        }
        const double prefix_out = act.back()[cell.prefix_output()];
        res[5].check(prefix_out == static_cast<double>(prefix + p_in),
                     [&] { return tag + " p*_out=" + num(prefix_out); });
    }
    return res;
}

// ---------------------------------------------------------------------------
// Knapsack theorems

/// DP network states against the classical table, and its optimum against
/// exhaustive search (n in [1,12], p* in [1,40]).
inline SuiteResult dp_exactness(std::size_t instances, std::uint64_t seed) {
    SuiteResult r = named("dp.exactness");
    Rng meta(seed);
    std::map<std::int64_t, DpCell> cells;
    for (std::size_t t = 0; t < instances; ++t) {
        const KnapsackInstance inst = detail::draw_instance(meta, 1, 40, 1, 12);
        const std::int64_t ps = inst.total_profit();
        const DpCell& cell = cells.try_emplace(ps, ps).first->second;
        const DpRun run = run_recurrent(cell, inst);
        const DpTable ref = dp_table(inst, ps);
        double worst = 0.0;
        for (std::size_t i = 0; i <= inst.size(); ++i) {
            for (std::int64_t p = 1; p <= ps; ++p) {
                worst = std::max(worst, std::abs(run.states[i][static_cast<std::size_t>(p - 1)] - ref.value(p, i)));
            }
        }
        const DpTable nn = DpTable::from_columns(run.states);
        const std::int64_t got = optimum_value(nn);
        const Solution bf = brute_force(inst);
        bool ok = worst <= 1e-9 && got == bf.profit;
        if (ok && got > 0) {
            const Solution rec = backtrack(nn, inst, got);
            ok = rec.profit >= got && rec.size <= 1.0 + capacity_tolerance;
        }
        r.check(ok, [&] {
            return "instance " + std::to_string(t) + ": max state error " + num(worst) + ", optimum " +
                   std::to_string(got) + " vs brute force " + std::to_string(bf.profit);
        });
    }
    return r;
}

/// Every finite g(p,i) <= 1 has a subset of the first i items with profit
/// >= p*d_i and size <= g(p,i) (P in {5,10,25}, n <= 10, p* <= 200).
inline SuiteResult fptas_feasibility(std::size_t instances, std::uint64_t seed) {
    SuiteResult r = named("fptas.feasibility");
    Rng meta(seed);
    const std::int64_t resolutions[] = {5, 10, 25};
    std::map<std::int64_t, FptasCell> cells;
    for (std::size_t t = 0; t < instances; ++t) {
        const KnapsackInstance inst = detail::draw_instance(meta, 1, 200, 1, 10);
        const std::int64_t P = resolutions[t % 3];
        const FptasCell& cell = cells.try_emplace(P, P).first->second;
        const FptasRun run = run_fptas(cell, inst);
        std::size_t violations = 0;
        std::string where;
        for (std::size_t i = 1; i <= inst.size(); ++i) {
            // (size, profit) of every subset of the first i items, sorted by size
            std::vector<std::pair<double, std::int64_t>> subsets;
            for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << i); ++mask) {
                double s = 0.0;
                std::int64_t pr = 0;
                for (std::size_t j = 0; j < i; ++j) {
                    if (mask >> j & 1u) {
                        s += inst.item_size(j);
                        pr += inst.profit(j);
                    }
                }
                subsets.emplace_back(s, pr);
            }
            std::sort(subsets.begin(), subsets.end());
            for (std::size_t j = 1; j < subsets.size(); ++j) {
                subsets[j].second = std::max(subsets[j].second, subsets[j - 1].second);
            }
            const std::int64_t D = run.table.scaled_granularity(i);
            for (std::int64_t p = 1; p <= P; ++p) {
                const double g = run.table.value(p, i);
                if (!(g < truncation_value && g <= 1.0)) continue;
                const auto it = std::upper_bound(subsets.begin(), subsets.end(),
                                                 std::make_pair(g + capacity_tolerance, INT64_MAX));
                const std::int64_t best = it == subsets.begin() ? -1 : std::prev(it)->second;
                if (best * P < p * D) {
                    if (violations++ == 0) where = "i=" + std::to_string(i) + " p=" + std::to_string(p) + " g=" + num(g);
                }
            }
        }
        r.check(violations == 0, [&] { return "instance " + std::to_string(t) + " P=" + std::to_string(P) + ": " + where; });
    }
    return r;
}

struct GuaranteeRow {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double epsilon = 1.0;
    std::int64_t resolution = 0;
    std::size_t width = 0;
    double p_nn = 0.0;
    double p_opt = 0.0;
    double ratio = 1.0;
    double bound = 0.0;     // 1 - epsilon
    bool recovered = false; // backtracked subset is feasible and reaches p_nn
};

/// p^NN for P = ceil(n^2/eps) over a list of (instance seed, p*, eps) jobs,
/// grouped by P so each cell is built once.
inline std::vector<GuaranteeRow> knapsack_tradeoff(std::vector<std::tuple<std::uint64_t, std::int64_t, double>> jobs,
                                                   std::size_t max_items) {
    struct Job {
        std::size_t order;
        std::uint64_t seed;
        KnapsackInstance inst;
        double eps;
        std::int64_t P;
    };
    std::vector<Job> prepared;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        auto [seed, p_star, eps] = jobs[j];
        // redraw with derived seeds until the instance fits the item budget
        std::uint64_t s = seed;
        KnapsackInstance inst = gen_knapsack({s, p_star});
        while (inst.size() > max_items) inst = gen_knapsack({++s, p_star});
        const std::int64_t P = resolution_for(inst.size(), eps);
        prepared.push_back({j, s, std::move(inst), eps, P});
    }
    std::vector<std::size_t> idx(prepared.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return prepared[a].P < prepared[b].P; });

    std::vector<GuaranteeRow> rows(prepared.size());
    std::unique_ptr<FptasCell> cell;
    for (std::size_t k : idx) {
        const Job& job = prepared[k];
        if (!cell || cell->resolution() != job.P) cell = std::make_unique<FptasCell>(job.P);
        const FptasRun run = run_fptas(*cell, job.inst);
        const FptasOptimum best = fptas_optimum(run.table);
        GuaranteeRow row;
        row.seed = job.seed;
        row.n = job.inst.size();
        row.epsilon = job.eps;
        row.resolution = job.P;
        row.width = cell->network().stats().width;
        row.p_nn = best.value();
        row.p_opt = brute_force(job.inst).value;
        row.ratio = row.p_opt > 0.0 ? row.p_nn / row.p_opt : 1.0;
        row.bound = 1.0 - job.eps;
        if (best.level == 0) {
            row.recovered = row.p_nn == 0.0;
        } else {
            const Solution sol = backtrack_fptas(run.table, job.inst, best.level);
            row.recovered = sol.size <= 1.0 + capacity_tolerance && static_cast<double>(sol.profit) >= row.p_nn - 1e-9;
        }
        rows[job.order] = row;
    }
    return rows;
}

inline std::string tradeoff_csv(const std::vector<GuaranteeRow>& rows) {
    std::string out = "seed,P,width,p_nn,p_opt,ratio,bound\n";
    for (const auto& r : rows) {
        out += std::to_string(r.seed) + "," + std::to_string(r.resolution) + "," + std::to_string(r.width) + "," +
               num(r.p_nn) + "," + num(r.p_opt) + "," + num(r.ratio) + "," + num(r.bound) + "\n";
    }
    return out;
}

/// Guarantee p^NN >= (1-eps) p^OPT, plus the sharper 1 - n^2/P, on `pairs`
/// (instance, eps) combinations with eps cycling through {0.1,0.25,0.5,1}.
inline SuiteResult fptas_guarantee(std::size_t pairs, std::uint64_t seed, std::size_t max_items = 7) {
    SuiteResult r = named("fptas.guarantee");
    Rng meta(seed);
    const double eps_list[] = {0.1, 0.25, 0.5, 1.0};
    std::vector<std::tuple<std::uint64_t, std::int64_t, double>> jobs;
    for (std::size_t t = 0; t < pairs; ++t) jobs.emplace_back(meta.bits(), meta.uniform_int(2, 200), eps_list[t % 4]);
    const auto rows = knapsack_tradeoff(std::move(jobs), max_items);
    for (const auto& row : rows) {
        const double sharp = 1.0 - static_cast<double>(row.n * row.n) / static_cast<double>(row.resolution);
        const bool ok = row.p_nn >= (1.0 - row.epsilon) * row.p_opt - 1e-9 && row.ratio >= sharp - 1e-12 &&
                        row.ratio <= 1.0 + 1e-12 && row.recovered;
        r.check(ok, [&] {
            return "seed " + std::to_string(row.seed) + " eps=" + num(row.epsilon) + " P=" + std::to_string(row.resolution) +
                   ": p_nn=" + num(row.p_nn) + " p_opt=" + num(row.p_opt);
        });
    }
    return r;
}

/// Rounded cell with sum of profits <= P reproduces the exact cell's states.
inline SuiteResult fptas_degeneracy(std::size_t instances, std::uint64_t seed) {
    SuiteResult r = named("fptas.degenerates_to_dp");
    Rng meta(seed);
    for (std::size_t t = 0; t < instances; ++t) {
        const KnapsackInstance inst = detail::draw_instance(meta, 1, 30, 1, 12);
        const std::int64_t P = meta.uniform_int(inst.total_profit(), 40);
        const FptasRun fr = run_fptas(FptasCell(P), inst);
        const DpRun dr = run_recurrent(DpCell(P), inst);
        std::size_t mismatches = 0;
        double worst = 0.0;
        for (std::size_t i = 0; i <= inst.size(); ++i) {
            for (std::int64_t p = 1; p <= P; ++p) {
                const double a = fr.table.value(p, i), b = dr.states[i][static_cast<std::size_t>(p - 1)];
                if (a != b) {
                    ++mismatches;
                    worst = std::max(worst, std::abs(a - b));
                }
            }
        }
        r.check(mismatches == 0, [&] {
            return "instance " + std::to_string(t) + " P=" + std::to_string(P) + ": " + std::to_string(mismatches) +
                   " differing entries, largest gap " + num(worst);
        });
    }
    return r;
}

/// Exact layer sizes of both cells.
inline SuiteResult architecture(std::int64_t max_p_star, std::int64_t max_resolution) {
    SuiteResult r = named("architecture.counts");
    for (std::int64_t ps = 1; ps <= max_p_star; ++ps) {
        const DpCell cell(ps);
        const auto& net = cell.network();
        const auto u = static_cast<std::size_t>(ps);
        const std::vector<std::size_t> want{u + 2, 2 * u, u * (u - 1) / 2, u, u};
        r.check(net.depth() == 4 && net.layer_sizes() == want, [&] { return "DP cell p*=" + std::to_string(ps); });
    }
    for (std::int64_t P = 1; P <= max_resolution; ++P) {
        const FptasCell cell(P);
        const auto& net = cell.network();
        const auto u = static_cast<std::size_t>(P);
        const std::vector<std::size_t> want{u + 3, 2, 2 * u * u + 2 * u, u * u + u, u, u + 1};
        r.check(net.depth() == 5 && net.layer_sizes() == want, [&] { return "rounded cell P=" + std::to_string(P); });
    }
    return r;
}

/// Unrolled DP network against the recurrent run, bit for bit, and depth 4n.
inline SuiteResult unfold_equivalence(std::size_t instances, std::uint64_t seed) {
    SuiteResult r = named("dp.unfold");
    Rng meta(seed);
    std::map<std::pair<std::int64_t, std::size_t>, ReluNetwork> nets;
    for (std::size_t t = 0; t < instances; ++t) {
        const KnapsackInstance inst = detail::draw_instance(meta, 1, 10, 1, 5);
        const std::int64_t ps = inst.total_profit();
        const std::size_t n = inst.size();
        auto it = nets.find({ps, n});
        if (it == nets.end()) it = nets.emplace(std::make_pair(ps, n), unfold_dp(ps, n)).first;
        const auto out = it->second.evaluate(unfolded_dp_input(inst, ps));
        const DpRun run = run_recurrent(DpCell(ps), inst);
        r.check(out == run.states.back() && it->second.depth() == 4 * n, [&] {
            return "instance " + std::to_string(t) + " (n=" + std::to_string(n) + ", p*=" + std::to_string(ps) +
                   "), depth " + std::to_string(it->second.depth());
        });
    }
    return r;
}

// ---------------------------------------------------------------------------
// Graph and sequence networks

inline SuiteResult lcs_equivalence(std::size_t pairs, std::uint64_t seed) {
    SuiteResult r = named("co.lcs");
    Rng meta(seed);
    for (std::size_t t = 0; t < pairs; ++t) {
        const auto m = static_cast<std::size_t>(meta.uniform_int(1, 12));
        const auto n = static_cast<std::size_t>(meta.uniform_int(1, 12));
        const IntSequencePair seq = gen_sequences(m, n, meta.uniform_int(1, 5), meta.bits());
        const std::int64_t got = run_lcs(seq), want = oracle::lcs_length(seq);
        r.check(got == want, [&] {
            return "pair " + std::to_string(t) + ": network " + std::to_string(got) + " vs " + std::to_string(want);
        });
    }
    return r;
}

inline SuiteResult bellman_ford_equivalence(std::size_t graphs, std::uint64_t seed) {
    SuiteResult r = named("co.bellman_ford");
    Rng meta(seed);
    for (std::size_t t = 0; t < graphs; ++t) {
        GraphGenConfig cfg;
        cfg.n = static_cast<std::size_t>(meta.uniform_int(2, 10));
        cfg.max_len = 10.0;
        cfg.seed = meta.bits();
        cfg.arc_probability = t % 2 == 0 ? 1.0 : 0.4;
        const WeightedGraph g = gen_graph(cfg);
        const auto got = run_bellman_ford(g).distances;
        const auto want = oracle::bellman_ford(g);
        bool ok = true;
        for (std::size_t v = 0; v < g.size(); ++v) ok = ok && detail::close(got[v], want[v], 1e-9);
        r.check(ok, [&] { return "graph " + std::to_string(t) + " (n=" + std::to_string(cfg.n) + ")"; });
    }
    return r;
}

inline SuiteResult apsp_equivalence(std::size_t graphs, std::uint64_t seed) {
    SuiteResult r = named("co.apsp");
    Rng meta(seed);
    for (std::size_t t = 0; t < graphs; ++t) {
        GraphGenConfig cfg;
        cfg.n = static_cast<std::size_t>(meta.uniform_int(2, 8));
        cfg.max_len = 10.0;
        cfg.seed = meta.bits();
        cfg.arc_probability = t % 2 == 0 ? 1.0 : 0.4;
        const WeightedGraph g = gen_graph(cfg);
        const auto got = run_apsp(g).distances;
        const auto want = oracle::floyd_warshall(g);
        bool ok = got.size() == want.size();
        for (std::size_t i = 0; ok && i < got.size(); ++i) ok = detail::close(got[i], want[i], 1e-9);
        r.check(ok, [&] { return "graph " + std::to_string(t) + " (n=" + std::to_string(cfg.n) + ")"; });
    }
    return r;
}

inline SuiteResult csp_equivalence(std::size_t instances, std::uint64_t seed) {
    SuiteResult r = named("co.constrained_shortest_path");
    Rng meta(seed);
    for (std::size_t t = 0; t < instances; ++t) {
        GraphGenConfig cfg;
        cfg.n = static_cast<std::size_t>(meta.uniform_int(2, 6));
        cfg.max_len = 5.0;
        cfg.seed = meta.bits();
        cfg.with_resources = true;
        cfg.integral = true;
        cfg.arc_probability = t % 2 == 0 ? 1.0 : 0.5;
        const WeightedGraph g = gen_graph(cfg);
        const std::int64_t c_star = meta.uniform_int(1, 15);
        const double limit = 10.0 * meta.u01();
        const auto got = run_csp(g, c_star, limit).lengths;
        const auto all = oracle::constrained_shortest_paths(g, limit);
        bool ok = true;
        for (std::size_t v = 0; v < g.size(); ++v) {
            const auto want = all[v] && *all[v] <= c_star ? all[v] : std::nullopt;
            ok = ok && got[v] == want;
        }
        r.check(ok, [&] {
            return "instance " + std::to_string(t) + " (n=" + std::to_string(cfg.n) + ", c*=" + std::to_string(c_star) +
                   ", R=" + num(limit) + ")";
        });
    }
    return r;
}

inline SuiteResult tsp_equivalence(std::size_t instances, std::uint64_t seed) {
    SuiteResult r = named("co.tsp");
    Rng meta(seed);
    for (std::size_t t = 0; t < instances; ++t) {
        const auto n = static_cast<std::size_t>(meta.uniform_int(4, 8));
        const WeightedGraph g = gen_graph(n, 10.0, meta.bits(), false);
        const double got = run_tsp(g);
        const double want = oracle::tsp_brute_force(g.lengths(), n);
        r.check(detail::close(got, want, 1e-9), [&] {
            return "instance " + std::to_string(t) + " (n=" + std::to_string(n) + "): " + num(got) + " vs " + num(want);
        });
    }
    return r;
}

// ---------------------------------------------------------------------------
// Generator

/// Profit sum equal to p*, size sum inside ]1,2[, sizes in ]0,1], and equal
/// output for equal seeds. p* is drawn from [2, 1000]; with p* = 1 the lone
/// item cannot reach a size sum above 1.
inline SuiteResult generator_properties(std::size_t draws, std::uint64_t seed) {
    SuiteResult r = named("gen.knapsack");
    Rng meta(seed);
    for (std::size_t t = 0; t < draws; ++t) {
        const GenConfig cfg{meta.bits(), meta.uniform_int(2, 1000)};
        const KnapsackInstance inst = gen_knapsack(cfg);
        double s = 0.0;
        bool sizes_ok = true;
        for (double x : inst.sizes()) {
            s += x;
            sizes_ok = sizes_ok && x > 0.0 && x <= 1.0;
        }
        bool ok = inst.total_profit() == cfg.p_star && s > 1.0 && s < 2.0 && sizes_ok;
        if (t % 100 == 0) ok = ok && gen_knapsack(cfg) == inst;
        r.check(ok, [&] {
            return "seed " + std::to_string(cfg.seed) + " p*=" + std::to_string(cfg.p_star) + ": profit sum " +
                   std::to_string(inst.total_profit()) + ", size sum " + num(s);
        });
    }
    return r;
}

} // namespace relu_dp::verify
