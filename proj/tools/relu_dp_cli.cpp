#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relu_dp.hpp"

using namespace relu_dp;

namespace {

// Dense DP cells grow like p*^2 / 2 neurons; past this the build alone takes gigabytes.
constexpr std::int64_t cli_max_p_star = 5000;

struct Options {
    std::string instance;
    std::optional<std::int64_t> p_star;
    std::optional<double> epsilon;
    std::optional<std::int64_t> capital_p;
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    bool verify = false;
    std::string out;
    std::string kind;
    std::size_t n = 6;
    std::size_t m = 6;
    std::int64_t alphabet = 4;
    double max_len = 10.0;
    bool resources = false;
    bool integral = false;
    std::int64_t value_bound = 10;
    std::int64_t c_star = 5;
    double resource_limit = 1.0;
    std::size_t seeds = 5;
    std::vector<double> epsilons{1.0, 0.5, 0.25};
    bool perturb = false;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

json stats_json(const NetworkStats& s) {
    return {{"depth", s.depth}, {"width", s.width}, {"size", s.size}, {"arcs", s.num_arcs}};
}

std::string stats_line(const NetworkStats& s) {
    std::ostringstream os;
    os << s;
    return os.str();
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) std::cout << text;
    else write_file(o.out, text);
}

KnapsackInstance load_instance(const Options& o) {
    if (o.instance.empty()) throw argument_error("--instance is required");
    return instance_from_json(parse_json(read_file(o.instance)));
}

json solution_json(const Solution& s) {
    return {{"items", s.items}, {"profit", s.profit}, {"size", s.size}};
}

int cmd_solve_exact(const Options& o) {
    const auto t0 = Clock::now();
    const KnapsackInstance inst = load_instance(o);
    const std::int64_t ps = o.p_star.value_or(inst.total_profit());
    if (ps > cli_max_p_star) {
        throw size_guard_error("p*=" + std::to_string(ps) + " exceeds the CLI cap of " + std::to_string(cli_max_p_star));
    }
    const DpCell cell(ps);
    const Solution sol = solve_exact(inst, ps);
    json r{{"command", "solve-exact"},
           {"instance_digest", digest(instance_to_json(inst).dump())},
           {"n", inst.size()},
           {"p_star", ps},
           {"network", stats_json(cell.network().stats())},
           {"value", sol.value},
           {"solution", solution_json(sol)}};
    if (o.verify) {
        const double oracle = inst.size() <= brute_force_max_items ? brute_force(inst).value
                                                                   : static_cast<double>(optimum_value(dp_table(inst, ps)));
        r["oracle_value"] = oracle;
        r["oracle_match"] = oracle == sol.value;
        if (oracle != sol.value) {
            r["wall_time_s"] = seconds_since(t0);
            std::cout << r.dump(2) << "\n";
            return 1;
        }
    }
    r["wall_time_s"] = seconds_since(t0);
    std::cout << r.dump(2) << "\n";
    return 0;
}

int cmd_solve_fptas(const Options& o) {
    const auto t0 = Clock::now();
    const KnapsackInstance inst = load_instance(o);
    if (o.epsilon.has_value() == o.capital_p.has_value()) {
        throw argument_error("give exactly one of --epsilon and --capital-p");
    }
    const std::int64_t P = o.epsilon ? resolution_for(inst.size(), *o.epsilon) : *o.capital_p;
    const double n2 = static_cast<double>(inst.size() * inst.size());
    const double bound = o.epsilon ? 1.0 - *o.epsilon : std::max(0.0, 1.0 - n2 / static_cast<double>(P));
    const FptasCell cell(P);
    const FptasRun run = run_fptas(cell, inst);
    const FptasOptimum best = fptas_optimum(run.table);
    const Solution sol = best.level == 0 ? make_solution(inst, 0.0, {}) : backtrack_fptas(run.table, inst, best.level);
    json r{{"command", "solve-fptas"},
           {"instance_digest", digest(instance_to_json(inst).dump())},
           {"n", inst.size()},
           {"capital_p", P},
           {"network", stats_json(cell.network().stats())},
           {"value", best.value()},
           {"solution", solution_json(sol)},
           {"bound", bound}};
    if (o.epsilon) r["epsilon"] = *o.epsilon;
    int code = 0;
    if (o.verify) {
        const double opt = brute_force(inst).value;
        const double ratio = opt > 0.0 ? best.value() / opt : 1.0;
        r["oracle_value"] = opt;
        r["ratio"] = ratio;
        r["oracle_match"] = ratio >= bound - 1e-12;
        if (ratio < bound - 1e-12) code = 1;
    }
    r["wall_time_s"] = seconds_since(t0);
    std::cout << r.dump(2) << "\n";
    return code;
}

int cmd_build(const Options& o) {
    ReluNetwork net;
    if (o.kind == "dp") {
        const std::int64_t ps = o.p_star.value_or(5);
        if (ps > cli_max_p_star) throw size_guard_error("p* exceeds the CLI cap of " + std::to_string(cli_max_p_star));
        net = DpCell(ps).network();
    } else if (o.kind == "fptas") {
        net = FptasCell(o.capital_p.value_or(3)).network();
    } else if (o.kind == "lcs") {
        net = build_lcs_cell(o.value_bound);
    } else if (o.kind == "bf") {
        if (o.instance.empty()) throw argument_error("bf needs --instance with a graph (lengths are baked in)");
        net = build_bellman_ford_cell(graph_from_json(parse_json(read_file(o.instance))));
    } else if (o.kind == "apsp") {
        net = build_apsp_cell(o.n);
    } else if (o.kind == "csp") {
        net = CspNetwork(o.n, 0, o.c_star, o.resource_limit + 1.0).network();
    } else if (o.kind == "tsp") {
        net = build_tsp_network(o.n);
    } else {
        throw argument_error("unknown --kind " + o.kind);
    }
    const NetworkStats s = net.stats();
    if (o.out.empty()) {
        std::cout << network_to_json(net).dump() << "\n";
        std::cerr << stats_line(s) << "\n";
    } else {
        write_file(o.out, network_to_json(net).dump() + "\n");
        std::cout << stats_line(s) << "\n";
    }
    return 0;
}

int cmd_gen(const Options& o) {
    const std::string kind = o.kind.empty() ? "knapsack" : o.kind;
    json j;
    if (kind == "knapsack") {
        j = instance_to_json(gen_knapsack({o.seed, o.p_star.value_or(20)}));
    } else if (kind == "graph") {
        GraphGenConfig cfg;
        cfg.n = o.n;
        cfg.max_len = o.max_len;
        cfg.seed = o.seed;
        cfg.with_resources = o.resources;
        cfg.integral = o.integral;
        j = graph_to_json(gen_graph(cfg));
    } else if (kind == "sequences") {
        j = sequences_to_json(gen_sequences(o.m, o.n, o.alphabet, o.seed));
    } else {
        throw argument_error("unknown --kind " + kind);
    }
    emit(o, j.dump() + "\n");
    return 0;
}

int cmd_bench(const Options& o) {
    const auto t0 = Clock::now();
    if (o.n > brute_force_max_items) throw size_guard_error("bench compares against brute force; --n must be <= 25");
    const std::int64_t ps = o.p_star.value_or(50);
    std::vector<std::tuple<std::uint64_t, std::int64_t, double>> jobs;
    for (std::size_t k = 0; k < o.seeds; ++k) {
        for (double eps : o.epsilons) jobs.emplace_back(o.seed + k, ps, eps);
    }
    const auto rows = verify::knapsack_tradeoff(std::move(jobs), o.n);
    std::size_t violations = 0;
    for (const auto& r : rows) {
        const double sharp = 1.0 - static_cast<double>(r.n * r.n) / static_cast<double>(r.resolution);
        if (r.ratio < r.bound - 1e-12 || r.ratio < sharp - 1e-12 || !r.recovered) ++violations;
    }
    emit(o, verify::tradeoff_csv(rows));
    json summary{{"command", "bench"},        {"suite", "knapsack-tradeoff"}, {"rows", rows.size()},
                 {"violations", violations}, {"wall_time_s", seconds_since(t0)}};
    (o.out.empty() ? std::cerr : std::cout) << summary.dump() << "\n";
    return violations == 0 ? 0 : 1;
}

int cmd_verify(const Options& o) {
    const auto t0 = Clock::now();
    const std::string kind = o.kind.empty() ? "all" : o.kind;
    const std::size_t t = o.trials;
    std::vector<verify::SuiteResult> suites;
    auto want = [&](std::initializer_list<const char*> names) {
        if (kind == "all") return true;
        for (const char* n : names) {
            if (kind == n) return true;
        }
        return false;
    };
    bool matched = false;
    auto add = [&](std::vector<verify::SuiteResult> rs) {
        matched = true;
        for (auto& r : rs) suites.push_back(std::move(r));
    };
    if (want({"dp", "lemmas"})) add(verify::dp_lemmas(100 * t, o.seed, o.perturb));
    if (want({"fptas", "lemmas"})) add(verify::fptas_lemmas(100 * t, o.seed + 1));
    if (want({"dp"})) add({verify::dp_exactness(t, o.seed + 2), verify::unfold_equivalence(t, o.seed + 3)});
    if (want({"fptas"})) {
        add({verify::fptas_feasibility(t, o.seed + 4), verify::fptas_guarantee(t, o.seed + 5, 6)});
    }
    if (want({"architecture"})) add({verify::architecture(20, 10)});
    if (want({"lcs"})) add({verify::lcs_equivalence(t, o.seed + 6)});
    if (want({"bf"})) add({verify::bellman_ford_equivalence(t, o.seed + 7)});
    if (want({"apsp"})) add({verify::apsp_equivalence(t, o.seed + 8)});
    if (want({"csp"})) add({verify::csp_equivalence(t, o.seed + 9)});
    if (want({"tsp"})) add({verify::tsp_equivalence(std::max<std::size_t>(1, t / 2), o.seed + 10)});
    if (want({"gen"})) add({verify::generator_properties(10 * t, o.seed + 11)});
    // Exact bitwise agreement of the two knapsack networks; opt-in (see README).
    if (kind == "degeneracy") add({verify::fptas_degeneracy(t, o.seed + 12)});
    if (!matched) throw argument_error("unknown --kind " + kind);

    bool all = true;
    json list = json::array();
    for (const auto& s : suites) {
        all = all && s.passed();
        list.push_back(verify::to_json(s));
    }
    json r{{"command", "verify"}, {"kind", kind},      {"seed", o.seed}, {"trials", t},
           {"suites", list},      {"passed", all}, {"wall_time_s", seconds_since(t0)}};
    std::cout << r.dump(2) << "\n";
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ReLU networks with hard-coded weights that execute dynamic programs"};
    app.require_subcommand(1);
    Options o;

    auto* exact = app.add_subcommand("solve-exact", "Solve a knapsack instance with the DP network");
    exact->add_option("--instance", o.instance, "Instance JSON {\"profits\":[..],\"sizes\":[..]}")->required();
    exact->add_option("--p-star", o.p_star, "Profit bound p* (default: sum of profits)");
    exact->add_flag("--verify", o.verify, "Cross-check against brute force");

    auto* fptas = app.add_subcommand("solve-fptas", "Approximate with the rounded network");
    fptas->add_option("--instance", o.instance, "Instance JSON")->required();
    fptas->add_option("--epsilon", o.epsilon, "Target accuracy in ]0,1]; sets P = ceil(n^2/eps)");
    fptas->add_option("--capital-p", o.capital_p, "Resolution P");
    fptas->add_flag("--verify", o.verify, "Report the ratio against brute force");

    auto* build = app.add_subcommand("build", "Serialize a network to JSON");
    build->add_option("--kind", o.kind, "dp|fptas|lcs|bf|apsp|csp|tsp")->required();
    build->add_option("--p-star", o.p_star, "dp: profit bound (default 5)");
    build->add_option("--capital-p", o.capital_p, "fptas: resolution (default 3)");
    build->add_option("--value-bound", o.value_bound, "lcs: bound on f values (default 10)");
    build->add_option("--n", o.n, "apsp/csp/tsp: vertex count (default 6)");
    build->add_option("--c-star", o.c_star, "csp: length bound (default 5)");
    build->add_option("--resource-limit", o.resource_limit, "csp: resource limit R (default 1)");
    build->add_option("--instance", o.instance, "bf: graph JSON");
    build->add_option("--out", o.out, "Write the network here and print stats");

    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    gen->add_option("--kind", o.kind, "knapsack|graph|sequences (default knapsack)");
    gen->add_option("--seed", o.seed, "Seed (default 1)");
    gen->add_option("--p-star", o.p_star, "knapsack: profit sum (default 20)");
    gen->add_option("--n", o.n, "graph: vertices; sequences: length of y (default 6)");
    gen->add_option("--m", o.m, "sequences: length of x (default 6)");
    gen->add_option("--alphabet", o.alphabet, "sequences: alphabet size (default 4)");
    gen->add_option("--max-len", o.max_len, "graph: largest length (default 10)");
    gen->add_flag("--resources", o.resources, "graph: add a resource matrix");
    gen->add_flag("--integral", o.integral, "graph: integral lengths in [1, max-len]");
    gen->add_option("--out", o.out, "Output file (default stdout)");

    auto* bench = app.add_subcommand("bench", "Width/quality tradeoff of the rounded network (CSV)");
    bench->add_option("--seed", o.seed, "First seed (default 1)");
    bench->add_option("--seeds", o.seeds, "Number of seeds (default 5)");
    bench->add_option("--n", o.n, "Largest item count; instances are redrawn until they fit (default 6)");
    bench->add_option("--p-star", o.p_star, "Profit sum of generated instances (default 50)");
    bench->add_option("--epsilon", o.epsilons, "Accuracy targets (default 1,0.5,0.25)")->delimiter(',');
    bench->add_option("--out", o.out, "CSV file (default stdout)");

    auto* ver = app.add_subcommand("verify", "Run the randomized property suites");
    ver->add_option("--kind", o.kind,
                    "all|lemmas|dp|fptas|architecture|lcs|bf|apsp|csp|tsp|gen|degeneracy (default all)");
    ver->add_option("--trials", o.trials, "Instances per suite (default 100)");
    ver->add_option("--seed", o.seed, "Seed (default 1)");
    ver->add_flag("--perturb", o.perturb, "Corrupt one first-layer bias of the DP cell");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*exact) return cmd_solve_exact(o);
        if (*fptas) return cmd_solve_fptas(o);
        if (*build) return cmd_build(o);
        if (*gen) return cmd_gen(o);
        if (*bench) return cmd_bench(o);
        if (*ver) return cmd_verify(o);
    } catch (const json_parse_error& e) {
        std::cerr << json{{"error", "parse"}, {"line", e.line()}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const size_guard_error& e) {
        std::cerr << json{{"error", "guard"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "runtime"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
