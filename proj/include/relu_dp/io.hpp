#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "relu_dp/co_problems.hpp"
#include "relu_dp/errors.hpp"
#include "relu_dp/fptas_nn.hpp"
#include "relu_dp/knapsack.hpp"
#include "relu_dp/network.hpp"

namespace relu_dp {

using json = nlohmann::json;

/// Malformed JSON text; carries the 1-based line of the failure.
class json_parse_error : public std::invalid_argument {
public:
    json_parse_error(const std::string& what, std::size_t line)
        : std::invalid_argument(what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

inline json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1;
        for (std::size_t i = 0; i < upto; ++i) line += text[i] == '\n';
        throw json_parse_error("JSON parse error at line " + std::to_string(line) + ": " + e.what(), line);
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

/// Shortest text that reads back as the same double.
inline std::string format_double(double v) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

// ---------------------------------------------------------------------------
// Networks

inline json network_to_json(const ReluNetwork& net) {
    json j;
    j["layers"] = net.layer_sizes();
    json arcs = json::array();
    for (const Arc& a : net.arcs()) {
        arcs.push_back({a.source.layer, a.source.index, a.target.layer, a.target.index, a.weight});
    }
    j["arcs"] = std::move(arcs);
    json biases = json::array();
    for (std::size_t l = 1; l < net.layer_count(); ++l) {
        for (std::size_t i = 0; i < net.layer_size(l); ++i) {
            const double b = net.bias({static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(i)});
            if (b != 0.0) biases.push_back({l, i, b});
        }
    }
    j["biases"] = std::move(biases);
    return j;
}

inline ReluNetwork network_from_json(const json& j) {
    try {
        const auto layers = j.at("layers").get<std::vector<std::size_t>>();
        std::vector<Arc> arcs;
        for (const auto& a : j.at("arcs")) {
            if (!a.is_array() || a.size() != 5) throw validation_error("arc entries must be [sl,si,tl,ti,w]");
            arcs.push_back({{a[0].get<std::uint32_t>(), a[1].get<std::uint32_t>()},
                            {a[2].get<std::uint32_t>(), a[3].get<std::uint32_t>()},
                            a[4].get<double>()});
        }
        std::vector<std::vector<double>> biases(layers.size());
        for (std::size_t l = 1; l < layers.size(); ++l) biases[l].assign(layers[l], 0.0);
        if (j.contains("biases")) {
            for (const auto& b : j.at("biases")) {
                if (!b.is_array() || b.size() != 3) throw validation_error("bias entries must be [l,i,b]");
                const auto l = b[0].get<std::size_t>();
                const auto i = b[1].get<std::size_t>();
                if (l == 0 || l >= layers.size() || i >= layers[l]) throw validation_error("bias index out of range");
                biases[l][i] = b[2].get<double>();
            }
        }
        return ReluNetwork(layers, arcs, std::move(biases));
    } catch (const json::exception& e) {
        throw validation_error(std::string("bad network JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Knapsack instances

inline json instance_to_json(const KnapsackInstance& inst) {
    return {{"profits", inst.profits()}, {"sizes", inst.sizes()}};
}

inline KnapsackInstance instance_from_json(const json& j) {
    try {
        const auto profits = j.at("profits").get<std::vector<double>>();
        auto sizes = j.at("sizes").get<std::vector<double>>();
        return KnapsackInstance::from_real_profits(profits, std::move(sizes));
    } catch (const json::exception& e) {
        throw validation_error(std::string("bad instance JSON: ") + e.what());
    }
}

/// FNV-1a over the canonical JSON dump of an instance.
inline std::string digest(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Graphs and sequences

inline json graph_to_json(const WeightedGraph& g) {
    const std::size_t n = g.size();
    json lengths = json::array();
    for (std::size_t u = 0; u < n; ++u) {
        json row = json::array();
        for (std::size_t v = 0; v < n; ++v) {
            const double c = g.length(u, v);
            if (std::isfinite(c)) row.push_back(c);
            else row.push_back(nullptr);
        }
        lengths.push_back(std::move(row));
    }
    json j{{"n", n}, {"lengths", std::move(lengths)}, {"source", g.source()}};
    if (g.has_resources()) {
        json res = json::array();
        for (std::size_t u = 0; u < n; ++u) {
            json row = json::array();
            for (std::size_t v = 0; v < n; ++v) row.push_back(g.resource(u, v));
            res.push_back(std::move(row));
        }
        j["resources"] = std::move(res);
    }
    return j;
}

inline WeightedGraph graph_from_json(const json& j) {
    try {
        const auto n = j.at("n").get<std::size_t>();
        auto matrix = [n](const json& rows, bool allow_null) {
            if (!rows.is_array() || rows.size() != n) throw validation_error("matrix must have n rows");
            std::vector<double> out;
            for (const auto& row : rows) {
                if (!row.is_array() || row.size() != n) throw validation_error("matrix must have n columns");
                for (const auto& x : row) {
                    if (x.is_null() && allow_null) out.push_back(infinity);
                    else out.push_back(x.get<double>());
                }
            }
            return out;
        };
        std::optional<std::vector<double>> res;
        if (j.contains("resources")) res = matrix(j.at("resources"), false);
        return WeightedGraph(n, matrix(j.at("lengths"), true), j.value("source", std::size_t{0}), std::move(res));
    } catch (const json::exception& e) {
        throw validation_error(std::string("bad graph JSON: ") + e.what());
    }
}

inline json sequences_to_json(const IntSequencePair& p) { return {{"x", p.x}, {"y", p.y}}; }

inline IntSequencePair sequences_from_json(const json& j) {
    try {
        const auto x = j.at("x").get<std::vector<double>>();
        const auto y = j.at("y").get<std::vector<double>>();
        return IntSequencePair::from_reals(x, y);
    } catch (const json::exception& e) {
        throw validation_error(std::string("bad sequence JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// CSV

/// Rows p = 1..p*, columns i = 0..n.
inline std::string table_csv(const DpTable& t) {
    std::string out = "p";
    for (std::size_t i = 0; i <= t.items(); ++i) out += ",i" + std::to_string(i);
    out += '\n';
    for (std::int64_t p = 1; p <= t.p_star(); ++p) {
        out += std::to_string(p);
        for (std::size_t i = 0; i <= t.items(); ++i) out += "," + format_double(t.value(p, i));
        out += '\n';
    }
    return out;
}

/// One row per step: step index, then the state entries.
inline std::string states_csv(const std::vector<std::vector<double>>& states) {
    std::string out = "step";
    const std::size_t width = states.empty() ? 0 : states.front().size();
    for (std::size_t p = 1; p <= width; ++p) out += ",f" + std::to_string(p);
    out += '\n';
    for (std::size_t i = 0; i < states.size(); ++i) {
        out += std::to_string(i);
        for (double v : states[i]) out += "," + format_double(v);
        out += '\n';
    }
    return out;
}

inline std::string curve_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "P,width,p_nn,p_opt,ratio\n";
    for (const auto& c : curve) {
        out += std::to_string(c.resolution) + "," + std::to_string(c.width) + "," + format_double(c.p_nn) + "," +
               format_double(c.p_opt) + "," + format_double(c.ratio) + "\n";
    }
    return out;
}

} // namespace relu_dp
