#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sandpile/dynamics.hpp"
#include "sandpile/orientation.hpp"
#include "sandpile/polynomial.hpp"

namespace sandpile {

/// Graph interchange format:
///   {"sink": "s", "edges": [["s","v1",1], ["v1","v2"], ...]}
/// The third entry (multiplicity) is optional and defaults to 1; the vertex
/// set is inferred from edge endpoints.
inline MultiGraph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("sink") || !j.contains("edges"))
        fail(Errc::BadInput, "graph JSON needs 'sink' and 'edges'");
    if (!j["sink"].is_string()) fail(Errc::BadInput, "'sink' must be a string");
    if (!j["edges"].is_array()) fail(Errc::BadInput, "'edges' must be an array");

    std::vector<MultiGraph::EdgeSpec> edges;
    for (const auto& entry : j["edges"]) {
        if (!entry.is_array() || entry.size() < 2 || entry.size() > 3 || !entry[0].is_string() ||
            !entry[1].is_string())
            fail(Errc::BadInput, "each edge must be [label, label] or [label, label, multiplicity]");
        int mult = 1;
        if (entry.size() == 3) {
            if (!entry[2].is_number_integer()) fail(Errc::BadInput, "edge multiplicity must be an integer");
            mult = entry[2].get<int>();
        }
        edges.emplace_back(entry[0].get<std::string>(), entry[1].get<std::string>(), mult);
    }
    return MultiGraph::build(j["sink"].get<std::string>(), edges);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::BadInput, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline MultiGraph load_graph_file(const std::string& path) {
    const std::string text = read_file(path);
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(Errc::BadInput, "'" + path + "' is not valid JSON");
    return graph_from_json(j);
}

inline nlohmann::json graph_to_json(const MultiGraph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& pm : g.edge_pairs())
        edges.push_back({g.label(pm.pair.u), g.label(pm.pair.v), pm.mult});
    return {{"sink", g.label(MultiGraph::sink)}, {"edges", edges}};
}

/// FNV-1a 64-bit content digest, printed as 16 hex characters.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

/// Exact JSON value: a number while it fits an unsigned 64-bit integer,
/// otherwise a decimal string.
inline nlohmann::json bigint_to_json(const BigInt& n) {
    if (n >= 0 && n <= BigInt(UINT64_MAX)) return n.convert_to<std::uint64_t>();
    return n.str();
}

inline nlohmann::json config_to_json(const Config& eta) {
    return nlohmann::json(eta);
}

inline nlohmann::json config_set_to_json(const std::set<Config>& configs) {
    nlohmann::json out = nlohmann::json::array();
    for (const Config& eta : configs) out.push_back(config_to_json(eta));
    return out;
}

inline nlohmann::json polynomial_to_json(const Polynomial& poly) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const BigInt& c : poly.coeffs()) coeffs.push_back(bigint_to_json(c));
    return {{"coefficients", coeffs}, {"degree", poly.degree()}, {"display", poly.to_string()}};
}

inline nlohmann::json chain_stats_to_json(const ChainStats& stats) {
    nlohmann::json occupancy = nlohmann::json::array();
    for (const auto& [eta, count] : stats.occupancy)
        occupancy.push_back({{"config", config_to_json(eta)}, {"count", count}});
    return {
        {"rng", stats.rng_name},
        {"seed", stats.seed},
        {"p", stats.p},
        {"mu", stats.mu},
        {"policy", policy_name(stats.policy)},
        {"steps", stats.steps},
        {"burnin", stats.burnin},
        {"occupancy", occupancy},
        {"topplings", {{"mean", stats.mean_topplings}, {"max", stats.max_topplings_step}}},
        {"grains_to_sink", stats.grains_to_sink},
        {"final_config", config_to_json(stats.final_config)},
    };
}

}  // namespace sandpile
