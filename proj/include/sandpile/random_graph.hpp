#pragma once

#include <string>
#include <vector>

#include "sandpile/config.hpp"
#include "sandpile/rng.hpp"

namespace sandpile {

/// Seeded random connected multigraph: a random attachment tree over the
/// sink plus 1..max_nonsink vertices, then extra random edges up to
/// max_edges, multiplicities capped. Connectivity holds by construction.
inline MultiGraph random_connected_multigraph(SplitMix64& rng, int max_nonsink = 5, int max_edges = 7,
                                              int max_multiplicity = 3) {
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_nonsink)));
    std::vector<std::string> names{"s"};
    for (int i = 1; i <= n; ++i) names.push_back("v" + std::to_string(i));

    std::vector<MultiGraph::EdgeSpec> edges;
    std::vector<std::vector<int>> mult(n + 1, std::vector<int>(n + 1, 0));
    auto add = [&](int a, int b) {
        if (mult[a][b] >= max_multiplicity) return false;
        mult[a][b] += 1;
        mult[b][a] += 1;
        edges.emplace_back(names[a], names[b], 1);
        return true;
    };

    for (int i = 1; i <= n; ++i) add(i, static_cast<int>(rng.below(static_cast<std::uint64_t>(i))));
    const int room = max_edges - n;
    const int extra = room > 0 ? static_cast<int>(rng.below(static_cast<std::uint64_t>(room) + 1)) : 0;
    for (int k = 0; k < extra; ++k) {
        for (int attempt = 0; attempt < 16; ++attempt) {
            const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
            const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
            if (a == b) continue;
            if (add(a, b)) break;
        }
    }
    return MultiGraph::build("s", edges);
}

inline Config random_stable_config(const MultiGraph& g, SplitMix64& rng) {
    Config eta(g.nonsink_count());
    for (VertexId v = 1; v < g.vertex_count(); ++v)
        eta[v - 1] = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.degree(v)) + 1));
    return eta;
}

/// A possibly unstable configuration: stable base plus up to `extra` grains.
inline Config random_config(const MultiGraph& g, SplitMix64& rng, int extra) {
    Config eta = random_stable_config(g, rng);
    const int grains = static_cast<int>(rng.below(static_cast<std::uint64_t>(extra) + 1));
    for (int i = 0; i < grains; ++i)
        eta[rng.below(static_cast<std::uint64_t>(g.nonsink_count()))] += 1;
    return eta;
}

/// Attaches a pendant chain of 1..3 fresh vertices at a random non-sink
/// vertex; the lacking polynomial must not notice.
inline MultiGraph attach_random_branch(const MultiGraph& g, SplitMix64& rng) {
    std::vector<MultiGraph::EdgeSpec> edges;
    for (const auto& pm : g.edge_pairs())
        edges.emplace_back(g.label(pm.pair.u), g.label(pm.pair.v), pm.mult);

    const VertexId attach = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(g.nonsink_count())));
    const int length = 1 + static_cast<int>(rng.below(3));
    std::string prev = g.label(attach);
    for (int i = 0; i < length; ++i) {
        std::string node = "branch" + std::to_string(i);
        while (g.find_vertex(node).has_value()) node += "'";
        edges.emplace_back(prev, node, 1);
        prev = node;
    }
    return MultiGraph::build(g.label(MultiGraph::sink), edges);
}

}  // namespace sandpile
