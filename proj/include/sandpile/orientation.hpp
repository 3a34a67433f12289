#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "sandpile/config.hpp"

namespace sandpile {

/// A direction for every edge copy, packed as one bit per copy in the
/// graph's canonical copy order. Bit clear = the copy points into its larger
/// endpoint, bit set = into the smaller. Mask 0 orients everything u -> v.
struct Orientation {
    std::uint64_t bits = 0;

    bool into_smaller(int copy_index) const { return (bits >> copy_index) & 1ULL; }

    /// Receiving endpoint of copy i.
    VertexId head(const EdgeCopy& e, int copy_index) const { return into_smaller(copy_index) ? e.u : e.v; }
    VertexId tail(const EdgeCopy& e, int copy_index) const { return into_smaller(copy_index) ? e.v : e.u; }
};

inline std::vector<int> indegrees(const MultiGraph& g, Orientation o) {
    std::vector<int> in(g.vertex_count(), 0);
    const auto& copies = g.edge_copies();
    for (int i = 0; i < static_cast<int>(copies.size()); ++i) in[o.head(copies[i], i)] += 1;
    return in;
}

inline int indegree(const MultiGraph& g, Orientation o, VertexId v) { return indegrees(g, o)[v]; }

/// Compatibility: indegree(v) >= 1 + lacking(v) at every non-sink vertex.
inline bool is_compatible(const MultiGraph& g, const Config& eta, Orientation o) {
    require_stable(g, eta);
    const std::vector<int> in = indegrees(g, o);
    for (VertexId v = 1; v < g.vertex_count(); ++v)
        if (in[v] < 1 + (g.degree(v) - eta[v - 1])) return false;
    return true;
}

/// All stable configurations compatible with o: the box
/// max(0, d(v)-in(v)+1) <= eta_v <= d(v), enumerated in ascending
/// lexicographic order. Empty iff some non-sink vertex has indegree 0.
inline std::vector<Config> comp_set(const MultiGraph& g, Orientation o) {
    const int n = g.nonsink_count();
    const std::vector<int> in = indegrees(g, o);
    std::vector<int> lo(n), hi(n);
    for (VertexId v = 1; v < g.vertex_count(); ++v) {
        lo[v - 1] = std::max(0, g.degree(v) - in[v] + 1);
        hi[v - 1] = g.degree(v);
        if (lo[v - 1] > hi[v - 1]) return {};
    }
    std::vector<Config> out;
    Config eta(lo.begin(), lo.end());
    while (true) {
        out.push_back(eta);
        int i = n - 1;
        while (i >= 0 && eta[i] == hi[i]) {
            eta[i] = lo[i];
            --i;
        }
        if (i < 0) break;
        eta[i] += 1;
    }
    return out;
}

/// Kahn elimination over the oriented multigraph (sink included).
inline bool is_acyclic(const MultiGraph& g, Orientation o) {
    const auto& copies = g.edge_copies();
    std::vector<int> in(g.vertex_count(), 0);
    std::vector<std::vector<VertexId>> out(g.vertex_count());
    for (int i = 0; i < static_cast<int>(copies.size()); ++i) {
        const VertexId h = o.head(copies[i], i);
        in[h] += 1;
        out[o.tail(copies[i], i)].push_back(h);
    }
    std::deque<VertexId> queue;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (in[v] == 0) queue.push_back(v);
    int removed = 0;
    while (!queue.empty()) {
        const VertexId x = queue.front();
        queue.pop_front();
        ++removed;
        for (VertexId y : out[x])
            if (--in[y] == 0) queue.push_back(y);
    }
    return removed == g.vertex_count();
}

/// "tail->head" labels, one per edge copy in canonical order.
inline std::vector<std::string> orientation_arrows(const MultiGraph& g, Orientation o) {
    std::vector<std::string> arrows;
    const auto& copies = g.edge_copies();
    for (int i = 0; i < static_cast<int>(copies.size()); ++i)
        arrows.push_back(g.label(o.tail(copies[i], i)) + "->" + g.label(o.head(copies[i], i)));
    return arrows;
}

/// Builds an orientation from one "tail->head" arrow per edge copy; parallel
/// copies are assigned in order of appearance. Every copy must be covered.
inline Orientation orientation_from_arrows(const MultiGraph& g,
                                           const std::vector<std::pair<std::string, std::string>>& arrows) {
    if (static_cast<int>(arrows.size()) != g.edge_count())
        fail(Errc::BadInput, "arrow count does not match edge copy count");
    if (g.edge_count() > 64) fail(Errc::TooManyEdges, "orientations are limited to 64 edge copies");
    Orientation o;
    std::vector<char> used(g.edge_count(), 0);
    const auto& copies = g.edge_copies();
    for (const auto& [from, to] : arrows) {
        const auto t = g.find_vertex(from), h = g.find_vertex(to);
        if (!t || !h) fail(Errc::BadInput, "unknown vertex in arrow " + from + "->" + to);
        bool placed = false;
        for (int i = 0; i < static_cast<int>(copies.size()); ++i) {
            if (used[i]) continue;
            if (pair_key(*t, *h) != VertexPair{copies[i].u, copies[i].v}) continue;
            used[i] = 1;
            if (*h == copies[i].u) o.bits |= 1ULL << i;
            placed = true;
            break;
        }
        if (!placed) fail(Errc::BadInput, "no unoriented copy left for arrow " + from + "->" + to);
    }
    return o;
}

}  // namespace sandpile
