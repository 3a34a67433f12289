#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sandpile/bigint.hpp"
#include "sandpile/error.hpp"

namespace sandpile {

/// Dense vertex index. The sink is always index 0; non-sink vertices follow
/// in sorted label order, so vertex order is reproducible for a given input.
using VertexId = int;

/// Unordered endpoint pair with u < v; the key for a bundle of parallel edges.
struct VertexPair {
    VertexId u = 0;
    VertexId v = 0;
    auto operator<=>(const VertexPair&) const = default;
};

inline VertexPair pair_key(VertexId a, VertexId b) {
    return a < b ? VertexPair{a, b} : VertexPair{b, a};
}

/// One parallel copy of an edge; copy runs 0..multiplicity-1 within its pair.
struct EdgeCopy {
    VertexId u = 0;  // u < v
    VertexId v = 0;
    int copy = 0;
};

/// Finite, unoriented, loop-free multigraph with a distinguished sink vertex.
/// Values are immutable after construction; every operation returns a new
/// graph, so instances can be shared freely across threads.
class MultiGraph {
public:
    static constexpr VertexId sink = 0;

    using EdgeSpec = std::tuple<std::string, std::string, int>;

    /// Validates and builds a graph from labeled edges. The vertex set is
    /// inferred from edge endpoints and must contain the sink label; the
    /// result is connected and loop-free or an Error is thrown.
    static MultiGraph build(const std::string& sink_label, const std::vector<EdgeSpec>& edges) {
        if (sink_label.empty()) fail(Errc::NoSink, "empty sink label");
        std::map<std::string, int> seen;
        for (const auto& [a, b, mult] : edges) {
            if (a == b) fail(Errc::LoopEdge, "edge {" + a + "," + b + "} is a loop");
            if (mult < 1) fail(Errc::BadInput, "edge {" + a + "," + b + "} has multiplicity < 1");
            seen[a] += 0;
            seen[b] += 0;
        }
        if (!seen.count(sink_label))
            fail(Errc::NoSink, "sink '" + sink_label + "' does not appear in any edge");

        std::vector<std::string> labels;
        labels.push_back(sink_label);
        for (const auto& [label, unused] : seen)
            if (label != sink_label) labels.push_back(label);
        // non-sink part of `labels` is sorted because `seen` is ordered

        std::map<std::string, VertexId> index;
        for (VertexId i = 0; i < static_cast<VertexId>(labels.size()); ++i) index[labels[i]] = i;

        std::map<VertexPair, int> mult_map;
        for (const auto& [a, b, mult] : edges) mult_map[pair_key(index[a], index[b])] += mult;

        return make(std::move(labels), mult_map, /*require_connected=*/true);
    }

    // --- accessors ---------------------------------------------------------

    int vertex_count() const { return static_cast<int>(labels_.size()); }
    int nonsink_count() const { return static_cast<int>(labels_.size()) - 1; }
    int edge_count() const { return static_cast<int>(copies_.size()); }

    const std::string& label(VertexId v) const { return labels_[v]; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<VertexId> find_vertex(const std::string& label) const {
        for (VertexId i = 0; i < vertex_count(); ++i)
            if (labels_[i] == label) return i;
        return std::nullopt;
    }

    int degree(VertexId v) const { return degree_[v]; }

    /// Edge copies in canonical order: pairs ascending by (u,v), copies by
    /// index. Orientation bitmasks index into this list.
    const std::vector<EdgeCopy>& edge_copies() const { return copies_; }

    struct PairMult {
        VertexPair pair;
        int mult = 0;
    };
    const std::vector<PairMult>& edge_pairs() const { return pairs_; }

    int multiplicity(VertexId a, VertexId b) const {
        const VertexPair key = pair_key(a, b);
        for (const auto& pm : pairs_)
            if (pm.pair == key) return pm.mult;
        return 0;
    }

    /// (neighbor, multiplicity) pairs of v, ascending by neighbor index.
    const std::vector<std::pair<VertexId, int>>& neighbors(VertexId v) const { return adj_[v]; }

    bool is_connected() const {
        if (vertex_count() == 0) return false;
        std::vector<char> vis(vertex_count(), 0);
        std::vector<VertexId> stack{sink};
        vis[sink] = 1;
        int reached = 1;
        while (!stack.empty()) {
            VertexId x = stack.back();
            stack.pop_back();
            for (const auto& [y, m] : adj_[x]) {
                if (!vis[y]) {
                    vis[y] = 1;
                    ++reached;
                    stack.push_back(y);
                }
            }
        }
        return reached == vertex_count();
    }

    // --- structural operations ----------------------------------------------

    /// Removes one copy of {x,y}. The result may be disconnected; callers in
    /// the recurrence only delete non-bridges, and `build` is the only
    /// connectivity gate.
    MultiGraph delete_edge(VertexId x, VertexId y) const {
        check_pair(x, y);
        if (x == sink || y == sink)
            fail(Errc::SinkAdjacentEdge, "cannot delete sink-adjacent edge {" + labels_[x] + "," + labels_[y] + "}");
        std::map<VertexPair, int> mult_map = pair_map();
        auto it = mult_map.find(pair_key(x, y));
        if (--it->second == 0) mult_map.erase(it);
        return make(labels_, mult_map, /*require_connected=*/false);
    }

    /// Contracts one copy of {x,y} into a merged vertex labeled "x.y". When
    /// the pair has multiplicity k >= 2 the surviving k-1 copies become
    /// {x.y, sink} edges; every other incidence is re-targeted to x.y.
    MultiGraph contract_edge(VertexId x, VertexId y) const {
        check_pair(x, y);
        if (x == sink || y == sink)
            fail(Errc::SinkAdjacentEdge, "cannot contract sink-adjacent edge {" + labels_[x] + "," + labels_[y] + "}");
        const VertexId lo = std::min(x, y), hi = std::max(x, y);
        const std::string merged = labels_[lo] + "." + labels_[hi];

        std::vector<std::string> labels;
        labels.push_back(labels_[sink]);
        std::vector<std::string> rest;
        for (VertexId i = 1; i < vertex_count(); ++i)
            if (i != x && i != y) rest.push_back(labels_[i]);
        rest.push_back(merged);
        std::sort(rest.begin(), rest.end());
        labels.insert(labels.end(), rest.begin(), rest.end());

        std::map<std::string, VertexId> index;
        for (VertexId i = 0; i < static_cast<VertexId>(labels.size()); ++i) index[labels[i]] = i;
        auto target = [&](VertexId old) -> VertexId {
            if (old == x || old == y) return index[merged];
            return index[labels_[old]];
        };

        std::map<VertexPair, int> mult_map;
        const VertexPair contracted = pair_key(x, y);
        for (const auto& pm : pairs_) {
            if (pm.pair == contracted) {
                if (pm.mult >= 2) mult_map[pair_key(index[merged], sink)] += pm.mult - 1;
            } else {
                mult_map[pair_key(target(pm.pair.u), target(pm.pair.v))] += pm.mult;
            }
        }
        return make(std::move(labels), mult_map, /*require_connected=*/false);
    }

    /// True iff removing one copy of {x,y} increases the number of connected
    /// components. A copy of a multiplicity->=2 pair is never a bridge.
    bool is_bridge(VertexId x, VertexId y) const {
        check_pair(x, y);
        if (multiplicity(x, y) >= 2) return false;
        return component_count(pair_key(x, y)) > component_count(std::nullopt);
    }

    /// All pairs that are neither bridges nor sink-adjacent, ascending.
    std::vector<VertexPair> reducible_edges() const {
        std::vector<VertexPair> out;
        for (const auto& pm : pairs_) {
            if (pm.pair.u == sink) continue;
            if (is_bridge(pm.pair.u, pm.pair.v)) continue;
            out.push_back(pm.pair);
        }
        return out;
    }

    /// Lexicographically smallest reducible pair, if any.
    std::optional<VertexPair> find_reducible_edge() const {
        for (const auto& pm : pairs_) {
            if (pm.pair.u == sink) continue;
            if (!is_bridge(pm.pair.u, pm.pair.v)) return pm.pair;
        }
        return std::nullopt;
    }

    /// Iteratively strips non-sink leaves until no non-sink vertex has degree
    /// 1. Removes whole pendant trees; the sink always survives.
    MultiGraph prune_tree_branches() const {
        std::vector<char> keep(vertex_count(), 1);
        std::map<VertexPair, int> mult_map = pair_map();
        std::vector<int> deg = degree_;
        bool changed = true;
        while (changed) {
            changed = false;
            for (VertexId v = 1; v < vertex_count(); ++v) {
                if (!keep[v] || deg[v] != 1) continue;
                for (auto it = mult_map.begin(); it != mult_map.end(); ++it) {
                    if (it->first.u == v || it->first.v == v) {
                        VertexId other = it->first.u == v ? it->first.v : it->first.u;
                        deg[other] -= 1;
                        deg[v] = 0;
                        mult_map.erase(it);
                        break;
                    }
                }
                keep[v] = 0;
                changed = true;
            }
        }
        std::vector<std::string> labels;
        for (VertexId i = 0; i < vertex_count(); ++i)
            if (keep[i]) labels.push_back(labels_[i]);
        std::map<VertexPair, int> remapped;
        std::map<std::string, VertexId> index;
        for (VertexId i = 0; i < static_cast<VertexId>(labels.size()); ++i) index[labels[i]] = i;
        for (const auto& [pair, m] : mult_map)
            remapped[pair_key(index[labels_[pair.u]], index[labels_[pair.v]])] = m;
        return make(std::move(labels), remapped, /*require_connected=*/false);
    }

    /// Splits the graph into subgraphs that share only the sink: one per
    /// connected component of G - sink, each with its incident sink edges.
    /// Returns {*this} when there is nothing to split.
    std::vector<MultiGraph> sink_components() const {
        if (nonsink_count() == 0) return {*this};
        std::vector<int> comp(vertex_count(), -1);
        int ncomp = 0;
        for (VertexId v = 1; v < vertex_count(); ++v) {
            if (comp[v] != -1) continue;
            std::vector<VertexId> stack{v};
            comp[v] = ncomp;
            while (!stack.empty()) {
                VertexId x = stack.back();
                stack.pop_back();
                for (const auto& [y, m] : adj_[x]) {
                    if (y == sink || comp[y] != -1) continue;
                    comp[y] = ncomp;
                    stack.push_back(y);
                }
            }
            ++ncomp;
        }
        if (ncomp <= 1) return {*this};

        std::vector<MultiGraph> out;
        for (int c = 0; c < ncomp; ++c) {
            std::vector<std::string> labels;
            labels.push_back(labels_[sink]);
            for (VertexId v = 1; v < vertex_count(); ++v)
                if (comp[v] == c) labels.push_back(labels_[v]);
            std::map<std::string, VertexId> index;
            for (VertexId i = 0; i < static_cast<VertexId>(labels.size()); ++i) index[labels[i]] = i;
            std::map<VertexPair, int> mult_map;
            for (const auto& pm : pairs_) {
                VertexId a = pm.pair.u, b = pm.pair.v;
                VertexId probe = a == sink ? b : a;
                if (comp[probe] != c) continue;
                mult_map[pair_key(index[labels_[a]], index[labels_[b]])] += pm.mult;
            }
            out.push_back(make(std::move(labels), mult_map, /*require_connected=*/false));
        }
        return out;
    }

    /// |E| - |non-sink vertices|: the number of independent cycles, and the
    /// degree of the lacking polynomial.
    int cycle_count() const { return edge_count() - nonsink_count(); }

    bool operator==(const MultiGraph& other) const {
        return labels_ == other.labels_ && pair_map() == other.pair_map();
    }

private:
    std::vector<std::string> labels_;
    std::vector<PairMult> pairs_;  // ascending by pair
    std::vector<EdgeCopy> copies_;
    std::vector<int> degree_;
    std::vector<std::vector<std::pair<VertexId, int>>> adj_;

    MultiGraph() = default;

    std::map<VertexPair, int> pair_map() const {
        std::map<VertexPair, int> m;
        for (const auto& pm : pairs_) m[pm.pair] = pm.mult;
        return m;
    }

    void check_pair(VertexId x, VertexId y) const {
        if (x < 0 || x >= vertex_count() || y < 0 || y >= vertex_count() || x == y)
            fail(Errc::NoSuchEdge, "invalid endpoint pair");
        if (multiplicity(x, y) == 0)
            fail(Errc::NoSuchEdge, "no edge {" + labels_[x] + "," + labels_[y] + "}");
    }

    /// Connected components when one copy of `removed` is taken out (its
    /// multiplicity must be 1 for removal to matter).
    int component_count(std::optional<VertexPair> removed) const {
        std::vector<char> vis(vertex_count(), 0);
        int comps = 0;
        for (VertexId start = 0; start < vertex_count(); ++start) {
            if (vis[start]) continue;
            ++comps;
            std::vector<VertexId> stack{start};
            vis[start] = 1;
            while (!stack.empty()) {
                VertexId x = stack.back();
                stack.pop_back();
                for (const auto& [y, m] : adj_[x]) {
                    if (vis[y]) continue;
                    if (removed && pair_key(x, y) == *removed && m == 1) continue;
                    vis[y] = 1;
                    stack.push_back(y);
                }
            }
        }
        return comps;
    }

    static MultiGraph make(std::vector<std::string> labels, const std::map<VertexPair, int>& mult_map,
                           bool require_connected) {
        MultiGraph g;
        g.labels_ = std::move(labels);
        for (std::size_t i = 0; i + 1 < g.labels_.size(); ++i)
            for (std::size_t j = i + 1; j < g.labels_.size(); ++j)
                if (g.labels_[i] == g.labels_[j])
                    fail(Errc::DuplicateVertexLabel, "duplicate vertex label '" + g.labels_[i] + "'");

        g.degree_.assign(g.labels_.size(), 0);
        g.adj_.assign(g.labels_.size(), {});
        for (const auto& [pair, mult] : mult_map) {
            if (pair.u == pair.v) fail(Errc::LoopEdge, "loop at vertex " + g.labels_[pair.u]);
            if (mult < 1) fail(Errc::BadInput, "non-positive multiplicity");
            g.pairs_.push_back({pair, mult});
            g.degree_[pair.u] += mult;
            g.degree_[pair.v] += mult;
            g.adj_[pair.u].push_back({pair.v, mult});
            g.adj_[pair.v].push_back({pair.u, mult});
            for (int c = 0; c < mult; ++c) g.copies_.push_back({pair.u, pair.v, c});
        }
        for (auto& nbrs : g.adj_) std::sort(nbrs.begin(), nbrs.end());

        if (require_connected && !g.is_connected())
            fail(Errc::NotConnected, "graph is not connected");
        return g;
    }
};

/// Disjoint union of two graphs glued at the sink. Colliding non-sink labels
/// from `b` are suffixed with apostrophes until unique.
inline MultiGraph glue_at_sink(const MultiGraph& a, const MultiGraph& b) {
    std::vector<MultiGraph::EdgeSpec> edges;
    for (const auto& pm : a.edge_pairs())
        edges.emplace_back(a.label(pm.pair.u), a.label(pm.pair.v), pm.mult);

    auto relabel = [&](VertexId v) -> std::string {
        if (v == MultiGraph::sink) return a.label(MultiGraph::sink);
        std::string name = b.label(v);
        while (a.find_vertex(name).has_value()) name += "'";
        return name;
    };
    for (const auto& pm : b.edge_pairs())
        edges.emplace_back(relabel(pm.pair.u), relabel(pm.pair.v), pm.mult);
    return MultiGraph::build(a.label(MultiGraph::sink), edges);
}

/// Exact spanning-tree count of the multigraph (parallel edges distinct),
/// via fraction-free Bareiss elimination on the sink-reduced Laplacian.
inline BigInt spanning_tree_count(const MultiGraph& g) {
    const int n = g.nonsink_count();
    if (n == 0) return 1;

    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = g.degree(i + 1);
    for (const auto& pm : g.edge_pairs()) {
        if (pm.pair.u == MultiGraph::sink) continue;
        const int i = pm.pair.u - 1, j = pm.pair.v - 1;
        m[i][j] -= pm.mult;
        m[j][i] -= pm.mult;
    }

    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n; ++k) {
        if (m[k][k] == 0) {
            int pivot = -1;
            for (int r = k + 1; r < n; ++r)
                if (m[r][k] != 0) {
                    pivot = r;
                    break;
                }
            if (pivot == -1) return 0;
            std::swap(m[k], m[pivot]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

}  // namespace sandpile
