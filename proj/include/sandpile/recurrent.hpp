#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <unordered_set>
#include <vector>

#include "sandpile/maxflow.hpp"
#include "sandpile/orientation.hpp"

namespace sandpile {

inline constexpr int kEnumerationEdgeBound = 24;       // 2^|E| orientation sweeps
inline constexpr long long kStateSpaceBound = 1'000'000;  // stable configurations

inline void check_edge_bound(const MultiGraph& g, int max_edges) {
    if (g.edge_count() > max_edges)
        fail(Errc::TooManyEdges, "orientation enumeration limited to " + std::to_string(max_edges) + " edges");
}

/// Number of stable configurations, capped at `bound` (throws past it).
inline long long stable_count(const MultiGraph& g, long long bound) {
    long long product = 1;
    for (VertexId v = 1; v < g.vertex_count(); ++v) {
        product *= g.degree(v) + 1;
        if (product > bound)
            fail(Errc::StateSpaceTooLarge, "stable state space exceeds " + std::to_string(bound));
    }
    return product;
}

/// Visits every stable configuration in ascending mixed-radix order.
template <typename Fn>
void for_each_stable(const MultiGraph& g, long long bound, Fn&& fn) {
    stable_count(g, bound);
    const int n = g.nonsink_count();
    Config eta(n, 0);
    while (true) {
        fn(const_cast<const Config&>(eta));
        int i = n - 1;
        while (i >= 0 && eta[i] == g.degree(i + 1)) {
            eta[i] = 0;
            --i;
        }
        if (i < 0) break;
        eta[i] += 1;
    }
}

/// Stochastically recurrent set as the union of compatible boxes over all
/// 2^|E| orientations.
inline std::set<Config> sto_recurrent_set(const MultiGraph& g, int max_edges = kEnumerationEdgeBound) {
    check_edge_bound(g, max_edges);
    std::set<Config> out;
    const int m = g.edge_count();
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask)
        for (Config& eta : comp_set(g, Orientation{mask})) out.insert(std::move(eta));
    return out;
}

struct SrTest {
    bool recurrent = false;
    std::optional<Orientation> witness;  // compatible orientation when recurrent
};

/// Polynomial-time membership test for the stochastically recurrent set:
/// route one unit of supply per edge copy to one of its endpoints so that
/// every non-sink vertex v collects at least 1 + lacking(v). Feasibility of
/// the routing is exactly the existence of a compatible orientation; edge
/// copies the flow leaves unused are oriented into their smaller endpoint.
inline SrTest is_sto_recurrent(const MultiGraph& g, const Config& eta) {
    require_stable(g, eta);
    const int m = g.edge_count();
    const int n = g.nonsink_count();
    if (m > 64) fail(Errc::TooManyEdges, "witness orientations are limited to 64 edge copies");

    // quick reject: a vertex can never collect more than its degree
    for (VertexId v = 1; v < g.vertex_count(); ++v)
        if (1 + (g.degree(v) - eta[v - 1]) > g.degree(v)) return {};

    // nodes: 0 = source, 1 = target, 2..2+m-1 edge copies, 2+m.. vertices
    FlowNetwork net(2 + m + n);
    const auto source = 0, target = 1;
    auto edge_node = [&](int i) { return 2 + i; };
    auto vertex_node = [&](VertexId v) { return 2 + m + (v - 1); };

    const auto& copies = g.edge_copies();
    std::vector<std::pair<FlowNetwork::ArcRef, FlowNetwork::ArcRef>> choice(m);
    for (int i = 0; i < m; ++i) {
        net.add_arc(source, edge_node(i), 1);
        FlowNetwork::ArcRef to_u{-1, -1}, to_v{-1, -1};
        if (copies[i].u != MultiGraph::sink) to_u = net.add_arc(edge_node(i), vertex_node(copies[i].u), 1);
        if (copies[i].v != MultiGraph::sink) to_v = net.add_arc(edge_node(i), vertex_node(copies[i].v), 1);
        choice[i] = {to_u, to_v};
    }
    int demand = 0;
    for (VertexId v = 1; v < g.vertex_count(); ++v) {
        const int need = 1 + (g.degree(v) - eta[v - 1]);
        demand += need;
        net.add_arc(vertex_node(v), target, need);
    }
    if (net.max_flow(source, target) != demand) return {};

    Orientation witness;
    for (int i = 0; i < m; ++i) {
        const auto& [to_u, to_v] = choice[i];
        if (to_u.from >= 0 && net.flow_on(to_u) > 0)
            witness.bits |= 1ULL << i;  // routed into the smaller endpoint
        // otherwise leave the bit clear: routed into v, or unused (default u->v)
    }
    return {true, witness};
}

struct BurnResult {
    bool recurrent = false;
    std::vector<VertexId> order;  // burn order, sink first
};

/// Burning test for deterministic recurrence: starting from the sink, a
/// vertex burns when its grain count exceeds its number of edges to unburnt
/// vertices. Always burns the smallest-index eligible vertex next.
inline BurnResult burning_test(const MultiGraph& g, const Config& eta) {
    require_stable(g, eta);
    BurnResult result;
    std::vector<char> burnt(g.vertex_count(), 0);
    std::vector<int> unburnt_edges(g.vertex_count(), 0);
    for (VertexId v = 1; v < g.vertex_count(); ++v)
        unburnt_edges[v] = g.degree(v) - g.multiplicity(v, MultiGraph::sink);
    burnt[MultiGraph::sink] = 1;
    result.order.push_back(MultiGraph::sink);

    bool progress = true;
    while (progress) {
        progress = false;
        for (VertexId v = 1; v < g.vertex_count(); ++v) {
            if (burnt[v] || eta[v - 1] <= unburnt_edges[v]) continue;
            burnt[v] = 1;
            result.order.push_back(v);
            for (const auto& [y, mult] : g.neighbors(v))
                if (!burnt[y]) unburnt_edges[y] -= mult;
            progress = true;
            break;
        }
    }
    result.recurrent = static_cast<int>(result.order.size()) == g.vertex_count();
    return result;
}

/// Deterministic recurrence via orientations: some acyclic orientation is
/// compatible with eta. Exponential in |E|; the burning test is the fast
/// route, this one is its independent characterisation.
inline bool is_det_recurrent_acyclic(const MultiGraph& g, const Config& eta,
                                     int max_edges = kEnumerationEdgeBound) {
    require_stable(g, eta);
    check_edge_bound(g, max_edges);
    const int m = g.edge_count();
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
        const Orientation o{mask};
        if (is_compatible(g, eta, o) && is_acyclic(g, o)) return true;
    }
    return false;
}

/// Deterministically recurrent set: all stable configurations that pass the
/// burning test, in ascending order.
inline std::set<Config> det_recurrent_set(const MultiGraph& g, long long max_states = kStateSpaceBound) {
    std::set<Config> out;
    for_each_stable(g, max_states, [&](const Config& eta) {
        if (burning_test(g, eta).recurrent) out.insert(eta);
    });
    return out;
}

namespace detail {

/// Dense-or-sparse visited set over configurations encoded in mixed radix.
class VisitedSet {
public:
    VisitedSet(std::uint64_t universe) {
        if (universe <= (1ULL << 26)) dense_.assign(universe, 0);
    }
    bool insert(std::uint64_t key) {
        if (!dense_.empty()) {
            if (dense_[key]) return false;
            dense_[key] = 1;
            return true;
        }
        return sparse_.insert(key).second;
    }

private:
    std::vector<std::uint8_t> dense_;
    std::unordered_set<std::uint64_t> sparse_;
};

}  // namespace detail

/// Independent reachability oracle for the stochastically recurrent set:
/// breadth-first closure from the maximal configuration, where stable states
/// branch by single grain additions and unstable states branch by every
/// nonzero way a toppling vertex can distribute grains over its incident
/// edge bundles. Total grains never exceed (sum of degrees) + 1, which keeps
/// the walk finite.
inline std::set<Config> sto_reachable_set(const MultiGraph& g, long long max_states = kStateSpaceBound) {
    stable_count(g, max_states);
    const int n = g.nonsink_count();
    long long degree_sum = 0;
    for (VertexId v = 1; v < g.vertex_count(); ++v) degree_sum += g.degree(v);
    const long long grain_cap = degree_sum + 1;
    const std::uint64_t base = static_cast<std::uint64_t>(grain_cap) + 1;

    std::uint64_t universe = 1;
    bool encodable = true;
    for (int i = 0; i < n; ++i) {
        if (universe > (1ULL << 62) / base) {
            encodable = false;
            break;
        }
        universe *= base;
    }
    if (!encodable) fail(Errc::StateSpaceTooLarge, "reachability key space too large");

    auto encode = [&](const Config& eta) {
        std::uint64_t key = 0;
        for (int i = n - 1; i >= 0; --i) key = key * base + static_cast<std::uint64_t>(eta[i]);
        return key;
    };

    detail::VisitedSet visited(universe);
    std::deque<Config> queue;
    std::set<Config> recurrent;

    auto push = [&](Config eta) {
        if (visited.insert(encode(eta))) queue.push_back(std::move(eta));
    };

    push(max_stable(g));
    while (!queue.empty()) {
        Config eta = std::move(queue.front());
        queue.pop_front();

        bool stable = true;
        for (VertexId x = 1; x < g.vertex_count(); ++x) {
            if (eta[x - 1] <= g.degree(x)) continue;
            stable = false;
            // distribute 0..mult grains along each incident bundle, skip the all-zero split
            const auto& bundles = g.neighbors(x);
            std::vector<int> send(bundles.size(), 0);
            while (true) {
                int i = 0;
                while (i < static_cast<int>(send.size()) && send[i] == bundles[i].second) {
                    send[i] = 0;
                    ++i;
                }
                if (i == static_cast<int>(send.size())) break;
                send[i] += 1;
                Config next = eta;
                for (std::size_t b = 0; b < bundles.size(); ++b) {
                    next[x - 1] -= send[b];
                    if (bundles[b].first != MultiGraph::sink) next[bundles[b].first - 1] += send[b];
                }
                push(std::move(next));
            }
        }
        if (stable) {
            long long total = 0;
            for (int v = 0; v < n; ++v) total += eta[v];
            if (total < grain_cap) {  // one addition keeps the walk inside the cap
                for (VertexId v = 1; v < g.vertex_count(); ++v) push(add_grain(g, eta, v));
            }
            recurrent.insert(std::move(eta));
        }
    }
    return recurrent;
}

}  // namespace sandpile
