#pragma once

#include <optional>
#include <utility>

#include "sandpile/polynomial.hpp"
#include "sandpile/recurrent.hpp"
#include "sandpile/rng.hpp"

namespace sandpile {

/// Lacking polynomial by direct enumeration: the generating function of the
/// stochastically recurrent set by total lacking number.
inline Polynomial lacking_poly_enum(const MultiGraph& g, int max_edges = kEnumerationEdgeBound) {
    Polynomial poly;
    for (const Config& eta : sto_recurrent_set(g, max_edges)) poly.bump(total_lacking(g, eta));
    return poly;
}

namespace detail {

inline VertexPair pick_reducible(const MultiGraph& g, SplitMix64* edge_choice) {
    if (edge_choice == nullptr) {
        auto e = g.find_reducible_edge();
        if (!e)
            fail(Errc::IrreducibleComponent,
                 "component has no reducible edge; pruning or decomposition is broken");
        return *e;
    }
    const std::vector<VertexPair> candidates = g.reducible_edges();
    if (candidates.empty())
        fail(Errc::IrreducibleComponent, "component has no reducible edge; pruning or decomposition is broken");
    return candidates[edge_choice->below(candidates.size())];
}

}  // namespace detail

/// Lacking polynomial by deletion-contraction:
///   1. strip tree branches (they do not change the polynomial),
///   2. a lone sink contributes 1,
///   3. sink-glued components multiply,
///   4. a single vertex with k parallel sink edges contributes 1+x+...+x^(k-1),
///   5. otherwise pick an edge e that is neither a bridge nor sink-adjacent
///      and recurse: x * L(G minus e) + L(G contract e).
/// Passing an RNG randomises the choice in step 5; the value is independent
/// of that choice.
inline Polynomial lacking_poly_recurrence(const MultiGraph& g, SplitMix64* edge_choice = nullptr) {
    const MultiGraph pruned = g.prune_tree_branches();
    if (pruned.nonsink_count() == 0) return Polynomial::one();

    const std::vector<MultiGraph> components = pruned.sink_components();
    if (components.size() > 1) {
        Polynomial product = Polynomial::one();
        for (const MultiGraph& part : components) product = product * lacking_poly_recurrence(part, edge_choice);
        return product;
    }

    if (pruned.nonsink_count() == 1) return Polynomial::geometric(pruned.degree(1));

    const VertexPair e = detail::pick_reducible(pruned, edge_choice);
    const Polynomial deleted = lacking_poly_recurrence(pruned.delete_edge(e.u, e.v), edge_choice);
    const Polynomial contracted = lacking_poly_recurrence(pruned.contract_edge(e.u, e.v), edge_choice);
    return deleted.shifted() + contracted;
}

/// Which side of the deletion-contraction split a recurrent configuration
/// falls on, for a chosen edge e = {a,b}:
///   Deletion side: some compatible orientation sends an {a,b} copy a -> b
///   while b is lacking; its image lives on G minus e.
///   Contraction side: otherwise; its image lives on G contract e.
enum class SplitClass { Deletion, Contraction };

inline const char* split_class_name(SplitClass c) {
    return c == SplitClass::Deletion ? "deletion" : "contraction";
}

/// Endpoint labeling for the split; defaults to (smaller, larger).
struct EdgeLabeling {
    VertexId a;
    VertexId b;
};

inline EdgeLabeling default_labeling(VertexPair e) { return {e.u, e.v}; }

namespace detail {

inline void check_split_inputs(const MultiGraph& g, const Config& eta, VertexPair e, EdgeLabeling lab) {
    if (g.multiplicity(e.u, e.v) == 0) fail(Errc::BadEdge, "edge does not exist");
    if (e.u == MultiGraph::sink || e.v == MultiGraph::sink) fail(Errc::BadEdge, "edge touches the sink");
    if (g.is_bridge(e.u, e.v)) fail(Errc::BadEdge, "edge is a bridge");
    if (pair_key(lab.a, lab.b) != e) fail(Errc::BadEdge, "labeling does not match the edge");
    if (!is_sto_recurrent(g, eta).recurrent)
        fail(Errc::NotRecurrent, "configuration is not stochastically recurrent");
}

}  // namespace detail

/// Split decision by one max-flow with a forced edge: a copy of {a,b} is
/// pre-oriented a -> b (so b's demand drops by one) and the rest of the
/// routing must still be feasible.
inline SplitClass classify_config(const MultiGraph& g, const Config& eta, VertexPair e,
                                  std::optional<EdgeLabeling> labeling = std::nullopt) {
    const EdgeLabeling lab = labeling.value_or(default_labeling(e));
    detail::check_split_inputs(g, eta, e, lab);
    const int lacking_b = g.degree(lab.b) - eta[lab.b - 1];
    if (lacking_b == 0) return SplitClass::Contraction;

    const int m = g.edge_count();
    const int n = g.nonsink_count();
    const auto& copies = g.edge_copies();
    int forced = -1;  // one {a,b} copy, pre-oriented a -> b
    for (int i = 0; i < m; ++i)
        if (VertexPair{copies[i].u, copies[i].v} == e) {
            forced = i;
            break;
        }

    FlowNetwork net(2 + m + n);
    const int source = 0, target = 1;
    auto edge_node = [&](int i) { return 2 + i; };
    auto vertex_node = [&](VertexId v) { return 2 + m + (v - 1); };
    for (int i = 0; i < m; ++i) {
        if (i == forced) continue;
        net.add_arc(source, edge_node(i), 1);
        if (copies[i].u != MultiGraph::sink) net.add_arc(edge_node(i), vertex_node(copies[i].u), 1);
        if (copies[i].v != MultiGraph::sink) net.add_arc(edge_node(i), vertex_node(copies[i].v), 1);
    }
    int demand = 0;
    for (VertexId v = 1; v < g.vertex_count(); ++v) {
        int need = 1 + (g.degree(v) - eta[v - 1]);
        if (v == lab.b) need -= 1;  // satisfied by the forced copy
        if (need > 0) {
            demand += need;
            net.add_arc(vertex_node(v), target, need);
        }
    }
    return net.max_flow(source, target) == demand ? SplitClass::Deletion : SplitClass::Contraction;
}

/// Same decision by sweeping all orientations; the oracle for classify_config.
inline SplitClass classify_config_enum(const MultiGraph& g, const Config& eta, VertexPair e,
                                       std::optional<EdgeLabeling> labeling = std::nullopt,
                                       int max_edges = kEnumerationEdgeBound) {
    const EdgeLabeling lab = labeling.value_or(default_labeling(e));
    detail::check_split_inputs(g, eta, e, lab);
    check_edge_bound(g, max_edges);
    if (g.degree(lab.b) - eta[lab.b - 1] == 0) return SplitClass::Contraction;

    const int m = g.edge_count();
    const auto& copies = g.edge_copies();
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
        const Orientation o{mask};
        if (!is_compatible(g, eta, o)) continue;
        for (int i = 0; i < m; ++i)
            if (VertexPair{copies[i].u, copies[i].v} == e && o.head(copies[i], i) == lab.b)
                return SplitClass::Deletion;
    }
    return SplitClass::Contraction;
}

struct SplitImage {
    SplitClass cls;
    Config image;  // on G minus e (Deletion) or on G contract e (Contraction)
};

/// The counting bijection behind the deletion-contraction recurrence.
/// Deletion-side configurations map to eta - 1_a on G minus e (total lacking
/// drops by one). Contraction-side configurations keep every lacking number:
/// the merged vertex of G contract e has degree d(a)+d(b)-k-1 for a pair of
/// multiplicity k, so it receives eta_a + eta_b - (k+1) grains.
inline SplitImage bijection_image(const MultiGraph& g, const Config& eta, VertexPair e,
                                  std::optional<EdgeLabeling> labeling = std::nullopt) {
    const EdgeLabeling lab = labeling.value_or(default_labeling(e));
    const SplitClass cls = classify_config(g, eta, e, lab);
    if (cls == SplitClass::Deletion) {
        Config image = eta;  // deletion keeps the vertex order
        image[lab.a - 1] -= 1;
        return {cls, std::move(image)};
    }
    const MultiGraph contracted = g.contract_edge(e.u, e.v);
    const std::string merged_label = g.label(e.u) + "." + g.label(e.v);
    const int mult = g.multiplicity(e.u, e.v);
    Config image(contracted.nonsink_count(), 0);
    for (VertexId v = 1; v < contracted.vertex_count(); ++v) {
        if (contracted.label(v) == merged_label)
            image[v - 1] = eta[lab.a - 1] + eta[lab.b - 1] - (mult + 1);
        else
            image[v - 1] = eta[*g.find_vertex(contracted.label(v)) - 1];
    }
    return {cls, std::move(image)};
}

}  // namespace sandpile
