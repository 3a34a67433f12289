#pragma once

#include <vector>

#include "sandpile/multigraph.hpp"

namespace sandpile {

/// Grain counts over non-sink vertices; index i holds vertex i+1. A value is
/// meaningful only relative to the graph it was built against.
using Config = std::vector<int>;

inline void check_config(const MultiGraph& g, const Config& eta) {
    if (static_cast<int>(eta.size()) != g.nonsink_count())
        fail(Errc::BadInput, "configuration length does not match non-sink vertex count");
    for (int grains : eta)
        if (grains < 0) fail(Errc::BadInput, "negative grain count");
}

/// Stable: eta_v <= d(v) at every non-sink vertex.
inline bool is_stable(const MultiGraph& g, const Config& eta) {
    check_config(g, eta);
    for (VertexId v = 1; v < g.vertex_count(); ++v)
        if (eta[v - 1] > g.degree(v)) return false;
    return true;
}

/// The degree vector, the maximal stable configuration.
inline Config max_stable(const MultiGraph& g) {
    Config eta(g.nonsink_count());
    for (VertexId v = 1; v < g.vertex_count(); ++v) eta[v - 1] = g.degree(v);
    return eta;
}

inline void require_stable(const MultiGraph& g, const Config& eta) {
    if (!is_stable(g, eta)) fail(Errc::UnstableConfiguration, "configuration is not stable");
}

/// d(v) - eta_v for stable eta.
inline int lacking_number(const MultiGraph& g, const Config& eta, VertexId v) {
    require_stable(g, eta);
    if (v <= 0 || v >= g.vertex_count()) fail(Errc::BadInput, "vertex out of range");
    return g.degree(v) - eta[v - 1];
}

inline int total_lacking(const MultiGraph& g, const Config& eta) {
    require_stable(g, eta);
    int total = 0;
    for (VertexId v = 1; v < g.vertex_count(); ++v) total += g.degree(v) - eta[v - 1];
    return total;
}

inline Config add_grain(const MultiGraph& g, const Config& eta, VertexId v) {
    check_config(g, eta);
    if (v == MultiGraph::sink) fail(Errc::SinkVertex, "cannot add a grain at the sink");
    if (v < 0 || v >= g.vertex_count()) fail(Errc::BadInput, "vertex out of range");
    Config out = eta;
    out[v - 1] += 1;
    return out;
}

}  // namespace sandpile
