#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "sandpile/config.hpp"
#include "sandpile/rng.hpp"

namespace sandpile {

enum class TopplePolicy { Fifo, RandomEligible };

inline const char* policy_name(TopplePolicy p) {
    return p == TopplePolicy::Fifo ? "fifo" : "random-eligible";
}

struct StochasticParams {
    double p = 1.0;               // per-edge transfer probability, in (0,1]
    std::vector<double> mu;       // addition weights over non-sink vertices; empty = uniform
    std::uint64_t seed = 0;
    long long max_topplings = 10'000'000;  // per stabilisation; converts nontermination bugs into errors
    TopplePolicy policy = TopplePolicy::Fifo;
};

inline void check_params(const MultiGraph& g, const StochasticParams& params) {
    if (!(params.p > 0.0 && params.p <= 1.0)) fail(Errc::BadInput, "p must lie in (0,1]");
    if (!params.mu.empty()) {
        if (static_cast<int>(params.mu.size()) != g.nonsink_count())
            fail(Errc::BadInput, "mu weight count does not match non-sink vertex count");
        for (double w : params.mu)
            if (!(w > 0.0)) fail(Errc::BadInput, "mu weights must be strictly positive");
    }
    if (params.max_topplings < 1) fail(Errc::BadInput, "max_topplings must be positive");
}

inline bool unstable_at(const MultiGraph& g, const Config& eta, VertexId x) {
    return eta[x - 1] > g.degree(x);
}

/// Deterministic toppling: x loses d(x) grains, each non-sink neighbor gains
/// the multiplicity of its connection, sink-bound grains vanish.
inline Config topple(const MultiGraph& g, const Config& eta, VertexId x) {
    check_config(g, eta);
    if (x <= 0 || x >= g.vertex_count()) fail(Errc::BadInput, "vertex out of range");
    if (!unstable_at(g, eta, x))
        fail(Errc::IllegalToppling, "vertex " + g.label(x) + " is not unstable");
    Config out = eta;
    out[x - 1] -= g.degree(x);
    for (const auto& [y, mult] : g.neighbors(x))
        if (y != MultiGraph::sink) out[y - 1] += mult;
    return out;
}

struct StabilizeResult {
    Config config;
    long long topplings = 0;
    long long grains_to_sink = 0;
};

/// Exhaustive deterministic toppling; the result is order-independent, the
/// queue order here is just one choice.
inline StabilizeResult stabilize(const MultiGraph& g, Config eta) {
    check_config(g, eta);
    StabilizeResult result;
    std::deque<VertexId> queue;
    std::vector<char> queued(g.vertex_count(), 0);
    for (VertexId v = 1; v < g.vertex_count(); ++v)
        if (unstable_at(g, eta, v)) {
            queue.push_back(v);
            queued[v] = 1;
        }
    while (!queue.empty()) {
        const VertexId x = queue.front();
        queue.pop_front();
        queued[x] = 0;
        while (unstable_at(g, eta, x)) {
            eta[x - 1] -= g.degree(x);
            for (const auto& [y, mult] : g.neighbors(x)) {
                if (y == MultiGraph::sink) {
                    result.grains_to_sink += mult;
                } else {
                    eta[y - 1] += mult;
                    if (unstable_at(g, eta, y) && !queued[y]) {
                        queue.push_back(y);
                        queued[y] = 1;
                    }
                }
            }
            result.topplings += 1;
        }
    }
    result.config = std::move(eta);
    return result;
}

struct StochasticTopple {
    Config config;
    std::vector<std::uint8_t> moved;  // one flag per incident edge copy of x, canonical copy order
    int grains_to_sink = 0;
};

/// Stochastic toppling: each incident edge copy independently carries one
/// grain away from x with probability p. The all-zeros draw is permitted and
/// leaves the configuration unchanged.
inline StochasticTopple topple_stochastic(const MultiGraph& g, const Config& eta, VertexId x, double p,
                                          SplitMix64& rng) {
    check_config(g, eta);
    if (x <= 0 || x >= g.vertex_count()) fail(Errc::BadInput, "vertex out of range");
    if (!unstable_at(g, eta, x))
        fail(Errc::IllegalToppling, "vertex " + g.label(x) + " is not unstable");
    StochasticTopple result;
    result.config = eta;
    for (const EdgeCopy& e : g.edge_copies()) {
        if (e.u != x && e.v != x) continue;
        const bool carry = rng.bernoulli(p);
        result.moved.push_back(carry ? 1 : 0);
        if (!carry) continue;
        result.config[x - 1] -= 1;
        const VertexId other = e.u == x ? e.v : e.u;
        if (other == MultiGraph::sink)
            result.grains_to_sink += 1;
        else
            result.config[other - 1] += 1;
    }
    return result;
}

/// Repeats stochastic topplings until stable. FIFO policy re-enqueues a
/// still-unstable vertex at the back; RandomEligible picks uniformly among
/// the currently unstable vertices. Both sample the same stabilisation law.
inline StabilizeResult stabilize_stochastic(const MultiGraph& g, Config eta, const StochasticParams& params,
                                            SplitMix64& rng) {
    check_config(g, eta);
    check_params(g, params);
    StabilizeResult result;

    auto step = [&](VertexId x) {
        if (result.topplings >= params.max_topplings)
            fail(Errc::SafetyCapExceeded,
                 "stabilisation exceeded " + std::to_string(params.max_topplings) + " topplings");
        StochasticTopple t = topple_stochastic(g, eta, x, params.p, rng);
        eta = std::move(t.config);
        result.grains_to_sink += t.grains_to_sink;
        result.topplings += 1;
    };

    if (params.policy == TopplePolicy::Fifo) {
        std::deque<VertexId> queue;
        std::vector<char> queued(g.vertex_count(), 0);
        for (VertexId v = 1; v < g.vertex_count(); ++v)
            if (unstable_at(g, eta, v)) {
                queue.push_back(v);
                queued[v] = 1;
            }
        while (!queue.empty()) {
            const VertexId x = queue.front();
            queue.pop_front();
            queued[x] = 0;
            if (!unstable_at(g, eta, x)) continue;
            step(x);
            for (const auto& [y, mult] : g.neighbors(x))
                if (y != MultiGraph::sink && unstable_at(g, eta, y) && !queued[y]) {
                    queue.push_back(y);
                    queued[y] = 1;
                }
            if (unstable_at(g, eta, x) && !queued[x]) {
                queue.push_back(x);
                queued[x] = 1;
            }
        }
    } else {
        std::vector<VertexId> unstable;
        for (VertexId v = 1; v < g.vertex_count(); ++v)
            if (unstable_at(g, eta, v)) unstable.push_back(v);
        while (!unstable.empty()) {
            const std::size_t i = rng.below(unstable.size());
            const VertexId x = unstable[i];
            step(x);
            unstable.clear();
            for (VertexId v = 1; v < g.vertex_count(); ++v)
                if (unstable_at(g, eta, v)) unstable.push_back(v);
        }
    }
    result.config = std::move(eta);
    return result;
}

struct ChainStats {
    long long steps = 0;
    long long burnin = 0;
    std::map<Config, long long> occupancy;  // stable configuration -> visits after burn-in
    double mean_topplings = 0.0;
    long long max_topplings_step = 0;
    long long grains_to_sink = 0;
    Config final_config;
    double p = 1.0;
    std::vector<double> mu;
    std::uint64_t seed = 0;
    std::string rng_name = SplitMix64::name();
    TopplePolicy policy = TopplePolicy::Fifo;
};

/// Runs the sandpile Markov chain: each step adds a grain at a mu-sampled
/// vertex and stabilises stochastically. Fully reproducible from the seed.
/// The first `burnin` steps are performed but excluded from the statistics.
inline ChainStats run_chain(const MultiGraph& g, const Config& eta0, const StochasticParams& params,
                            long long steps, long long burnin = 0) {
    check_params(g, params);
    require_stable(g, eta0);
    if (steps < 0 || burnin < 0) fail(Errc::BadInput, "negative step count");

    ChainStats stats;
    stats.steps = steps;
    stats.burnin = burnin;
    stats.p = params.p;
    stats.mu = params.mu.empty() ? std::vector<double>(g.nonsink_count(), 1.0) : params.mu;
    stats.seed = params.seed;
    stats.policy = params.policy;

    SplitMix64 rng(params.seed);
    Config eta = eta0;
    long long toppling_total = 0;
    for (long long i = 0; i < burnin + steps; ++i) {
        const VertexId v = static_cast<VertexId>(pick_weighted(rng, stats.mu)) + 1;
        StabilizeResult r = stabilize_stochastic(g, add_grain(g, eta, v), params, rng);
        eta = std::move(r.config);
        if (i >= burnin) {
            stats.occupancy[eta] += 1;
            toppling_total += r.topplings;
            stats.max_topplings_step = std::max(stats.max_topplings_step, r.topplings);
            stats.grains_to_sink += r.grains_to_sink;
        }
    }
    stats.mean_topplings = steps > 0 ? static_cast<double>(toppling_total) / static_cast<double>(steps) : 0.0;
    stats.final_config = std::move(eta);
    return stats;
}

}  // namespace sandpile
