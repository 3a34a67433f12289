#pragma once

#include <string>
#include <vector>

#include "sandpile/graph_json.hpp"
#include "sandpile/lacking.hpp"
#include "sandpile/random_graph.hpp"

namespace sandpile {

struct CheckResult {
    std::string name;
    bool pass = true;
    nlohmann::json detail;  // counterexample data on failure
};

struct VerifyOptions {
    int sampled_configs = 25;         // per-graph samples for the sampled checks
    bool corrupt_enum_oracle = false;  // test hook: perturbs the enumeration-side polynomial
    int edge_bound = kEnumerationEdgeBound;
    long long state_bound = kStateSpaceBound;
};

/// Runs every cross-module invariant on one graph. Exhaustive where the
/// graph is small enough (these are meant for desk-scale instances), sampled
/// where the state space is unbounded.
inline std::vector<CheckResult> verify_graph(const MultiGraph& g, const VerifyOptions& opt = {},
                                             std::uint64_t seed = 1) {
    std::vector<CheckResult> results;
    SplitMix64 rng(seed);
    const nlohmann::json graph_json = graph_to_json(g);
    auto check = [&](const std::string& name, bool pass, nlohmann::json detail = {}) {
        if (!pass) detail["graph"] = graph_json;
        results.push_back({name, pass, std::move(detail)});
    };

    const std::set<Config> sto = sto_recurrent_set(g, opt.edge_bound);
    const std::set<Config> det = det_recurrent_set(g, opt.state_bound);

    // recurrent sets: three independent routes to Sto
    {
        std::set<Config> via_flow;
        bool witnesses_ok = true;
        Config bad_witness;
        for_each_stable(g, opt.state_bound, [&](const Config& eta) {
            const SrTest t = is_sto_recurrent(g, eta);
            if (t.recurrent) {
                via_flow.insert(eta);
                if (!is_compatible(g, eta, *t.witness)) {
                    witnesses_ok = false;
                    bad_witness = eta;
                }
            }
        });
        check("sto-enumeration-equals-flow", via_flow == sto,
              {{"flow_only", config_set_to_json(via_flow)}, {"enumeration", config_set_to_json(sto)}});
        check("sr-witness-is-compatible", witnesses_ok, {{"config", bad_witness}});

        const std::set<Config> reachable = sto_reachable_set(g, opt.state_bound);
        check("sto-enumeration-equals-reachability", reachable == sto,
              {{"reachable", config_set_to_json(reachable)}, {"enumeration", config_set_to_json(sto)}});
    }

    // deterministic recurrence: burning vs acyclic orientations
    {
        bool agree = true;
        Config mismatch;
        for_each_stable(g, opt.state_bound, [&](const Config& eta) {
            if (!agree) return;
            if (burning_test(g, eta).recurrent != is_det_recurrent_acyclic(g, eta, opt.edge_bound)) {
                agree = false;
                mismatch = eta;
            }
        });
        check("burning-equals-acyclic-orientation", agree, {{"config", mismatch}});
    }

    check("det-subset-of-sto", std::includes(sto.begin(), sto.end(), det.begin(), det.end()));

    {
        const BigInt trees = spanning_tree_count(g);
        check("det-count-equals-spanning-trees", BigInt(det.size()) == trees,
              {{"det_count", det.size()}, {"spanning_trees", bigint_to_json(trees)}});
    }

    // lacking polynomial: enumeration vs deletion-contraction
    {
        Polynomial by_enum = lacking_poly_enum(g, opt.edge_bound);
        if (opt.corrupt_enum_oracle) by_enum = by_enum + Polynomial::one();  // deliberately wrong
        const Polynomial by_rec = lacking_poly_recurrence(g);
        check("poly-enumeration-equals-recurrence", by_enum == by_rec,
              {{"enumeration", polynomial_to_json(by_enum)}, {"recurrence", polynomial_to_json(by_rec)}});
        check("poly-degree-equals-cycle-count", by_rec.degree() == g.cycle_count(),
              {{"degree", by_rec.degree()}, {"cycle_count", g.cycle_count()}});
        check("poly-constant-term-is-one", by_rec.coeff(0) == 1);
        check("poly-at-one-counts-sto", by_rec.eval(1) == BigInt(sto.size()),
              {{"eval", bigint_to_json(by_rec.eval(1))}, {"sto_count", sto.size()}});

        SplitMix64 branch_rng(seed ^ 0xb7a3c5);
        const MultiGraph grown = attach_random_branch(g, branch_rng);
        check("poly-ignores-tree-branches", lacking_poly_recurrence(grown) == by_rec,
              {{"grown_graph", graph_to_json(grown)}});

        const MultiGraph doubled = glue_at_sink(g, g);
        check("poly-multiplies-over-sink-glue", lacking_poly_recurrence(doubled) == by_rec * by_rec,
              {{"glued_graph", graph_to_json(doubled)}});

        SplitMix64 pick_rng(seed ^ 0x51e2d);
        check("poly-recurrence-edge-choice-free", lacking_poly_recurrence(g, &pick_rng) == by_rec);
    }

    // bijection behind the recurrence, on the canonical reducible edge
    if (auto e = g.find_reducible_edge()) {
        const MultiGraph minus = g.delete_edge(e->u, e->v);
        const MultiGraph contracted = g.contract_edge(e->u, e->v);
        const std::set<Config> sto_minus = sto_recurrent_set(minus, opt.edge_bound);
        const std::set<Config> sto_contracted = sto_recurrent_set(contracted, opt.edge_bound);

        std::set<Config> images_deletion, images_contraction;
        bool classes_agree = true, lacking_ok = true, injective = true;
        for (const Config& eta : sto) {
            if (classify_config(g, eta, *e) != classify_config_enum(g, eta, *e, std::nullopt, opt.edge_bound))
                classes_agree = false;
            const SplitImage img = bijection_image(g, eta, *e);
            if (img.cls == SplitClass::Deletion) {
                if (total_lacking(minus, img.image) != total_lacking(g, eta) - 1) lacking_ok = false;
                if (!images_deletion.insert(img.image).second) injective = false;
            } else {
                if (total_lacking(contracted, img.image) != total_lacking(g, eta)) lacking_ok = false;
                if (!images_contraction.insert(img.image).second) injective = false;
            }
        }
        check("split-flow-equals-enumeration", classes_agree);
        check("bijection-injective", injective);
        check("bijection-preserves-lacking-bookkeeping", lacking_ok);
        check("bijection-image-is-deleted-sto", images_deletion == sto_minus,
              {{"images", config_set_to_json(images_deletion)}, {"expected", config_set_to_json(sto_minus)}});
        check("bijection-image-is-contracted-sto", images_contraction == sto_contracted,
              {{"images", config_set_to_json(images_contraction)},
               {"expected", config_set_to_json(sto_contracted)}});
    }

    // dynamics: p=1 degeneration, conservation, stability closure
    {
        bool p1_ok = true, conserve_ok = true, closure_ok = true;
        Config bad;
        for (int i = 0; i < opt.sampled_configs; ++i) {
            const Config eta = random_config(g, rng, 2 * g.edge_count() + 2);
            const StabilizeResult det_r = stabilize(g, eta);
            if (!is_stable(g, det_r.config)) closure_ok = false;

            StochasticParams params;
            params.p = 1.0;
            SplitMix64 ssm_rng(rng.next());
            const StabilizeResult sto_r = stabilize_stochastic(g, eta, params, ssm_rng);
            if (sto_r.config != det_r.config) {
                p1_ok = false;
                bad = eta;
            }

            long long before = 0, after = 0;
            for (int x : eta) before += x;
            for (int x : det_r.config) after += x;
            if (before - after != det_r.grains_to_sink) conserve_ok = false;
        }
        check("stochastic-p1-matches-deterministic", p1_ok, {{"config", bad}});
        check("grain-conservation", conserve_ok);
        check("stabilise-reaches-stable", closure_ok);
    }

    return results;
}

/// Seeded campaign over random graphs; results are flattened with a
/// per-graph index in each failing detail.
inline std::vector<CheckResult> verify_random(int graphs, int max_edges, std::uint64_t seed,
                                              const VerifyOptions& opt = {}) {
    std::vector<CheckResult> all;
    SplitMix64 rng(seed);
    for (int i = 0; i < graphs; ++i) {
        const MultiGraph g = random_connected_multigraph(rng, 5, max_edges);
        for (CheckResult& r : verify_graph(g, opt, rng.next())) {
            if (!r.pass) r.detail["graph_index"] = i;
            all.push_back(std::move(r));
        }
    }
    return all;
}

}  // namespace sandpile
