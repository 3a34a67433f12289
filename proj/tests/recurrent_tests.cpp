#include <algorithm>

#include "catch_helpers.hpp"
#include "sandpile/random_graph.hpp"
#include "sandpile/recurrent.hpp"
#include "test_support.hpp"

using namespace sandpile;
using namespace testsupport;

namespace {

Orientation arrows(const MultiGraph& g, std::vector<std::pair<std::string, std::string>> list) {
    return orientation_from_arrows(g, list);
}

/// Oracle: SR membership by sweeping all orientations.
bool sr_by_enumeration(const MultiGraph& g, const Config& eta) {
    const int m = g.edge_count();
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask)
        if (is_compatible(g, eta, Orientation{mask})) return true;
    return false;
}

}  // namespace

TEST_CASE("indegree counts incoming copies") {
    const MultiGraph g = fig1();
    const Orientation o = arrows(g, {{"s", "v1"}, {"v1", "v2"}, {"v1", "v3"}, {"v2", "v3"}});
    CHECK(indegree(g, o, *g.find_vertex("v1")) == 1);
    CHECK(indegree(g, o, *g.find_vertex("v2")) == 1);
    CHECK(indegree(g, o, *g.find_vertex("v3")) == 2);
    CHECK(indegree(g, o, MultiGraph::sink) == 0);

    SplitMix64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const MultiGraph r = random_connected_multigraph(rng);
        const Orientation random_o{rng.next() & ((1ULL << r.edge_count()) - 1)};
        int total = 0;
        for (VertexId v = 0; v < r.vertex_count(); ++v) total += indegree(r, random_o, v);
        CHECK(total == r.edge_count());
    }
}

TEST_CASE("compatibility inequality per vertex") {
    const MultiGraph g = fig1();
    // l=(0,0,1), in=(1,2,1): v3 needs indegree >= 2
    CHECK_FALSE(is_compatible(g, {3, 2, 1}, arrows(g, {{"s", "v1"}, {"v1", "v2"}, {"v3", "v2"}, {"v1", "v3"}})));
    // l=(1,0,0), in=(2,1,1)
    CHECK(is_compatible(g, {2, 2, 2}, arrows(g, {{"s", "v1"}, {"v2", "v1"}, {"v3", "v2"}, {"v1", "v3"}})));
    CHECK_FAILS_WITH(is_compatible(g, {4, 2, 2}, Orientation{0}), Errc::UnstableConfiguration);
}

TEST_CASE("comp_set is the compatibility box") {
    const MultiGraph g = fig1();
    const auto box = comp_set(g, arrows(g, {{"s", "v1"}, {"v1", "v2"}, {"v1", "v3"}, {"v2", "v3"}}));
    CHECK(box == std::vector<Config>{{3, 2, 1}, {3, 2, 2}});

    // all edges out of v1: v1 has indegree 0 except from s-edge reversed away
    const auto empty_box = comp_set(g, arrows(g, {{"v1", "s"}, {"v1", "v2"}, {"v1", "v3"}, {"v2", "v3"}}));
    CHECK(empty_box.empty());

    SplitMix64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const MultiGraph r = random_connected_multigraph(rng);
        const Orientation o{rng.next() & ((1ULL << r.edge_count()) - 1)};
        const auto configs = comp_set(r, o);
        bool all_in = true;
        for (VertexId v = 1; v < r.vertex_count(); ++v)
            if (indegree(r, o, v) == 0) all_in = false;
        CHECK(configs.empty() == !all_in);
        if (all_in) CHECK(std::find(configs.begin(), configs.end(), max_stable(r)) != configs.end());
        for (const Config& eta : configs) CHECK(is_compatible(r, eta, o));
    }
}

TEST_CASE("stochastically recurrent sets of the fixtures") {
    const std::set<Config> fig1_sto = sto_recurrent_set(fig1());
    CHECK(fig1_sto == std::set<Config>{{2, 2, 2}, {3, 1, 2}, {3, 2, 1}, {3, 2, 2}});

    const MultiGraph tree = load_fixture("tree.json");
    CHECK(sto_recurrent_set(tree) == std::set<Config>{max_stable(tree)});

    const std::set<Config> fig2_sto = sto_recurrent_set(fig2_left());
    const std::set<Config> expected = {
        {3, 1, 2, 3}, {3, 2, 1, 3}, {3, 2, 2, 3}, {3, 3, 1, 2}, {3, 3, 1, 3}, {3, 3, 2, 1}, {3, 3, 2, 2},
        {3, 3, 2, 3}, {1, 3, 2, 3}, {2, 2, 2, 3}, {2, 3, 1, 3}, {2, 3, 2, 2}, {2, 3, 2, 3}, {3, 2, 2, 2}};
    CHECK(fig2_sto == expected);
}

TEST_CASE("flow membership test with witness") {
    const MultiGraph g = fig1();
    const SrTest yes = is_sto_recurrent(g, {2, 2, 2});
    REQUIRE(yes.recurrent);
    REQUIRE(yes.witness.has_value());
    CHECK(is_compatible(g, {2, 2, 2}, *yes.witness));

    CHECK_FALSE(is_sto_recurrent(g, {1, 2, 2}).recurrent);
    CHECK_FALSE(is_sto_recurrent(g, {0, 2, 2}).recurrent);  // a zero entry is never recurrent
    CHECK_FALSE(is_sto_recurrent(g, {3, 2, 0}).recurrent);
    CHECK_FAILS_WITH(is_sto_recurrent(g, {4, 2, 2}), Errc::UnstableConfiguration);
}

TEST_CASE("flow test equals orientation enumeration on fig1 and random graphs") {
    const MultiGraph g = fig1();
    for_each_stable(g, 1000, [&](const Config& eta) {
        CHECK(is_sto_recurrent(g, eta).recurrent == sr_by_enumeration(g, eta));
    });

    SplitMix64 rng(60601);
    for (int trial = 0; trial < 25; ++trial) {
        const MultiGraph r = random_connected_multigraph(rng);
        for_each_stable(r, 100000, [&](const Config& eta) {
            const SrTest t = is_sto_recurrent(r, eta);
            REQUIRE(t.recurrent == sr_by_enumeration(r, eta));
            if (t.recurrent) CHECK(is_compatible(r, eta, *t.witness));
        });
    }
}

TEST_CASE("burning test on the fixtures") {
    const MultiGraph g = fig1();
    const BurnResult full = burning_test(g, {3, 2, 2});
    CHECK(full.recurrent);
    CHECK(full.order == std::vector<VertexId>{0, 1, 2, 3});  // s, v1, v2, v3

    const BurnResult stuck = burning_test(g, {2, 2, 2});
    CHECK_FALSE(stuck.recurrent);
    CHECK(stuck.order == std::vector<VertexId>{0});

    SplitMix64 rng(321);
    for (int trial = 0; trial < 20; ++trial) {
        const MultiGraph r = random_connected_multigraph(rng);
        CHECK(burning_test(r, max_stable(r)).recurrent);
    }
    CHECK_FAILS_WITH(burning_test(g, {4, 2, 2}), Errc::UnstableConfiguration);
}

TEST_CASE("burning verdict is independent of the burn order") {
    SplitMix64 rng(5150);
    int checked = 0;
    while (checked < 1000) {
        const MultiGraph g = random_connected_multigraph(rng);
        const Config eta = random_stable_config(g, rng);
        const bool deterministic = burning_test(g, eta).recurrent;
        CHECK(burning_random_order(g, eta, rng) == deterministic);
        ++checked;
    }
}

TEST_CASE("acyclic-orientation characterisation agrees with burning") {
    const MultiGraph g = fig1();
    for_each_stable(g, 1000, [&](const Config& eta) {
        CHECK(is_det_recurrent_acyclic(g, eta) == burning_test(g, eta).recurrent);
    });
    // stochastically recurrent but not deterministically: every compatible
    // orientation of [2,2,2] runs around the triangle
    CHECK_FALSE(is_det_recurrent_acyclic(g, {2, 2, 2}));
    CHECK(is_sto_recurrent(g, {2, 2, 2}).recurrent);

    const MultiGraph tree = load_fixture("tree.json");
    CHECK(is_det_recurrent_acyclic(tree, max_stable(tree)));
}

TEST_CASE("deterministically recurrent sets of the fixtures") {
    CHECK(det_recurrent_set(fig1()) == std::set<Config>{{3, 1, 2}, {3, 2, 1}, {3, 2, 2}});

    const std::set<Config> fig2_det = det_recurrent_set(fig2_left());
    const std::set<Config> expected = {{3, 1, 2, 3}, {3, 2, 1, 3}, {3, 2, 2, 3}, {3, 3, 1, 2},
                                       {3, 3, 1, 3}, {3, 3, 2, 1}, {3, 3, 2, 2}, {3, 3, 2, 3}};
    CHECK(fig2_det == expected);

    const MultiGraph bundle = MultiGraph::build("s", {{"s", "u", 3}});
    CHECK(det_recurrent_set(bundle) == std::set<Config>{{1}, {2}, {3}});
    CHECK(det_recurrent_set(bundle).size() == spanning_tree_count(bundle));
}

TEST_CASE("reachability oracle equals the orientation characterisation") {
    const MultiGraph g = fig1();
    const std::set<Config> reachable = sto_reachable_set(g);
    CHECK(reachable == sto_recurrent_set(g));
    CHECK(reachable.count({2, 2, 2}) == 1);  // reachable from [3,1,2]: add at v1, topple sink+v2

    const MultiGraph tree = load_fixture("tree.json");
    CHECK(sto_reachable_set(tree) == std::set<Config>{max_stable(tree)});
}

TEST_CASE("recurrent-set invariants on a random corpus") {
    SplitMix64 rng(88);
    for (int trial = 0; trial < 25; ++trial) {
        const MultiGraph g = random_connected_multigraph(rng);
        const std::set<Config> sto = sto_recurrent_set(g);
        const std::set<Config> det = det_recurrent_set(g);
        CHECK(sto.count(max_stable(g)) == 1);
        CHECK(std::includes(sto.begin(), sto.end(), det.begin(), det.end()));
        CHECK(BigInt(det.size()) == spanning_tree_count(g));
        CHECK(sto_reachable_set(g) == sto);
    }
}

TEST_CASE("enumeration bounds are enforced") {
    std::vector<MultiGraph::EdgeSpec> edges;
    for (int i = 0; i < 13; ++i) edges.emplace_back("s", "u", 1), edges.emplace_back("u", "w", 1);
    const MultiGraph wide = MultiGraph::build("s", edges);  // 26 edge copies
    CHECK_FAILS_WITH(sto_recurrent_set(wide), Errc::TooManyEdges);
    CHECK_FAILS_WITH(is_det_recurrent_acyclic(wide, max_stable(wide)), Errc::TooManyEdges);

    const MultiGraph g = fig1();
    CHECK_FAILS_WITH(det_recurrent_set(g, 5), Errc::StateSpaceTooLarge);
}
