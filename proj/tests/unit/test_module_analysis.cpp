#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "deplens/module_analysis.hpp"
#include "deplens/random.hpp"
#include "deplens/structure.hpp"
#include "oracles/reachability.hpp"
#include "support/fixtures.hpp"
#include "support/graphs.hpp"

using namespace deplens;

namespace {

std::set<std::pair<NodeId, NodeId>> edge_set(const DepGraph& g, const std::vector<EdgeId>& ids) {
    std::set<std::pair<NodeId, NodeId>> out;
    for (auto e : ids) out.emplace(g.edge(e).src, g.edge(e).dst);
    return out;
}

DepGraph without_edge(const DepGraph& g, std::size_t skip) {
    std::vector<EdgeRecord> edges;
    for (std::size_t i = 0; i < g.edge_count(); ++i)
        if (i != skip) edges.push_back(g.edge(static_cast<EdgeId>(i)));
    return build_graph(g.nodes(), edges);
}

}  // namespace

TEST_SUITE("module_analysis") {

TEST_CASE("transitive reduction: diamond fixture drops only the shortcut") {
    const auto g = support::load_fixture("diamond", Layer::module).graph;
    const auto tr = transitive_reduction(g);
    REQUIRE(tr.removed.size() == 1);
    const auto& e = g.edge(tr.removed[0]);
    CHECK(g.name(e.src) == "Algebra.Group.Defs");
    CHECK(g.name(e.dst) == "Init");
    CHECK(tr.redundancy_rate == doctest::Approx(1.0 / 5.0));
    // Identical layering before and after.
    for (auto origin : {LevelOrigin::sources, LevelOrigin::premises}) {
        CHECK(topological_levels(g, origin) == topological_levels(tr.reduced, origin));
    }
}

TEST_CASE("transitive reduction: chain keeps every edge; cycles are rejected") {
    const auto chain = support::numbered(3, {{0, 1}, {1, 2}});
    const auto tr = transitive_reduction(chain);
    CHECK(tr.removed.empty());
    CHECK(tr.redundancy_rate == 0.0);
    CHECK(topological_levels(chain) == topological_levels(tr.reduced));
    CHECK_THROWS_AS((void)transitive_reduction(support::numbered(2, {{0, 1}, {1, 0}})), CycleError);
}

TEST_CASE("property: reduction matches the closure oracle and is minimal") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 2 + seed % 11;
        const auto g = support::random_dag(n, 0.1 + 0.05 * static_cast<double>(seed % 10), seed);
        const auto tr = transitive_reduction(g);
        const auto expect = oracle::implied_edges(g);
        CHECK(edge_set(g, tr.removed) == std::set<std::pair<NodeId, NodeId>>(expect.begin(), expect.end()));
        CHECK(tr.reduced.edge_count() + tr.removed.size() == g.edge_count());

        const auto closure = oracle::transitive_closure(oracle::adjacency(g));
        CHECK(oracle::transitive_closure(oracle::adjacency(tr.reduced)) == closure);
        for (std::size_t i = 0; i < tr.reduced.edge_count(); ++i) {
            CHECK(oracle::transitive_closure(oracle::adjacency(without_edge(tr.reduced, i))) != closure);
        }
        for (NodeId v = 0; v < g.node_count(); ++v) CHECK(tr.reduced.in_degree(v) <= g.in_degree(v));
    }
}

TEST_CASE("critical path: build fixture") {
    const auto layer = support::load_fixture("build", Layer::module);
    const auto w = node_weights(layer.graph, load_build_weights(support::fixture("build") / "build_times.csv"));
    const auto cp = critical_path(layer.graph, w);
    std::vector<std::string> names;
    for (auto v : cp.path) names.push_back(layer.graph.name(v));
    CHECK(names == std::vector<std::string>{"Order.Group", "Group.Defs", "Init"});
    CHECK(cp.total_weight == 8.0);
    CHECK(cp.sequential_weight == 12.0);
    CHECK(cp.weighted_speedup == 1.5);
    CHECK(cp.parallelism_ratio == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("critical path: single node and lexicographic ties") {
    const auto one = support::numbered(1, {});
    const std::vector<double> five{5};
    const auto cp = critical_path(one, five);
    CHECK(cp.total_weight == 5.0);
    CHECK(cp.parallelism_ratio == 1.0);

    // Two equal-weight routes 0->1->3 and 0->2->3.
    const auto g = support::numbered(4, {{0, 2}, {0, 1}, {1, 3}, {2, 3}});
    const std::vector<double> unit(4, 1.0);
    CHECK(critical_path(g, unit).path == std::vector<NodeId>{0, 1, 3});
    CHECK_THROWS_AS((void)critical_path(support::numbered(2, {{0, 1}, {1, 0}}), std::vector<double>(2, 1.0)), CycleError);
}

TEST_CASE("property: critical path dominates random greedy walks") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = support::random_dag(40, 0.1, seed);
        Rng rng(mix_seed(seed, 99));
        std::vector<double> w(g.node_count());
        for (auto& x : w) x = static_cast<double>(uniform_below(rng, 10));
        const auto cp = critical_path(g, w);
        double path_sum = 0;
        for (std::size_t i = 0; i < cp.path.size(); ++i) {
            path_sum += w[cp.path[i]];
            if (i + 1 < cp.path.size()) CHECK(g.has_edge(cp.path[i], cp.path[i + 1]));
        }
        CHECK(path_sum == doctest::Approx(cp.total_weight));
        CHECK(g.in_degree(cp.path.front()) == 0);
        CHECK(g.out_degree(cp.path.back()) == 0);
        std::vector<NodeId> sources;
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (g.in_degree(v) == 0) sources.push_back(v);
        for (int walk = 0; walk < 1000; ++walk) {
            NodeId v = sources[uniform_below(rng, sources.size())];
            double total = w[v];
            while (g.out_degree(v) > 0) {
                const auto succ = g.successors(v);
                v = succ[uniform_below(rng, succ.size())];
                total += w[v];
            }
            CHECK(total <= cp.total_weight);
        }
    }
}

TEST_CASE("module containment by depth") {
    const auto g = support::make_graph({{"A.B.C"}, {"A.B.D"}, {"A.E"}, {"F"}}, {{0, 1}, {0, 2}, {2, 3}});
    const auto k1 = module_containment(g, 1);
    CHECK(k1.ratio == doctest::Approx(2.0 / 3.0));
    CHECK(k1.group_count == 2);
    const auto k2 = module_containment(g, 2);
    CHECK(k2.ratio == doctest::Approx(1.0 / 3.0));
    CHECK(k2.group_count == 3);
    CHECK(module_containment(g, 10).ratio == 0.0);
}

TEST_CASE("import classification: two files, one import, one matching edge") {
    const auto gm = support::make_graph({{"A", NodeKind::module}, {"B", NodeKind::module}}, {{0, 1}});
    const auto gd = support::make_graph({{"a", NodeKind::theorem, "A"}, {"b", NodeKind::theorem, "B"}}, {{0, 1}});
    const auto dm = map_declarations_to_modules(gd, gm);
    const auto c = classify_import_edges(gm, gd, dm);
    CHECK(c.active == 1);
    CHECK(c.unused == 0);
    CHECK(c.direct == 1);
    CHECK(c.transitive == 0);
    CHECK(c.unreachable == 0);
}

TEST_CASE("property: classification and utilization match definition-level oracles") {
    for (const char* fx : {"three_views", "toy"}) {
        const auto gm = support::load_fixture(fx, Layer::module).graph;
        const auto gd = support::load_fixture(fx, Layer::declaration).graph;
        const auto dm = map_declarations_to_modules(gd, gm);

        // Oracle: module of each declaration by name lookup, file pairs by nested scan.
        std::map<NodeId, std::optional<NodeId>> mod;
        for (NodeId v = 0; v < gd.node_count(); ++v) {
            const auto& m = gd.node(v).module;
            mod[v] = m ? gm.find(m->str()) : std::nullopt;
            CHECK(dm[v] == mod[v]);
        }
        std::map<std::pair<NodeId, NodeId>, std::size_t> file_pairs;
        for (const auto& e : gd.edges()) {
            if (!mod[e.src] || !mod[e.dst] || *mod[e.src] == *mod[e.dst]) continue;
            ++file_pairs[{*mod[e.src], *mod[e.dst]}];
        }
        const auto reach = oracle::transitive_closure(oracle::adjacency(gm));
        std::size_t direct = 0, transitive = 0, unreachable = 0;
        for (const auto& [p, w] : file_pairs) {
            if (gm.has_edge(p.first, p.second)) {
                ++direct;
            } else if (reach[p.first][p.second]) {
                ++transitive;
            } else {
                ++unreachable;
            }
        }
        const auto c = classify_import_edges(gm, gd, dm);
        CHECK(c.file_edges.size() == file_pairs.size());
        CHECK(c.direct == direct);
        CHECK(c.transitive == transitive);
        CHECK(c.unreachable == unreachable);
        CHECK(c.active + c.unused == gm.edge_count());
        for (EdgeId e = 0; e < gm.edge_count(); ++e) {
            const bool used = file_pairs.count({gm.edge(e).src, gm.edge(e).dst}) > 0;
            CHECK((c.import_use[e] == ImportUse::active) == used);
        }

        const auto u = import_utilization(gm, gd, dm);
        for (const auto& row : u.per_edge) {
            const auto& imp = gm.edge(row.edge);
            std::set<NodeId> defined, referenced;
            for (NodeId v = 0; v < gd.node_count(); ++v)
                if (mod[v] == imp.dst) defined.insert(v);
            for (const auto& e : gd.edges())
                if (mod[e.src] == imp.src && defined.count(e.dst)) referenced.insert(e.dst);
            CHECK(row.defined == defined.size());
            CHECK(row.referenced == referenced.size());
            CHECK(row.util >= 0.0);
            CHECK(row.util <= 1.0);
            if (c.import_use[row.edge] == ImportUse::unused) CHECK(row.util == 0.0);
        }
    }
}

TEST_CASE("utilization: 2 of 50 declarations used") {
    std::vector<support::Named> decls{{"user", NodeKind::theorem, "A"}};
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < 50; ++i) decls.push_back({"d" + std::to_string(i), NodeKind::definition, "B"});
    edges.emplace_back(0, 1);
    edges.emplace_back(0, 2);
    const auto gd = support::make_graph(decls, edges);
    const auto gm = support::make_graph({{"A", NodeKind::module}, {"B", NodeKind::module}, {"C", NodeKind::module}},
                                        {{0, 1}, {0, 2}});
    const auto u = import_utilization(gm, gd, map_declarations_to_modules(gd, gm));
    REQUIRE(u.per_edge.size() == 1);
    CHECK(u.per_edge[0].util == doctest::Approx(0.04));
    CHECK(u.excluded_edges == 1);  // C defines nothing
}

}  // TEST_SUITE
