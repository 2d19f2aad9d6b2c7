#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "deplens/structure.hpp"
#include "deplens/summary.hpp"
#include "support/fixtures.hpp"
#include "support/graphs.hpp"

using namespace deplens;

TEST_SUITE("core_graph") {

TEST_CASE("dotted names split on dots and reject empty components") {
    const auto n = DottedName::parse("Mathlib.Data.Nat.Basic");
    CHECK(n.depth() == 4);
    CHECK(n.prefix(2).str() == "Mathlib.Data");
    CHECK(n.parent().str() == "Mathlib.Data.Nat");
    CHECK(DottedName::parse("funext").depth() == 1);
    CHECK(DottedName::parse("funext").parent().empty());
    for (const char* bad : {"", ".a", "a.", "a..b"}) CHECK_THROWS_AS(DottedName::parse(bad), std::invalid_argument);
    CHECK(name_prefix("A.B.C", 2) == "A.B");
    CHECK(name_depth("A.B.C") == 3);
    CHECK(path_to_module_name("Data/Nat/Defs.lean") == "Data.Nat.Defs");
}

TEST_CASE("build_graph: empty input") {
    const auto g = build_graph({}, {});
    CHECK(g.node_count() == 0);
    CHECK(g.edge_count() == 0);
}

TEST_CASE("build_graph: three-views fragment has five nodes and six edges") {
    const auto layer = support::load_fixture("three_views", Layer::declaration);
    CHECK(layer.graph.node_count() == 5);
    CHECK(layer.graph.edge_count() == 6);
}

TEST_CASE("build_graph: dangling endpoint names the edge") {
    const auto g = support::numbered(3, {});
    std::vector<NodeRecord> nodes = g.nodes();
    EdgeRecord e;
    e.src = 3;
    e.dst = 7;
    try {
        (void)build_graph(nodes, {e});
        FAIL("expected GraphError");
    } catch (const GraphError& err) {
        CHECK(err.code() == GraphError::Code::dangling_endpoint);
        CHECK(err.edge_index() == 0);
    }
}

TEST_CASE("build_graph: duplicate and self edges") {
    const auto nodes = support::numbered(2, {}).nodes();
    EdgeRecord a;
    a.src = 0;
    a.dst = 1;
    CHECK_THROWS_AS((void)build_graph(nodes, {a, a}), GraphError);
    EdgeRecord loop;
    loop.src = loop.dst = 1;
    CHECK_THROWS_AS((void)build_graph(nodes, {loop}), GraphError);
    CHECK(build_graph(nodes, {loop}, BuildOptions{true}).edge_count() == 1);
}

TEST_CASE("property: in-adjacency is the transpose of out-adjacency") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto g = support::random_digraph(25, 0.15, seed);
        std::size_t in_sum = 0, out_sum = 0;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            in_sum += g.in_degree(v);
            out_sum += g.out_degree(v);
            for (auto w : g.successors(v)) {
                const auto preds = g.predecessors(w);
                CHECK(std::find(preds.begin(), preds.end(), v) != preds.end());
            }
            CHECK(std::is_sorted(g.successors(v).begin(), g.successors(v).end()));
            const auto ins = g.in_edges(v);
            for (std::size_t i = 0; i < ins.size(); ++i) {
                CHECK(g.edge(ins[i]).dst == v);
                CHECK(g.edge(ins[i]).src == g.predecessors(v)[i]);
            }
        }
        CHECK(in_sum == g.edge_count());
        CHECK(out_sum == g.edge_count());
    }
}

TEST_CASE("connected_components: cycle, disjoint edges, ordering") {
    const auto cycle = support::numbered(3, {{0, 1}, {1, 2}, {2, 0}});
    const auto strong = connected_components(cycle, Connectivity::strong);
    CHECK(strong.group_count() == 1);
    CHECK(strong.sizes()[0] == 3);

    const auto pairs = support::numbered(4, {{0, 1}, {2, 3}});
    const auto weak = connected_components(pairs, Connectivity::weak);
    CHECK(weak.group_count() == 2);
    CHECK(weak.sizes()[0] == 2);
    CHECK(weak.sizes()[1] == 2);
    CHECK(weak[0] == 0);  // tie broken by smallest member
    CHECK(weak[2] == 1);

    const auto mixed = support::numbered(5, {{3, 4}, {4, 2}});
    const auto m = connected_components(mixed, Connectivity::weak);
    CHECK(m[2] == 0);
    CHECK(m[0] == 1);
    CHECK(m[1] == 2);
}

TEST_CASE("condense: identity on DAGs, 2-cycle plus tail") {
    const auto dag = support::random_dag(12, 0.3, 5);
    const auto c = condense(dag);
    CHECK(c.dag.node_count() == dag.node_count());
    CHECK(c.dag.edge_count() == dag.edge_count());

    const auto g = support::numbered(3, {{0, 1}, {1, 0}, {1, 2}});
    const auto c2 = condense(g);
    CHECK(c2.dag.node_count() == 2);
    CHECK(c2.dag.edge_count() == 1);
    CHECK(c2.component[0] == c2.component[1]);
}

TEST_CASE("property: condensation is acyclic and idempotent") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto g = support::random_digraph(20, 0.08, seed);
        const auto c = condense(g);
        CHECK_NOTHROW((void)topological_order(c.dag));
        const auto cc = condense(c.dag);
        CHECK(cc.dag.node_count() == c.dag.node_count());
        CHECK(cc.dag.edge_count() == c.dag.edge_count());
        // Every crossing edge appears between the right super-nodes.
        for (const auto& e : g.edges()) {
            const auto a = c.component[e.src], b = c.component[e.dst];
            if (a != b) CHECK(c.dag.has_edge(a, b));
        }
    }
}

TEST_CASE("topological_levels: chain in both orientations, cycle witness") {
    const auto chain = support::numbered(3, {{0, 1}, {1, 2}});
    const auto premises = topological_levels(chain, LevelOrigin::premises);
    CHECK(premises == std::vector<std::uint32_t>{2, 1, 0});
    const auto sources = topological_levels(chain, LevelOrigin::sources);
    CHECK(sources == std::vector<std::uint32_t>{0, 1, 2});

    const auto cycle = support::numbered(3, {{0, 1}, {1, 2}, {2, 0}});
    try {
        (void)topological_levels(cycle);
        FAIL("expected CycleError");
    } catch (const CycleError& e) {
        const auto& w = e.witness();
        REQUIRE(w.size() == 3);
        for (std::size_t i = 0; i < w.size(); ++i) CHECK(cycle.has_edge(w[i], w[(i + 1) % w.size()]));
    }
}

TEST_CASE("property: level soundness and width accounting") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto g = support::random_dag(30, 0.12, seed);
        const auto up = topological_levels(g, LevelOrigin::premises);
        const auto down = topological_levels(g, LevelOrigin::sources);
        for (const auto& e : g.edges()) {
            CHECK(up[e.src] >= up[e.dst] + 1);
            CHECK(down[e.dst] >= down[e.src] + 1);
        }
        for (auto origin : {LevelOrigin::sources, LevelOrigin::premises}) {
            const auto p = dag_depth_and_widths(g, origin);
            CHECK(std::accumulate(p.widths.begin(), p.widths.end(), std::size_t{0}) == g.node_count());
            CHECK(p.depth + 1 == p.widths.size());
            CHECK(std::all_of(p.widths.begin(), p.widths.end(), [](std::size_t w) { return w > 0; }));
        }
    }
}

TEST_CASE("dag_depth_and_widths: single node") {
    const auto p = dag_depth_and_widths(support::numbered(1, {}));
    CHECK(p.depth == 0);
    CHECK(p.widths == std::vector<std::size_t>{1});
}

TEST_CASE("degree_stats: empty graph is all zero") {
    const auto d = degree_stats(build_graph({}, {}), Direction::in);
    CHECK(d.mean == 0.0);
    CHECK(d.median == 0.0);
    CHECK(d.std_dev == 0.0);
    CHECK(d.max == 0);
    CHECK(d.zero_count == 0);
    CHECK(d.histogram.empty());
}

TEST_CASE("property: degree_stats agrees with sort-and-scan") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = support::preferential_attachment(200 + 40 * seed, 3, seed);
        for (auto dir : {Direction::in, Direction::out}) {
            std::vector<std::size_t> d;
            for (NodeId v = 0; v < g.node_count(); ++v) d.push_back(dir == Direction::in ? g.in_degree(v) : g.out_degree(v));
            std::sort(d.begin(), d.end());
            const double n = static_cast<double>(d.size());
            double mean = 0;
            for (auto x : d) mean += static_cast<double>(x);
            mean /= n;
            double var = 0;
            for (auto x : d) var += (static_cast<double>(x) - mean) * (static_cast<double>(x) - mean);
            const auto s = degree_stats(g, dir);
            CHECK(s.mean == doctest::Approx(mean).epsilon(1e-12));
            CHECK(s.median == static_cast<double>(d[(d.size() - 1) / 2]));
            CHECK(s.std_dev == doctest::Approx(std::sqrt(var / n)).epsilon(1e-12));
            CHECK(s.max == d.back());
            CHECK(s.zero_count == static_cast<std::size_t>(std::count(d.begin(), d.end(), 0u)));
            std::size_t hist_total = 0;
            for (const auto& [deg, c] : s.histogram) hist_total += c;
            CHECK(hist_total == d.size());
        }
    }
}

TEST_CASE("summary helpers use the lower median") {
    CHECK(lower_median({4, 1, 3, 2}) == 2.0);
    CHECK(lower_median({}) == 0.0);
    const std::vector<double> sorted{0, 10};
    CHECK(quantile_sorted(sorted, 0.25) == doctest::Approx(2.5));
}

TEST_CASE("Partition relabelling") {
    const std::vector<GroupId> labels{5, 5, 2, 9, 9, 9};
    const auto p = Partition::by_size(labels);
    CHECK(p[3] == 0);
    CHECK(p[0] == 1);
    CHECK(p[2] == 2);
    std::size_t total = 0;
    for (auto s : p.sizes()) total += s;
    CHECK(total == labels.size());
    CHECK(Partition::canonical(labels)[3] == 2);
}

}  // TEST_SUITE
