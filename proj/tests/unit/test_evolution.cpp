#include <doctest.h>

#include <cmath>
#include <set>

#include "deplens/community.hpp"
#include "deplens/evolution.hpp"
#include "oracles/comod_pairs.hpp"
#include "support/fixtures.hpp"
#include "support/graphs.hpp"

using namespace deplens;

namespace {

/// Transitive tournament on `names`: names[i] is cited by every later name,
/// so in-degree falls along the list.
DepGraph ranked(const std::vector<std::string>& names) {
    std::vector<support::Named> nodes;
    for (const auto& n : names) nodes.push_back({n});
    std::vector<std::pair<NodeId, NodeId>> e;
    for (NodeId i = 0; i < names.size(); ++i)
        for (NodeId j = i + 1; j < names.size(); ++j) e.emplace_back(j, i);
    return support::make_graph(nodes, e);
}

/// Gives every node of in-degree d another factor*d citers, all freshly named.
DepGraph inflate(const DepGraph& g, std::size_t factor) {
    std::vector<support::Named> nodes;
    for (NodeId v = 0; v < g.node_count(); ++v) nodes.push_back({g.name(v)});
    std::vector<std::pair<NodeId, NodeId>> e;
    for (const auto& x : g.edges()) e.emplace_back(x.src, x.dst);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        for (std::size_t i = 0; i < g.in_degree(v) * factor; ++i) {
            nodes.push_back({"fresh" + std::to_string(nodes.size())});
            e.emplace_back(static_cast<NodeId>(nodes.size() - 1), v);
        }
    }
    return support::make_graph(nodes, e);
}

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("growth indicators: rows, density, empty snapshot, errors") {
    const auto d1 = support::load_fixture("toy", Layer::declaration, "v1").graph;
    const auto d2 = support::load_fixture("toy", Layer::declaration, "v2").graph;
    const auto m2 = support::load_fixture("toy", Layer::module, "v2").graph;
    const auto rows = growth_indicators(std::vector<Snapshot>{{"v1", &d1, nullptr}, {"v2", &d2, &m2}});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].label == "v1");
    CHECK(rows[1].declarations == 26);
    CHECK(rows[1].modules == 8);
    CHECK(rows[1].edges == 45);
    CHECK(rows[1].density == doctest::Approx(45.0 / 26.0));

    const auto empty = build_graph({}, {});
    const auto z = growth_indicators(std::vector<Snapshot>{{"e", &empty, nullptr}});
    CHECK(z[0].declarations == 0);
    CHECK(z[0].density == 0.0);

    CHECK_THROWS((void)growth_indicators(std::vector<Snapshot>{}));
    CHECK_THROWS((void)growth_indicators(std::vector<Snapshot>{{"a", &d1, nullptr}, {"a", &d2, nullptr}}));
}

TEST_CASE("hub turnover: identical, reversed, disjoint") {
    const std::vector<std::string> names{"a", "b", "c", "d", "e"};
    const auto a = ranked(names);
    CHECK(hub_turnover(a, a, 5).spearman == doctest::Approx(1.0));
    const auto b = ranked({"e", "d", "c", "b", "a"});
    const auto r = hub_turnover(a, b, 5);
    CHECK(r.spearman == doctest::Approx(-1.0));
    CHECK(r.shared_names == 5);
    CHECK_THROWS((void)hub_turnover(a, ranked({"x", "y", "z"}), 3));
    CHECK_THROWS((void)hub_turnover(a, a, 1));
}

TEST_CASE("property: hub turnover is bounded and rank-only") {
    Rng rng(3);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = support::preferential_attachment(60, 2, seed);
        const auto b = support::preferential_attachment(60, 2, seed + 100);
        const auto r = hub_turnover(a, b, 10);
        CHECK(r.spearman >= -1.0 - 1e-12);
        CHECK(r.spearman <= 1.0 + 1e-12);
        // Scaling every in-degree by 3 keeps the order and adds only unshared names.
        CHECK(hub_turnover(a, inflate(b, 2), 10).spearman == doctest::Approx(r.spearman).epsilon(1e-12));
    }
}

TEST_CASE("community persistence: identity, refinement, independence") {
    const auto g = support::numbered(8, {});
    const Partition coarse(std::vector<GroupId>{0, 0, 0, 0, 1, 1, 1, 1});
    const Partition fine(std::vector<GroupId>{0, 0, 1, 1, 2, 2, 3, 3});
    CHECK(community_persistence(g, coarse, g, coarse) == doctest::Approx(1.0));
    const double hc = std::log(2.0), hf = std::log(4.0);
    CHECK(community_persistence(g, coarse, g, fine) == doctest::Approx(hc / ((hc + hf) / 2)));

    const auto big = support::numbered(1000, {});
    Rng rng(11);
    std::vector<GroupId> x(1000), y(1000);
    for (auto& l : x) l = static_cast<GroupId>(uniform_below(rng, 5));
    for (auto& l : y) l = static_cast<GroupId>(uniform_below(rng, 5));
    CHECK(community_persistence(big, Partition(x), big, Partition(y)) < 0.05);

    const auto other = support::make_graph({{"zz"}}, {});
    CHECK_THROWS((void)community_persistence(g, coarse, other, Partition(std::vector<GroupId>{0})));
}

TEST_CASE("persistence matches names, not ids") {
    const auto a = support::make_graph({{"p"}, {"q"}, {"r"}}, {});
    const auto b = support::make_graph({{"r"}, {"q"}, {"p"}, {"s"}}, {});
    const Partition pa(std::vector<GroupId>{0, 0, 1});
    const Partition pb(std::vector<GroupId>{1, 0, 0, 2});  // same split after reordering
    CHECK(community_persistence(a, pa, b, pb) == doctest::Approx(1.0));
}

TEST_CASE("co-modification: figure fixture") {
    const auto prs = load_comod(support::fixture("comod") / "prs.jsonl");
    const auto c = build_comod_graph(prs);
    REQUIRE(c.edges.size() == 4);
    const auto weight = [&](const std::string& x, const std::string& y) -> std::size_t {
        for (const auto& e : c.edges)
            if ((c.modules[e.a] == x && c.modules[e.b] == y) || (c.modules[e.a] == y && c.modules[e.b] == x))
                return e.weight;
        return 0;
    };
    CHECK(weight("Data.Nat.Defs", "Data.Int.Defs") == 2);
    CHECK(weight("Data.Nat.Defs", "Data.Nat.Order") == 1);
    CHECK(weight("Data.Int.Defs", "Data.Nat.Order") == 1);
    CHECK(weight("Algebra.Group.Defs", "Data.Nat.Order") == 1);

    const auto gm = support::load_fixture("comod", Layer::module).graph;
    const auto cmp = comod_vs_imports(c, gm);
    CHECK(cmp.both == 3);
    CHECK(cmp.comod_only == 1);
    CHECK(cmp.import_only == 0);
    for (const auto& p : cmp.pairs) {
        if (p.cls == PairClass::comod_only) {
            CHECK(p.a == "Algebra.Group.Defs");
            CHECK(p.b == "Data.Nat.Order");
        }
    }
}

TEST_CASE("co-modification: single-file PRs, triangle, empty and identical comparisons") {
    const std::vector<PullRequest> singles{{"1", {"A"}}, {"2", {"B"}}};
    CHECK(build_comod_graph(singles).edges.empty());
    const std::vector<PullRequest> tri{{"1", {"A", "B", "C"}}};
    const auto t = build_comod_graph(tri);
    CHECK(t.edges.size() == 3);
    for (const auto& e : t.edges) CHECK(e.weight == 1);

    const auto gm = support::make_graph({{"A", NodeKind::module}, {"B", NodeKind::module}, {"C", NodeKind::module}},
                                        {{0, 1}, {1, 2}, {2, 0}});
    const auto none = comod_vs_imports(build_comod_graph({}), gm);
    CHECK(none.import_only == 3);
    CHECK(none.both == 0);
    const auto all = comod_vs_imports(t, gm);
    CHECK(all.both == 3);
    CHECK(all.comod_only == 0);
    CHECK(all.import_only == 0);
    CHECK(to_string(PairClass::comod_only) != to_string(PairClass::both));
}

TEST_CASE("property: co-modification weights match a nested-loop count") {
    const std::vector<std::string> universe{"A", "B", "C", "D", "E", "F", "G"};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        std::vector<PullRequest> prs;
        for (int i = 0; i < 100; ++i) {
            std::set<std::string> files;
            const auto k = 1 + uniform_below(rng, 5);
            for (std::size_t j = 0; j < k; ++j) files.insert(universe[uniform_below(rng, universe.size())]);
            prs.push_back({std::to_string(i), {files.begin(), files.end()}});
        }
        const auto c = build_comod_graph(prs);
        const auto ref = oracle::comod_pairs(prs);
        CHECK(c.edges.size() == ref.size());
        for (const auto& e : c.edges) {
            CHECK(e.a < e.b);
            CHECK(e.weight == ref.at({c.modules[e.a], c.modules[e.b]}));
        }
    }
}

}  // TEST_SUITE
