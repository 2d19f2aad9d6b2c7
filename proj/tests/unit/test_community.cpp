#include <doctest.h>

#include <cmath>

#include "deplens/community.hpp"
#include "deplens/parallel.hpp"
#include "oracles/partition_metrics.hpp"
#include "support/graphs.hpp"

using namespace deplens;

namespace {

/// Q from the dense double sum over ordered node pairs.
double dense_modularity(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                        const std::vector<GroupId>& c, double gamma = 1.0) {
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (const auto& [u, v] : edges) {
        a[u][v] += 1;
        a[v][u] += 1;
    }
    std::vector<double> k(n, 0.0);
    double two_m = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            k[i] += a[i][j];
            two_m += a[i][j];
        }
    double q = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (c[i] == c[j]) q += a[i][j] - gamma * k[i] * k[j] / two_m;
    return q / two_m;
}

std::vector<GroupId> blocks(std::size_t count, std::size_t size) {
    std::vector<GroupId> out;
    for (std::size_t i = 0; i < count * size; ++i) out.push_back(static_cast<GroupId>(i / size));
    return out;
}

}  // namespace

TEST_SUITE("community") {

TEST_CASE("undirected projection: 2-cycle, empty") {
    const auto g = undirected_projection(support::numbered(2, {{0, 1}, {1, 0}}));
    CHECK(g.edge_count() == 1);
    CHECK(g.total_weight == 2.0);
    CHECK(g.degree(0) == 2.0);
    const auto e = undirected_projection(build_graph({}, {}));
    CHECK(e.node_count() == 0);
    CHECK(e.edge_count() == 0);
}

TEST_CASE("modularity: two triangles, two isolated edges, zero weight") {
    const std::vector<std::pair<NodeId, NodeId>> tri{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    CHECK(modularity(support::undirected(6, tri), blocks(2, 3)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(modularity(support::undirected(4, {{0, 1}, {2, 3}}), blocks(2, 2)) == doctest::Approx(0.5).epsilon(1e-15));
    const std::vector<GroupId> singletons{0, 1, 2};
    CHECK_THROWS((void)modularity(support::undirected(3, {}), singletons));
}

TEST_CASE("property: modularity matches the dense formula") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const auto edges = support::planted(3, 6, 0.5, 0.1, seed);
        if (edges.empty()) continue;
        std::vector<GroupId> labels(18);
        for (auto& l : labels) l = static_cast<GroupId>(uniform_below(rng, 4));
        for (double gamma : {0.5, 1.0, 2.0}) {
            CHECK(modularity(support::undirected(18, edges), labels, gamma) ==
                  doctest::Approx(dense_modularity(18, edges, labels, gamma)).epsilon(1e-12));
        }
    }
}

TEST_CASE("louvain: two 5-cliques are the exhaustive optimum") {
    const auto edges = support::two_cliques(5);
    const auto g = support::undirected(10, edges);
    const auto r = louvain(g, {.seed = 1});
    REQUIRE(r.partition.group_count() == 2);
    for (NodeId v = 0; v < 10; ++v) CHECK(r.partition[v] == r.partition[v < 5 ? 0 : 5]);
    CHECK(r.partition[0] != r.partition[5]);

    double best = -1;
    oracle::for_each_partition(10, [&](const std::vector<std::uint32_t>& p) {
        best = std::max(best, dense_modularity(10, edges, std::vector<GroupId>(p.begin(), p.end())));
    });
    CHECK(r.modularity == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("property: louvain Q is consistent, monotone and in range") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto g = support::undirected(60, support::planted(3, 20, 0.25, 0.03, seed));
        const auto r = louvain(g, {.seed = seed});
        CHECK(r.modularity == doctest::Approx(modularity(g, r.partition.labels())).epsilon(1e-12));
        CHECK(r.modularity >= -0.5);
        CHECK(r.modularity <= 1.0);
        for (std::size_t i = 1; i < r.pass_modularity.size(); ++i)
            CHECK(r.pass_modularity[i] >= r.pass_modularity[i - 1] - 1e-12);
        CHECK(r.seed == seed);
    }
}

TEST_CASE("property: louvain is identical per seed across runs and thread counts") {
    const auto g = support::undirected(120, support::planted(4, 30, 0.2, 0.02, 5));
    const int before = max_threads();
    set_threads(1);
    const auto a = louvain(g, {.seed = 42});
    set_threads(4);
    const auto b = louvain(g, {.seed = 42});
    const auto c = louvain(g, {.seed = 42});
    set_threads(before);
    CHECK(a.partition.labels() == b.partition.labels());
    CHECK(b.partition.labels() == c.partition.labels());
    CHECK(a.modularity == b.modularity);
}

TEST_CASE("louvain: planted partition recovery") {
    const auto g = support::undirected(200, support::planted(4, 50, 0.3, 0.01, 2024));
    const auto r = louvain(g, {.seed = 7});
    const auto truth = blocks(4, 50);
    CHECK(compare_partitions(r.partition.labels(), truth).nmi >= 0.9);
}

TEST_CASE("compare_partitions: identical, one cluster, mismatched") {
    const std::vector<GroupId> a{0, 0, 1, 1, 2};
    const auto same = compare_partitions(a, a);
    CHECK(same.nmi == doctest::Approx(1.0));
    CHECK(same.ari == doctest::Approx(1.0));
    const std::vector<GroupId> one{3, 3, 3};
    const auto c = compare_partitions(one, one);
    CHECK(c.nmi == 1.0);
    CHECK(c.entropy_a == 0.0);
    const std::vector<GroupId> shorter{0, 1};
    CHECK_THROWS_AS((void)compare_partitions(a, shorter), std::invalid_argument);
}

TEST_CASE("property: partition metrics match the contingency oracle") {
    // Exhaustive over pairs up to n=5; larger n pairs each partition with a rotation.
    for (std::size_t n = 1; n <= 8; ++n) {
        std::vector<std::vector<std::uint32_t>> all;
        oracle::for_each_partition(n, [&](const std::vector<std::uint32_t>& p) { all.push_back(p); });
        const bool exhaustive = n <= 5;
        for (std::size_t i = 0; i < all.size(); ++i) {
            const std::size_t partners = exhaustive ? all.size() : 3;
            for (std::size_t s = 0; s < partners; ++s) {
                const auto& pa = all[i];
                const auto& pb = exhaustive ? all[s] : all[(i * 7919 + s * 104729) % all.size()];
                const std::vector<GroupId> a(pa.begin(), pa.end()), b(pb.begin(), pb.end());
                const auto got = compare_partitions(a, b);
                const auto ref = oracle::brute_metrics(pa, pb);
                CHECK(got.entropy_a == doctest::Approx(ref.ha).epsilon(1e-12));
                CHECK(got.mutual_information == doctest::Approx(ref.mi).epsilon(1e-12));
                CHECK(got.nmi == doctest::Approx(ref.nmi).epsilon(1e-12));
                CHECK(got.ari == doctest::Approx(ref.ari).epsilon(1e-12));
                CHECK(got.nmi >= -1e-12);
                CHECK(got.nmi <= 1.0 + 1e-12);
                CHECK(got.ari <= 1.0 + 1e-12);
                const auto rev = compare_partitions(b, a);
                CHECK(rev.nmi == doctest::Approx(got.nmi).epsilon(1e-12));
                CHECK(rev.ari == doctest::Approx(got.ari).epsilon(1e-12));
            }
        }
    }
}

}  // TEST_SUITE
