// One PASS/FAIL/SKIP line per acceptance criterion. Exit status is nonzero
// iff any criterion fails. Tier 2 needs DEPLENS_DATASET=<manifest path>.

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>

#include "deplens/aggregation.hpp"
#include "deplens/centrality.hpp"
#include "deplens/community.hpp"
#include "deplens/module_analysis.hpp"
#include "deplens/robustness.hpp"
#include "deplens/structure.hpp"
#include "deplens/tail_fit.hpp"
#include "oracles/dense_pagerank.hpp"
#include "oracles/partition_metrics.hpp"
#include "oracles/path_betweenness.hpp"
#include "oracles/powerlaw_sampler.hpp"
#include "oracles/reachability.hpp"
#include "support/fixtures.hpp"
#include "support/graphs.hpp"
#include "tier2.hpp"

using namespace deplens;

namespace {

// Tolerances, pinned.
constexpr double kPageRankCycleTol = 1e-9;
constexpr double kPageRankOracleTol = 1e-8;
constexpr double kBetweennessRelTol = 1e-9;
constexpr double kPivotRelTol = 0.05;
constexpr std::size_t kPivots = 150;
constexpr double kMetricTol = 1e-12;
constexpr double kPlantedNmi = 0.9;
constexpr double kModularityTol = 1e-12;
constexpr double kAlphaTol = 0.1;
constexpr double kTailSeconds = 60.0;

int failures = 0;

void line(const char* status, int id, const std::string& title, const std::string& detail) {
    std::printf("%s %2d %s: %s\n", status, id, title.c_str(), detail.c_str());
    std::fflush(stdout);
}

/// Runs `check`, which returns whether it passed and fills `detail`.
void criterion(int id, const std::string& title, const std::function<bool(std::string&)>& check) {
    std::string detail;
    bool ok = false;
    try {
        ok = check(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    line(ok ? "PASS" : "FAIL", id, title, detail);
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

bool transitive_reduction_check(std::string& detail) {
    std::size_t mismatches = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 2 + seed % 11;
        const auto g = support::random_dag(n, 0.1 + 0.05 * static_cast<double>(seed % 10), seed);
        const auto tr = transitive_reduction(g);
        std::set<std::pair<NodeId, NodeId>> got;
        for (auto e : tr.removed) got.emplace(g.edge(e).src, g.edge(e).dst);
        const auto ref = oracle::implied_edges(g);
        if (got != std::set<std::pair<NodeId, NodeId>>(ref.begin(), ref.end())) ++mismatches;
    }
    const auto d = support::load_fixture("diamond", Layer::module).graph;
    const auto tr = transitive_reduction(d);
    const bool diamond = tr.removed.size() == 1 && d.name(d.edge(tr.removed[0]).src) == "Algebra.Group.Defs" &&
                         d.name(d.edge(tr.removed[0]).dst) == "Init";
    detail = std::to_string(mismatches) + "/200 DAG mismatches; diamond " + (diamond ? "drops the shortcut" : "wrong");
    return mismatches == 0 && diamond;
}

bool build_graph_check(std::string& detail) {
    const auto layer = support::load_fixture("build", Layer::module);
    const auto w = node_weights(layer.graph, load_build_weights(support::fixture("build") / "build_times.csv"));
    const auto cp = critical_path(layer.graph, w);
    detail = "W=" + fmt("%.17g", cp.total_weight) + " speedup=" + fmt("%.17g", cp.weighted_speedup);
    return cp.total_weight == 8.0 && cp.weighted_speedup == 1.5;
}

bool pagerank_check(std::string& detail) {
    const auto cycle = pagerank(support::numbered(3, {{0, 1}, {1, 2}, {2, 0}}));
    double cycle_err = 0;
    for (double s : cycle.scores) cycle_err = std::max(cycle_err, std::abs(s - 1.0 / 3.0));
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t n = 1 + seed % 50;
        const auto g = support::random_digraph(n, 0.08, seed + 1000);
        PageRankOptions o;
        o.tolerance = 1e-14;
        o.max_iterations = 2000;
        const auto r = pagerank(g, o);
        const auto ref = oracle::dense_pagerank(g);
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(r.scores[i] - ref[i]));
    }
    detail = "3-cycle err " + fmt("%.2e", cycle_err) + ", oracle Linf " + fmt("%.2e", worst) + " over 50 graphs";
    return cycle_err < kPageRankCycleTol && worst <= kPageRankOracleTol;
}

bool betweenness_check(std::string& detail) {
    BetweennessOptions raw;
    raw.normalized = false;
    double worst_exact = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 3 + seed * 3;  // up to 60
        const auto g = support::random_digraph(n, 3.0 / static_cast<double>(n), seed);
        const auto b = betweenness(g, raw);
        const auto ref = oracle::path_betweenness(g);
        for (std::size_t v = 0; v < n; ++v)
            worst_exact = std::max(worst_exact, std::abs(b[v] - ref[v]) / std::max(1.0, std::abs(ref[v])));
    }

    const auto g = support::random_digraph(200, 0.02, 17);
    const auto exact = betweenness(g);
    std::vector<double> mean(g.node_count(), 0.0);
    constexpr int kSeeds = 50;
    for (int s = 0; s < kSeeds; ++s) {
        BetweennessOptions o;
        o.pivots = kPivots;
        o.seed = static_cast<std::uint64_t>(s);
        const auto est = betweenness(g, o);
        for (std::size_t v = 0; v < est.size(); ++v) mean[v] += est[v] / kSeeds;
    }
    double worst_rel = 0;
    for (const auto& r : top_k(g, exact, 10)) worst_rel = std::max(worst_rel, std::abs(mean[r.node] - r.score) / r.score);
    detail = "exact rel err " + fmt("%.2e", worst_exact) + " (n<=60); pivot top-10 worst rel err " +
             fmt("%.4f", worst_rel) + " (k=" + std::to_string(kPivots) + ", 50 seeds)";
    return worst_exact <= kBetweennessRelTol && worst_rel <= kPivotRelTol;
}

/// Per-partition quantities for the exhaustive sweep: labels, cluster count,
/// and a bitmask of same-cluster element pairs.
struct Enumerated {
    std::vector<GroupId> labels;
    std::uint32_t clusters = 0;
    std::uint32_t same_mask = 0;
};

bool partition_metrics_check(std::string& detail) {
    std::size_t pairs = 0, bad = 0, identical_not_exact = 0;
    double worst = 0;
    for (std::size_t n = 1; n <= 8; ++n) {
        std::vector<Enumerated> all;
        oracle::for_each_partition(n, [&](const std::vector<std::uint32_t>& p) {
            Enumerated e;
            e.labels.assign(p.begin(), p.end());
            for (auto x : p) e.clusters = std::max(e.clusters, x + 1);
            std::uint32_t bit = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j, ++bit)
                    if (p[i] == p[j]) e.same_mask |= 1u << bit;
            all.push_back(std::move(e));
        });
        const std::uint32_t pair_bits = static_cast<std::uint32_t>(n * (n - 1) / 2);
        const std::uint32_t full = pair_bits == 32 ? ~0u : (1u << pair_bits) - 1;
        const double N = static_cast<double>(n);
        std::vector<double> h(all.size(), 0.0);
        for (std::size_t i = 0; i < all.size(); ++i) {
            std::array<double, 8> size{};
            for (auto l : all[i].labels) size[l] += 1;
            for (std::uint32_t c = 0; c < all[i].clusters; ++c) h[i] -= size[c] / N * std::log(size[c] / N);
        }
        for (std::size_t i = 0; i < all.size(); ++i) {
            const auto& a = all[i];
            for (std::size_t j = 0; j < all.size(); ++j) {
                const auto& b = all[j];
                // Dense contingency table.
                std::array<std::array<double, 8>, 8> t{};
                for (std::size_t x = 0; x < n; ++x) t[a.labels[x]][b.labels[x]] += 1;
                double hj = 0;
                for (std::uint32_t r = 0; r < a.clusters; ++r)
                    for (std::uint32_t c = 0; c < b.clusters; ++c)
                        if (t[r][c] > 0) hj -= t[r][c] / N * std::log(t[r][c] / N);
                const double mi = h[i] + h[j] - hj;
                const double nmi = h[i] + h[j] > 0 ? 2 * mi / (h[i] + h[j]) : 1.0;
                // ARI from pair agreement counts.
                const double n11 = std::popcount(a.same_mask & b.same_mask);
                const double n10 = std::popcount(a.same_mask & ~b.same_mask & full);
                const double n01 = std::popcount(~a.same_mask & b.same_mask & full);
                const double n00 = std::popcount(~a.same_mask & ~b.same_mask & full);
                const double den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
                const double ari = den != 0 ? 2 * (n00 * n11 - n01 * n10) / den : 1.0;

                const auto got = compare_partitions(a.labels, b.labels);
                const double err = std::max({std::abs(got.nmi - nmi), std::abs(got.ari - ari),
                                             std::abs(got.mutual_information - mi)});
                worst = std::max(worst, err);
                if (!(err <= kMetricTol)) ++bad;
                if (i == j && (got.nmi != 1.0 || got.ari != 1.0)) ++identical_not_exact;
                ++pairs;
            }
        }
    }
    detail = std::to_string(pairs) + " pairs (n<=8), " + std::to_string(bad) + " off by >1e-12 (worst " +
             fmt("%.2e", worst) + "), " + std::to_string(identical_not_exact) + " identical pairs not exactly 1/1";
    return bad == 0 && identical_not_exact == 0;
}

bool louvain_check(std::string& detail) {
    const auto cliques = support::undirected(10, support::two_cliques(5));
    const auto r = louvain(cliques, {.seed = 1});
    bool split = r.partition.group_count() == 2 && r.partition[0] != r.partition[5];
    for (NodeId v = 0; v < 10; ++v) split = split && r.partition[v] == r.partition[v < 5 ? 0 : 5];
    double q_err = std::abs(r.modularity - modularity(cliques, r.partition.labels()));

    const auto planted = support::undirected(200, support::planted(4, 50, 0.3, 0.01, 2024));
    const auto p = louvain(planted, {.seed = 7});
    std::vector<GroupId> truth;
    for (std::size_t i = 0; i < 200; ++i) truth.push_back(static_cast<GroupId>(i / 50));
    const double nmi = compare_partitions(p.partition.labels(), truth).nmi;
    q_err = std::max(q_err, std::abs(p.modularity - modularity(planted, p.partition.labels())));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = support::undirected(60, support::planted(3, 20, 0.25, 0.03, seed));
        const auto x = louvain(g, {.seed = seed});
        q_err = std::max(q_err, std::abs(x.modularity - modularity(g, x.partition.labels())));
    }
    detail = std::string("cliques ") + (split ? "recovered" : "not recovered") + ", planted NMI " + fmt("%.4f", nmi) +
             ", |Q - modularity| max " + fmt("%.2e", q_err);
    return split && nmi >= kPlantedNmi && q_err <= kModularityTol;
}

bool tail_fit_check(std::string& detail) {
    const auto samples = oracle::sample_powerlaw(2.5, 5, 10000, 3);
    const auto t0 = std::chrono::steady_clock::now();
    const auto fit = fit_powerlaw(samples);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = "alpha=" + fmt("%.4f", fit.alpha) + " x_min=" + std::to_string(fit.x_min) + " in " + fmt("%.2f", secs) + " s";
    return std::abs(fit.alpha - 2.5) <= kAlphaTol && fit.x_min >= 4 && fit.x_min <= 7 && secs < kTailSeconds;
}

bool robustness_check(std::string& detail) {
    std::vector<double> f;
    for (int i = 0; i <= 20; ++i) f.push_back(i / 40.0);
    std::size_t violations = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = support::preferential_attachment(1000, 2, seed);
        std::vector<double> scores(g.node_count());
        for (NodeId v = 0; v < g.node_count(); ++v) scores[v] = static_cast<double>(g.in_degree(v));
        const auto rnd = removal_curve(g, {RemovalKind::random, {}}, f, 10, seed);
        const auto tgt = removal_curve(g, {RemovalKind::targeted, scores}, f, 10, seed);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i > 0 && rnd.gcc_fraction[i] > rnd.gcc_fraction[i - 1]) ++violations;
            if (i > 0 && tgt.gcc_fraction[i] > tgt.gcc_fraction[i - 1]) ++violations;
            if (rnd.gcc_fraction[i] < tgt.gcc_fraction[i]) ++violations;
        }
    }
    detail = std::to_string(violations) + " violations over 20 seeds x 21 fractions";
    return violations == 0;
}

bool aggregation_check(std::string& detail) {
    const auto gd = support::load_fixture("aggregation_cycle", Layer::declaration).graph;
    bool acyclic_input = true;
    try {
        (void)topological_order(gd);
    } catch (const CycleError&) {
        acyclic_input = false;
    }
    const auto k2 = build_ns_graph(gd, 2);
    const auto nat = k2.graph.find("Nat"), integer = k2.graph.find("Int");
    const bool two_cycle = k2.graph.node_count() == 2 && k2.graph.edge_count() == 2 && nat && integer &&
                           k2.graph.has_edge(*nat, *integer) && k2.graph.has_edge(*integer, *nat);
    const auto ns = [](const char* name, std::size_t k) {
        const auto key = truncate_namespace(DottedName::parse(name), k);
        return key.root ? std::string(kRootNamespace) : key.name;
    };
    const bool rules = ns("Nat.Prime.dvd_mul", 2) == "Nat.Prime" && ns("Nat.add_comm", 2) == "Nat" &&
                       truncate_namespace(DottedName::parse("funext"), 1).root;
    detail = std::string("input ") + (acyclic_input ? "acyclic" : "cyclic") + ", Nat<->Int " +
             (two_cycle ? "present" : "missing") + ", truncation examples " + (rules ? "match" : "differ");
    return acyclic_input && two_cycle && rules;
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion(1, "transitive reduction vs reachability oracle", transitive_reduction_check);
    criterion(2, "build fixture critical path", build_graph_check);
    criterion(3, "pagerank vs dense oracle", pagerank_check);
    criterion(4, "betweenness exact and pivot-sampled", betweenness_check);
    criterion(5, "NMI/ARI vs contingency oracle, all partitions n<=8", partition_metrics_check);
    criterion(6, "louvain recovery and Q consistency", louvain_check);
    criterion(7, "power-law tail recovery", tail_fit_check);
    criterion(8, "robustness monotone, random >= targeted", robustness_check);
    criterion(9, "namespace aggregation cycle and truncation", aggregation_check);

    const char* dataset = std::getenv("DEPLENS_DATASET");
    acceptance::run_tier2(dataset ? dataset : "", criterion, line);

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("acceptance: %d failed, %.1f s\n", failures, secs);
    return failures == 0 ? 0 : 1;
}
