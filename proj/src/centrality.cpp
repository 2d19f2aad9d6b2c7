#include "deplens/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "deplens/parallel.hpp"
#include "deplens/random.hpp"

namespace deplens {
namespace {

// Fixed source-chunk count; results are summed chunk by chunk in this order.
constexpr std::size_t kBrandesChunks = 16;

void brandes_from(const DepGraph& g, NodeId s, std::vector<double>& acc, std::vector<NodeId>& stack,
                  std::vector<std::int64_t>& dist, std::vector<double>& sigma, std::vector<double>& delta) {
    stack.clear();
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    dist[s] = 0;
    sigma[s] = 1.0;
    stack.push_back(s);
    // `stack` doubles as the BFS queue; it ends in nondecreasing distance order.
    for (std::size_t head = 0; head < stack.size(); ++head) {
        const NodeId v = stack[head];
        for (auto w : g.successors(v)) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                stack.push_back(w);
            }
            if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
        }
    }
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
        const NodeId w = *it;
        for (auto v : g.predecessors(w)) {
            if (dist[v] >= 0 && dist[v] + 1 == dist[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
        if (w != s) acc[w] += delta[w];
    }
}

}  // namespace

PageRankResult pagerank(const DepGraph& g, const PageRankOptions& options) {
    const std::size_t n = g.node_count();
    if (n == 0) throw std::invalid_argument("pagerank: empty graph");
    if (!(options.damping >= 0.0 && options.damping < 1.0)) throw std::invalid_argument("pagerank: damping must be in [0,1)");
    const double a = options.damping;
    const double inv_n = 1.0 / static_cast<double>(n);

    PageRankResult out;
    std::vector<double> pr(n, inv_n), next(n), share(n), change(n);
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            const auto d = g.out_degree(v);
            if (d == 0) {
                dangling += pr[v];
                share[v] = 0.0;
            } else {
                share[v] = pr[v] / static_cast<double>(d);
            }
        }
        const double base = (1.0 - a) * inv_n + a * dangling * inv_n;
#pragma omp parallel for schedule(static)
        for (std::size_t v = 0; v < n; ++v) {
            double s = 0.0;
            for (auto u : g.predecessors(static_cast<NodeId>(v))) s += share[u];
            next[v] = base + a * s;
            change[v] = std::abs(next[v] - pr[v]);
        }
        double l1 = 0.0;
        for (double c : change) l1 += c;
        pr.swap(next);
        out.iterations = it + 1;
        if (l1 < options.tolerance) {
            out.converged = true;
            break;
        }
    }
    out.scores = std::move(pr);
    return out;
}

std::vector<NodeId> betweenness_pivots(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k > n) throw std::invalid_argument("betweenness: pivot count exceeds node count");
    Rng rng(mix_seed(seed));
    auto perm = random_permutation<NodeId>(n, rng);
    perm.resize(k);
    std::sort(perm.begin(), perm.end());
    return perm;
}

std::vector<double> betweenness(const DepGraph& g, const BetweennessOptions& options) {
    const std::size_t n = g.node_count();
    std::vector<NodeId> sources;
    if (options.pivots) {
        sources = betweenness_pivots(n, *options.pivots, options.seed);
    } else {
        sources.resize(n);
        for (NodeId v = 0; v < n; ++v) sources[v] = v;
    }
    std::vector<std::vector<double>> partial(kBrandesChunks);
#pragma omp parallel
    {
        std::vector<NodeId> stack;
        std::vector<std::int64_t> dist(n);
        std::vector<double> sigma(n), delta(n);
#pragma omp for schedule(dynamic, 1)
        for (std::size_t c = 0; c < kBrandesChunks; ++c) {
            const std::size_t lo = sources.size() * c / kBrandesChunks;
            const std::size_t hi = sources.size() * (c + 1) / kBrandesChunks;
            if (lo == hi) continue;
            partial[c].assign(n, 0.0);
            for (std::size_t i = lo; i < hi; ++i) brandes_from(g, sources[i], partial[c], stack, dist, sigma, delta);
        }
    }
    std::vector<double> bc(n, 0.0);
    for (const auto& p : partial) {
        if (p.empty()) continue;
        for (std::size_t v = 0; v < n; ++v) bc[v] += p[v];
    }
    double scale = 1.0;
    if (options.pivots && *options.pivots > 0) scale = static_cast<double>(n) / static_cast<double>(*options.pivots);
    if (options.normalized) {
        scale /= n > 2 ? static_cast<double>(n - 1) * static_cast<double>(n - 2) : 1.0;
    }
    for (auto& x : bc) x *= scale;
    return bc;
}

std::vector<RankedNode> top_k(const DepGraph& g, std::span<const double> scores, std::size_t k) {
    if (scores.size() != g.node_count()) throw std::invalid_argument("top_k: one score per node required");
    std::vector<RankedNode> all;
    all.reserve(scores.size());
    for (NodeId v = 0; v < scores.size(); ++v) all.push_back({v, g.name(v), scores[v]});
    const auto better = [](const RankedNode& x, const RankedNode& y) {
        if (x.score != y.score) return x.score > y.score;
        return x.name < y.name;
    };
    k = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), better);
    all.resize(k);
    return all;
}

GroupComparison group_compare(const DepGraph& g, std::span<const double> pagerank_scores,
                              std::span<const std::string> ratio_labels) {
    if (pagerank_scores.size() != g.node_count()) throw std::invalid_argument("group_compare: one score per node required");
    struct Acc {
        std::size_t count = 0, zero = 0, in_degree = 0;
        double pr = 0.0;
    };
    std::map<std::string, Acc> acc;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto& marker = g.node(v).marker;
        if (!marker) continue;
        auto& a = acc[*marker];
        ++a.count;
        a.in_degree += g.in_degree(v);
        a.zero += g.in_degree(v) == 0;
        a.pr += pagerank_scores[v];
    }
    if (acc.empty()) throw std::invalid_argument("group_compare: no labeled nodes");
    GroupComparison out;
    for (const auto& [label, a] : acc) {
        const auto c = static_cast<double>(a.count);
        out.rows.push_back({label, a.count, static_cast<double>(a.in_degree) / c, static_cast<double>(a.zero) / c, a.pr / c});
    }
    if (ratio_labels.size() >= 2) {
        const auto find = [&](const std::string& label) -> const LabelStats* {
            for (const auto& r : out.rows) {
                if (r.label == label) return &r;
            }
            return nullptr;
        };
        const auto* x = find(ratio_labels[0]);
        const auto* y = find(ratio_labels[1]);
        if (x && y && x != y) {
            const auto div = [](double p, double q) { return q != 0.0 ? p / q : std::nan(""); };
            out.ratio = LabelRatio{x->label, y->label, div(x->mean_in_degree, y->mean_in_degree),
                                   div(x->zero_citation_rate, y->zero_citation_rate),
                                   div(x->mean_pagerank, y->mean_pagerank)};
        }
    }
    return out;
}

}  // namespace deplens
