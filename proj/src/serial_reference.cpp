#include "deplens/serial_reference.hpp"

#include <cmath>
#include <stdexcept>

namespace deplens::serial {

std::vector<EdgeId> redundant_edges(const DepGraph& g) {
    std::vector<EdgeId> out;
    std::vector<std::uint8_t> seen(g.node_count());
    std::vector<NodeId> stack;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto succ = g.successors(u);
        for (std::size_t j = 0; j < succ.size(); ++j) {
            const NodeId v = succ[j];
            std::fill(seen.begin(), seen.end(), 0);
            stack.clear();
            for (auto w : succ) {
                if (w != v) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
            bool found = false;
            while (!stack.empty() && !found) {
                const NodeId x = stack.back();
                stack.pop_back();
                for (auto y : g.successors(x)) {
                    if (y == v) {
                        found = true;
                        break;
                    }
                    if (!seen[y]) {
                        seen[y] = 1;
                        stack.push_back(y);
                    }
                }
            }
            if (found) out.push_back(g.out_edge_begin(u) + static_cast<EdgeId>(j));
        }
    }
    return out;
}

PageRankResult pagerank(const DepGraph& g, const PageRankOptions& options) {
    const std::size_t n = g.node_count();
    if (n == 0) throw std::invalid_argument("pagerank: empty graph");
    const double a = options.damping;
    const double inv_n = 1.0 / static_cast<double>(n);
    PageRankResult out;
    std::vector<double> pr(n, inv_n), next(n);
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        std::fill(next.begin(), next.end(), (1.0 - a) * inv_n);
        for (NodeId u = 0; u < n; ++u) {
            const auto succ = g.successors(u);
            if (succ.empty()) {
                for (auto& x : next) x += a * pr[u] * inv_n;
            } else {
                for (auto v : succ) next[v] += a * pr[u] / static_cast<double>(succ.size());
            }
        }
        double l1 = 0.0;
        for (std::size_t v = 0; v < n; ++v) l1 += std::abs(next[v] - pr[v]);
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

std::vector<double> betweenness(const DepGraph& g, const BetweennessOptions& options) {
    const std::size_t n = g.node_count();
    std::vector<NodeId> sources;
    if (options.pivots) {
        sources = betweenness_pivots(n, *options.pivots, options.seed);
    } else {
        for (NodeId v = 0; v < n; ++v) sources.push_back(v);
    }
    std::vector<double> bc(n, 0.0);
    for (auto s : sources) {
        std::vector<std::vector<NodeId>> parents(n);
        std::vector<double> sigma(n, 0.0), delta(n, 0.0);
        std::vector<long> dist(n, -1);
        std::vector<NodeId> order{s};
        dist[s] = 0;
        sigma[s] = 1.0;
        for (std::size_t h = 0; h < order.size(); ++h) {
            const NodeId v = order[h];
            for (auto w : g.successors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    order.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    parents[w].push_back(v);
                }
            }
        }
        for (std::size_t h = order.size(); h-- > 1;) {
            const NodeId w = order[h];
            for (auto v : parents[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            bc[w] += delta[w];
        }
    }
    double scale = 1.0;
    if (options.pivots && *options.pivots > 0) scale = static_cast<double>(n) / static_cast<double>(*options.pivots);
    if (options.normalized && n > 2) scale /= static_cast<double>(n - 1) * static_cast<double>(n - 2);
    for (auto& x : bc) x *= scale;
    return bc;
}

RemovalCurve removal_curve(const DepGraph& g, const RemovalStrategy& strategy, std::span<const double> fractions,
                           std::size_t trials, std::uint64_t seed) {
    if (strategy.kind == RemovalKind::targeted) trials = 1;
    const std::size_t n = g.node_count();
    RemovalCurve out;
    out.fractions.assign(fractions.begin(), fractions.end());
    out.kind = strategy.kind;
    out.trials = trials;
    out.seed = seed;
    std::vector<std::vector<double>> values(fractions.size());
    for (std::size_t t = 0; t < trials; ++t) {
        const auto order = removal_order(g, strategy, t, seed);
        for (std::size_t i = 0; i < fractions.size(); ++i) {
            const auto k = static_cast<std::size_t>(std::llround(fractions[i] * static_cast<double>(n)));
            const auto effect = remove_and_measure(g, std::span<const NodeId>(order).first(k));
            values[i].push_back(n ? static_cast<double>(effect.gcc_size) / static_cast<double>(n) : 0.0);
        }
    }
    for (const auto& v : values) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        out.gcc_fraction.push_back(mean);
        out.gcc_std.push_back(std::sqrt(var / static_cast<double>(v.size())));
    }
    return out;
}

}  // namespace deplens::serial
