#include "deplens/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "deplens/detail/union_find.hpp"
#include "deplens/random.hpp"

namespace deplens {

RemovalEffect remove_and_measure(const DepGraph& g, std::span<const NodeId> removed) {
    const std::size_t n = g.node_count();
    std::vector<std::uint8_t> gone(n, 0);
    for (auto v : removed) {
        if (v >= n) throw std::out_of_range("remove_and_measure: node id out of range");
        gone[v] = 1;
    }
    detail::UnionFind uf(n);
    for (const auto& e : g.edges()) {
        if (!gone[e.src] && !gone[e.dst]) uf.unite(e.src, e.dst);
    }
    RemovalEffect out;
    std::size_t alive = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (gone[v]) continue;
        ++alive;
        if (uf.find(v) == v) {
            ++out.wcc_count;
            out.gcc_size = std::max(out.gcc_size, uf.set_size(v));
        }
    }
    out.disconnected = alive - out.gcc_size;
    return out;
}

std::vector<NodeImpact> single_node_impact(const DepGraph& g, std::span<const NodeId> candidates) {
    const std::size_t n = g.node_count();
    // Membership of the original GCC (largest weak component, smallest root on ties).
    detail::UnionFind base(n);
    for (const auto& e : g.edges()) base.unite(e.src, e.dst);
    NodeId gcc_root = kNoNode;
    std::size_t gcc = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (base.find(v) == v && base.set_size(v) > gcc) {
            gcc = base.set_size(v);
            gcc_root = v;
        }
    }
    std::vector<NodeImpact> out(candidates.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const NodeId v = candidates[i];
        const NodeId removed[] = {v};
        const auto effect = remove_and_measure(g, removed);
        const std::size_t in_gcc = gcc_root != kNoNode && base.find(v) == base.find(gcc_root) ? 1 : 0;
        out[i].node = v;
        out[i].gcc_after = effect.gcc_size;
        const std::size_t remaining = gcc - in_gcc;
        out[i].disconnected = remaining > effect.gcc_size ? remaining - effect.gcc_size : 0;
    }
    return out;
}

std::vector<NodeId> removal_order(const DepGraph& g, const RemovalStrategy& strategy, std::size_t trial,
                                  std::uint64_t seed) {
    const std::size_t n = g.node_count();
    if (strategy.kind == RemovalKind::targeted) {
        if (strategy.scores.size() != n) throw std::invalid_argument("removal_order: one score per node required");
        std::vector<NodeId> order(n);
        std::iota(order.begin(), order.end(), NodeId{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](NodeId a, NodeId b) { return strategy.scores[a] > strategy.scores[b]; });
        return order;
    }
    Rng rng(mix_seed(seed, trial));
    return random_permutation<NodeId>(n, rng);
}

std::vector<std::size_t> gcc_after_prefixes(const DepGraph& g, std::span<const NodeId> order,
                                            std::span<const std::size_t> removed_counts) {
    const std::size_t n = g.node_count();
    if (order.size() != n) throw std::invalid_argument("gcc_after_prefixes: order must list every node");
    std::vector<std::size_t> out(removed_counts.size(), 0);
    std::vector<std::uint8_t> present(n, 0);
    detail::UnionFind uf(n);
    std::size_t gcc = 0;
    // Walk removal counts from largest to smallest, re-adding order[k-1] to move from k to k-1.
    std::size_t k = n;
    for (std::size_t i = removed_counts.size(); i-- > 0;) {
        const std::size_t target = std::min(removed_counts[i], n);
        while (k > target) {
            const NodeId v = order[--k];
            present[v] = 1;
            gcc = std::max<std::size_t>(gcc, 1);
            const auto link = [&](NodeId w) {
                if (present[w]) gcc = std::max(gcc, uf.set_size(uf.unite(v, w)));
            };
            for (auto w : g.successors(v)) link(w);
            for (auto w : g.predecessors(v)) link(w);
        }
        out[i] = gcc;
    }
    return out;
}

RemovalCurve removal_curve(const DepGraph& g, const RemovalStrategy& strategy, std::span<const double> fractions,
                           std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("removal_curve: trials must be >= 1");
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        if (!(fractions[i] >= 0.0 && fractions[i] <= 1.0)) throw std::invalid_argument("removal_curve: fraction outside [0,1]");
        if (i > 0 && fractions[i] < fractions[i - 1]) throw std::invalid_argument("removal_curve: fractions must be ascending");
    }
    const std::size_t n = g.node_count();
    if (strategy.kind == RemovalKind::targeted) trials = 1;
    std::vector<std::size_t> counts(fractions.size());
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        counts[i] = static_cast<std::size_t>(std::llround(fractions[i] * static_cast<double>(n)));
    }
    std::vector<std::vector<std::size_t>> per_trial(trials);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t t = 0; t < trials; ++t) {
        const auto order = removal_order(g, strategy, t, seed);
        per_trial[t] = gcc_after_prefixes(g, order, counts);
    }
    RemovalCurve out;
    out.fractions.assign(fractions.begin(), fractions.end());
    out.kind = strategy.kind;
    out.trials = trials;
    out.seed = seed;
    out.gcc_fraction.assign(fractions.size(), 0.0);
    out.gcc_std.assign(fractions.size(), 0.0);
    if (n == 0) return out;
    const auto nd = static_cast<double>(n);
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        double sum = 0.0;
        for (const auto& t : per_trial) sum += static_cast<double>(t[i]) / nd;
        const double mean = sum / static_cast<double>(trials);
        double var = 0.0;
        for (const auto& t : per_trial) {
            const double d = static_cast<double>(t[i]) / nd - mean;
            var += d * d;
        }
        out.gcc_fraction[i] = mean;
        out.gcc_std[i] = std::sqrt(var / static_cast<double>(trials));
    }
    return out;
}

}  // namespace deplens
