#include "deplens/community.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "deplens/random.hpp"

namespace deplens {

std::size_t UndirectedGraph::edge_count() const noexcept {
    std::size_t loops = 0;
    for (double w : self_loops) loops += w != 0.0;
    return neighbors.size() / 2 + loops;
}

double UndirectedGraph::degree(NodeId v) const {
    double d = 2.0 * self_loops[v];
    for (std::size_t i = offsets[v]; i < offsets[v + 1]; ++i) d += weights[i];
    return d;
}

UndirectedGraph make_undirected(std::size_t node_count, std::span<const UndirectedEdge> edges) {
    std::map<std::pair<NodeId, NodeId>, double> merged;
    UndirectedGraph g;
    g.self_loops.assign(node_count, 0.0);
    for (const auto& e : edges) {
        if (e.u >= node_count || e.v >= node_count) throw std::out_of_range("make_undirected: endpoint out of range");
        g.total_weight += e.weight;
        if (e.u == e.v) {
            g.self_loops[e.u] += e.weight;
        } else {
            merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.weight;
        }
    }
    std::vector<std::size_t> deg(node_count, 0);
    for (const auto& [key, w] : merged) {
        ++deg[key.first];
        ++deg[key.second];
    }
    g.offsets.assign(node_count + 1, 0);
    for (std::size_t v = 0; v < node_count; ++v) g.offsets[v + 1] = g.offsets[v] + deg[v];
    g.neighbors.resize(g.offsets.back());
    g.weights.resize(g.offsets.back());
    std::vector<std::size_t> pos(g.offsets.begin(), g.offsets.end() - 1);
    // `merged` iterates in (min, max) order, so every neighbor list comes out ascending.
    for (const auto& [key, w] : merged) {
        g.neighbors[pos[key.first]] = key.second;
        g.weights[pos[key.first]++] = w;
    }
    for (const auto& [key, w] : merged) {
        g.neighbors[pos[key.second]] = key.first;
        g.weights[pos[key.second]++] = w;
    }
    for (std::size_t v = 0; v < node_count; ++v) {
        std::vector<std::pair<NodeId, double>> row;
        for (std::size_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) row.emplace_back(g.neighbors[i], g.weights[i]);
        std::sort(row.begin(), row.end());
        for (std::size_t i = 0; i < row.size(); ++i) {
            g.neighbors[g.offsets[v] + i] = row[i].first;
            g.weights[g.offsets[v] + i] = row[i].second;
        }
    }
    return g;
}

UndirectedGraph undirected_projection(const DepGraph& g) {
    std::vector<UndirectedEdge> edges;
    edges.reserve(g.edge_count());
    for (const auto& e : g.edges()) edges.push_back({e.src, e.dst, e.weight});
    return make_undirected(g.node_count(), edges);
}

double modularity(const UndirectedGraph& g, std::span<const GroupId> labels, double gamma) {
    const std::size_t n = g.node_count();
    if (labels.size() != n) throw std::invalid_argument("modularity: one label per node required");
    const double m = g.total_weight;
    if (!(m > 0.0)) throw std::invalid_argument("modularity: graph has zero total weight");
    const GroupId groups = n ? *std::max_element(labels.begin(), labels.end()) + 1 : 0;
    std::vector<double> inside(groups, 0.0), tot(groups, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        const auto c = labels[v];
        inside[c] += g.self_loops[v];
        tot[c] += g.degree(v);
        for (std::size_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
            const NodeId u = g.neighbors[i];
            if (u > v && labels[u] == c) inside[c] += g.weights[i];
        }
    }
    double q = 0.0;
    for (GroupId c = 0; c < groups; ++c) {
        const double frac = tot[c] / (2.0 * m);
        q += inside[c] / m - gamma * frac * frac;
    }
    return q;
}

namespace {

/// One local-moving phase; returns the per-node community (dense ids) and
/// whether any node moved.
bool local_moves(const UndirectedGraph& g, const LouvainOptions& options, Rng& rng, std::vector<GroupId>& community) {
    const std::size_t n = g.node_count();
    const double m = g.total_weight;
    std::vector<double> k(n), tot(n, 0.0);
    community.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        k[v] = g.degree(v);
        community[v] = v;
        tot[v] = k[v];
    }
    auto order = random_permutation<NodeId>(n, rng);

    std::vector<double> link(n, 0.0);
    std::vector<GroupId> candidates;
    bool any_move = false;
    for (std::size_t sweep = 0; sweep < options.max_passes; ++sweep) {
        bool moved = false;
        for (auto v : order) {
            const GroupId own = community[v];
            candidates.clear();
            for (std::size_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
                const GroupId c = community[g.neighbors[i]];
                if (link[c] == 0.0) candidates.push_back(c);
                link[c] += g.weights[i];
            }
            tot[own] -= k[v];
            // Gain of joining c, up to a positive factor and terms independent of c.
            const auto gain = [&](GroupId c) { return link[c] - options.resolution * tot[c] * k[v] / (2.0 * m); };
            const double own_gain = gain(own);
            std::sort(candidates.begin(), candidates.end());
            GroupId best = own;
            double best_gain = own_gain;
            bool have = false;
            for (auto c : candidates) {
                if (c == own) continue;
                const double gc = gain(c);
                if (!have || gc > best_gain) {
                    best = c;
                    best_gain = gc;
                    have = true;
                }
            }
            if (!have || !(best_gain > own_gain + options.min_gain)) best = own;
            tot[best] += k[v];
            if (best != own) {
                community[v] = best;
                moved = true;
                any_move = true;
            }
            for (auto c : candidates) link[c] = 0.0;
        }
        if (!moved) break;
    }
    // Dense relabel in order of first appearance by node id.
    std::vector<GroupId> dense(n, static_cast<GroupId>(-1));
    GroupId next = 0;
    for (auto& c : community) {
        if (dense[c] == static_cast<GroupId>(-1)) dense[c] = next++;
        c = dense[c];
    }
    return any_move;
}

UndirectedGraph collapse(const UndirectedGraph& g, const std::vector<GroupId>& community, std::size_t groups) {
    std::vector<UndirectedEdge> edges;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.self_loops[v] != 0.0) edges.push_back({community[v], community[v], g.self_loops[v]});
        for (std::size_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
            const NodeId u = g.neighbors[i];
            if (u > v) edges.push_back({community[v], community[u], g.weights[i]});
        }
    }
    return make_undirected(groups, edges);
}

}  // namespace

CommunityResult louvain(const UndirectedGraph& g, const LouvainOptions& options) {
    if (!(g.total_weight > 0.0)) throw std::invalid_argument("louvain: graph has zero total weight");
    CommunityResult out;
    out.seed = options.seed;
    out.resolution = options.resolution;
    Rng rng(mix_seed(options.seed));

    std::vector<GroupId> membership(g.node_count());
    std::iota(membership.begin(), membership.end(), GroupId{0});
    UndirectedGraph level = g;
    double last_q = modularity(g, membership, options.resolution);
    for (std::size_t pass = 0; pass < options.max_passes; ++pass) {
        std::vector<GroupId> community;
        if (!local_moves(level, options, rng, community)) break;
        const std::size_t groups = community.empty() ? 0 : *std::max_element(community.begin(), community.end()) + 1;
        for (auto& c : membership) c = community[c];
        level = collapse(level, community, groups);
        const double q = modularity(g, membership, options.resolution);
        out.pass_modularity.push_back(q);
        ++out.passes;
        if (!(q - last_q > options.min_gain)) break;
        last_q = q;
    }
    out.partition = Partition::by_size(membership);
    out.modularity = modularity(g, out.partition.labels(), options.resolution);
    return out;
}

PartitionComparison compare_partitions(std::span<const GroupId> a, std::span<const GroupId> b) {
    if (a.size() != b.size()) throw std::invalid_argument("compare_partitions: partitions cover different node sets");
    PartitionComparison out;
    const std::size_t n = a.size();
    if (n == 0) {
        out.nmi = 1.0;
        out.ari = 1.0;
        return out;
    }
    std::map<GroupId, std::uint64_t> ca, cb;
    std::map<std::pair<GroupId, GroupId>, std::uint64_t> joint;
    for (std::size_t i = 0; i < n; ++i) {
        ++ca[a[i]];
        ++cb[b[i]];
        ++joint[{a[i], b[i]}];
    }
    const auto N = static_cast<double>(n);
    const auto entropy = [N](const auto& counts) {
        double h = 0.0;
        for (const auto& [key, c] : counts) {
            const double p = static_cast<double>(c) / N;
            h -= p * std::log(p);
        }
        return h;
    };
    out.entropy_a = entropy(ca);
    out.entropy_b = entropy(cb);
    // Clusters matched one-to-one: the partitions agree up to labels, and the
    // rounded sums below would land an ulp away from 1.
    if (joint.size() == ca.size() && joint.size() == cb.size()) {
        out.mutual_information = out.entropy_a;
        out.nmi = 1.0;
        out.ari = 1.0;
        return out;
    }
    double mi = 0.0;
    for (const auto& [key, c] : joint) {
        const auto nij = static_cast<double>(c);
        mi += nij / N * std::log(N * nij / (static_cast<double>(ca[key.first]) * static_cast<double>(cb[key.second])));
    }
    out.mutual_information = std::max(0.0, mi);
    const double hsum = out.entropy_a + out.entropy_b;
    out.nmi = hsum > 0.0 ? std::clamp(2.0 * out.mutual_information / hsum, 0.0, 1.0) : 1.0;

    const auto pairs = [](std::uint64_t x) { return static_cast<long double>(x) * static_cast<long double>(x - (x > 0)) / 2; };
    long double index = 0, sa = 0, sb = 0;
    for (const auto& [key, c] : joint) index += pairs(c);
    for (const auto& [key, c] : ca) sa += pairs(c);
    for (const auto& [key, c] : cb) sb += pairs(c);
    const long double total = pairs(n);
    const long double expected = total > 0 ? sa * sb / total : 0;
    const long double maximum = (sa + sb) / 2;
    const long double denom = maximum - expected;
    out.ari = denom != 0 ? static_cast<double>((index - expected) / denom) : 1.0;
    return out;
}

}  // namespace deplens
