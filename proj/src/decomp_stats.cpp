#include "deplens/decomp_stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "deplens/summary.hpp"

namespace deplens {

std::size_t AxisCounts::known() const {
    std::size_t k = 0;
    for (const auto& [cls, c] : counts) k += c;
    return k;
}

double AxisCounts::fraction(const std::string& cls) const {
    const auto k = known();
    const auto it = counts.find(cls);
    if (k == 0 || it == counts.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(k);
}

EdgePartitionStats edge_partition_stats(const DepGraph& g) {
    EdgePartitionStats out;
    for (const char* c : {"statement", "proof", "both"}) out.origin.counts[c] = 0;
    out.synthesis.counts = {{"explicit", 0}, {"synthesized", 0}};
    out.derivation.counts = {{"human", 0}, {"auto", 0}};
    for (const auto& e : g.edges()) {
        if (e.origin == Origin::unknown) {
            ++out.origin.unknown;
        } else {
            ++out.origin.counts[std::string(to_string(e.origin))];
        }
        switch (e.synthesized) {
            case Flag::yes: ++out.synthesis.counts["synthesized"]; break;
            case Flag::no: ++out.synthesis.counts["explicit"]; break;
            case Flag::unknown: ++out.synthesis.unknown; break;
        }
        switch (e.auto_derived) {
            case Flag::yes: ++out.derivation.counts["auto"]; break;
            case Flag::no: ++out.derivation.counts["human"]; break;
            case Flag::unknown: ++out.derivation.unknown; break;
        }
    }
    out.synthesis_ratio = out.synthesis.fraction("synthesized");
    out.auto_fraction = out.derivation.fraction("auto");
    return out;
}

DepGraph subgraph_by_predicate(const DepGraph& g, const NodePredicate& keep_node, const EdgePredicate& keep_edge) {
    std::vector<NodeId> new_id(g.node_count(), kNoNode);
    std::vector<NodeRecord> nodes;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!keep_node(g.node(v))) continue;
        new_id[v] = static_cast<NodeId>(nodes.size());
        nodes.push_back(g.node(v));
    }
    std::vector<EdgeRecord> edges;
    for (const auto& e : g.edges()) {
        if (new_id[e.src] == kNoNode || new_id[e.dst] == kNoNode || !keep_edge(e)) continue;
        EdgeRecord copy = e;
        copy.src = new_id[e.src];
        copy.dst = new_id[e.dst];
        edges.push_back(std::move(copy));
    }
    return build_graph(std::move(nodes), std::move(edges), BuildOptions{true});
}

EdgePredicate edge_has_tag(std::string tag) {
    return [tag = std::move(tag)](const EdgeRecord& e) {
        return std::find(e.tags.begin(), e.tags.end(), tag) != e.tags.end();
    };
}

NodePredicate node_has_attribute(std::string attribute) {
    return [attribute = std::move(attribute)](const NodeRecord& n) {
        return n.attributes && std::find(n.attributes->begin(), n.attributes->end(), attribute) != n.attributes->end();
    };
}

DepGraph edge_induced_subgraph(const DepGraph& g, const EdgePredicate& keep_edge) {
    std::vector<std::uint8_t> touched(g.node_count(), 0);
    for (const auto& e : g.edges()) {
        if (keep_edge(e)) touched[e.src] = touched[e.dst] = 1;
    }
    return subgraph_by_predicate(g, [&](const NodeRecord& n) { return touched[n.id] != 0; }, keep_edge);
}

std::size_t diameter(const DepGraph& g) {
    const std::size_t n = g.node_count();
    std::size_t best = 0;
#pragma omp parallel
    {
        std::vector<std::int64_t> dist(n, -1);
        std::vector<NodeId> queue;
        std::size_t local = 0;
#pragma omp for schedule(dynamic, 16)
        for (std::size_t s = 0; s < n; ++s) {
            std::fill(dist.begin(), dist.end(), -1);
            queue.assign(1, static_cast<NodeId>(s));
            dist[s] = 0;
            for (std::size_t h = 0; h < queue.size(); ++h) {
                const NodeId v = queue[h];
                for (auto w : g.successors(v)) {
                    if (dist[w] < 0) {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            local = std::max(local, static_cast<std::size_t>(dist[queue.back()]));
        }
#pragma omp critical
        best = std::max(best, local);
    }
    return best;
}

AttributeStats attribute_stats(const std::vector<NodeRecord>& nodes, const std::string& flattening_attribute) {
    AttributeStats out;
    std::map<std::string, std::size_t> counts;
    for (const auto& n : nodes) {
        if (!n.attributes) continue;
        ++out.universe;
        const std::set<std::string> distinct(n.attributes->begin(), n.attributes->end());
        if (!distinct.empty()) ++out.any_attribute;
        for (const auto& a : distinct) ++counts[a];
    }
    const auto share = [&](std::size_t c) {
        return out.universe ? static_cast<double>(c) / static_cast<double>(out.universe) : 0.0;
    };
    for (const auto& [a, c] : counts) out.attributes.push_back({a, c, share(c)});
    std::stable_sort(out.attributes.begin(), out.attributes.end(),
                     [](const AttributeCount& x, const AttributeCount& y) { return x.count > y.count; });
    out.any_share = share(out.any_attribute);
    const auto it = counts.find(flattening_attribute);
    out.flattening_ratio = share(it == counts.end() ? 0 : it->second);
    return out;
}

DefHeightStats def_height_stats(const std::vector<NodeRecord>& nodes) {
    DefHeightStats out;
    std::vector<double> heights;
    for (const auto& n : nodes) {
        if (!n.def_height) continue;
        switch (n.def_height->kind) {
            case DefHeight::Kind::regular:
                ++out.regular;
                heights.push_back(n.def_height->value);
                out.max = std::max(out.max, n.def_height->value);
                break;
            case DefHeight::Kind::abbreviation: ++out.abbreviation; break;
            case DefHeight::Kind::opaque: ++out.opaque; break;
        }
    }
    std::sort(heights.begin(), heights.end());
    const auto s = summarize(heights);
    out.median = s.median;
    out.mean = s.mean;
    for (std::size_t i = 0; i < out.deciles.size(); ++i) {
        out.deciles[i] = quantile_sorted(heights, static_cast<double>(i + 1) / 10.0);
    }
    return out;
}

std::map<std::string, double> FreqProfile::distribution() const {
    std::map<std::string, double> out;
    if (total == 0) return out;
    for (const auto& [label, c] : counts) out[label] = static_cast<double>(c) / static_cast<double>(total);
    return out;
}

std::vector<std::pair<std::string, std::size_t>> FreqProfile::ranked() const {
    std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

double jensen_shannon(const FreqProfile& p, const FreqProfile& q) {
    if (p.total == 0 || q.total == 0) throw std::invalid_argument("jensen_shannon: empty profile");
    const auto P = p.distribution();
    const auto Q = q.distribution();
    std::set<std::string> labels;
    for (const auto& [l, x] : P) labels.insert(l);
    for (const auto& [l, x] : Q) labels.insert(l);
    double js = 0.0;
    for (const auto& l : labels) {
        const auto pi = P.count(l) ? P.at(l) : 0.0;
        const auto qi = Q.count(l) ? Q.at(l) : 0.0;
        const double m = 0.5 * (pi + qi);
        if (pi > 0.0) js += 0.5 * pi * std::log2(pi / m);
        if (qi > 0.0) js += 0.5 * qi * std::log2(qi / m);
    }
    return std::clamp(js, 0.0, 1.0);
}

TacticStats tactic_stats(const std::vector<NodeRecord>& nodes, const Grouping& grouping) {
    if (grouping.group_of.size() != nodes.size()) throw std::invalid_argument("tactic_stats: grouping must cover every node");
    TacticStats out;
    std::vector<FreqProfile> per_group(grouping.group_count());
    std::vector<double> lengths;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        const auto& t = nodes[v].tactics;
        if (!t || t->empty()) continue;
        ++out.proofs;
        out.steps += t->size();
        out.max_steps = std::max(out.max_steps, t->size());
        lengths.push_back(static_cast<double>(t->size()));
        const auto g = grouping.group_of[v];
        for (const auto& tactic : *t) {
            ++out.global.counts[tactic];
            ++out.global.total;
            if (g) {
                ++per_group[*g].counts[tactic];
                ++per_group[*g].total;
            }
        }
    }
    const auto s = summarize(lengths);
    out.mean_steps = s.mean;
    out.median_steps = s.median;
    for (GroupId i = 0; i < per_group.size(); ++i) {
        if (per_group[i].total == 0) continue;
        out.groups.push_back(grouping.names[i]);
        out.group_profiles.push_back(std::move(per_group[i]));
    }
    const std::size_t k = out.groups.size();
    out.jsd.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            out.jsd[i][j] = out.jsd[j][i] = jensen_shannon(out.group_profiles[i], out.group_profiles[j]);
        }
    }
    return out;
}

KindMatrix inter_kind_flow(const DepGraph& g) {
    KindMatrix m{};
    for (const auto& e : g.edges()) {
        ++m[static_cast<std::size_t>(g.node(e.src).kind)][static_cast<std::size_t>(g.node(e.dst).kind)];
    }
    return m;
}

}  // namespace deplens
