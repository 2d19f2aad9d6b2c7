#include "deplens/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "deplens/summary.hpp"

namespace deplens {
namespace {

Grouping grouping_from_keys(const std::vector<std::optional<std::string>>& keys) {
    std::vector<std::string> names;
    for (const auto& k : keys) {
        if (k) names.push_back(*k);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    std::unordered_map<std::string_view, GroupId> id;
    id.reserve(names.size());
    for (GroupId i = 0; i < names.size(); ++i) id.emplace(names[i], i);

    Grouping out;
    out.group_of.resize(keys.size());
    for (std::size_t v = 0; v < keys.size(); ++v) {
        if (keys[v]) out.group_of[v] = id.at(*keys[v]);
    }
    out.names = std::move(names);
    return out;
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

}  // namespace

NamespaceKey truncate_namespace(const DottedName& name, std::size_t k) {
    if (k == 0) throw std::invalid_argument("truncate_namespace: k must be >= 1");
    if (name.depth() <= 1) return {std::string(kRootNamespace), true};
    if (name.depth() >= k + 1) return {name.prefix(k).str(), false};
    return {name.parent().str(), false};
}

Grouping namespace_grouping(const DepGraph& g, std::size_t k) {
    std::vector<std::optional<std::string>> keys(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) keys[v] = truncate_namespace(g.node(v).name, k).name;
    return grouping_from_keys(keys);
}

Grouping module_grouping(const DepGraph& g) {
    std::vector<std::optional<std::string>> keys(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (const auto& m = g.node(v).module) keys[v] = m->str();
    }
    return grouping_from_keys(keys);
}

Grouping prefix_grouping(const DepGraph& g, std::size_t k) {
    if (k == 0) throw std::invalid_argument("prefix_grouping: k must be >= 1");
    std::vector<std::optional<std::string>> keys(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) keys[v] = g.node(v).name.prefix(k).str();
    return grouping_from_keys(keys);
}

Grouping grouping_from_modules(std::span<const std::optional<NodeId>> decl_module, const DepGraph& modules) {
    std::vector<std::optional<std::string>> keys(decl_module.size());
    for (std::size_t v = 0; v < decl_module.size(); ++v) {
        if (decl_module[v]) keys[v] = modules.name(*decl_module[v]);
    }
    return grouping_from_keys(keys);
}

AggregatedGraph aggregate(const DepGraph& g, const Grouping& grouping, NodeKind kind) {
    if (grouping.group_of.size() != g.node_count()) {
        throw std::invalid_argument("aggregate: grouping must cover every node id");
    }
    AggregatedGraph out;
    out.internal.assign(grouping.group_count(), 0);
    std::map<std::pair<GroupId, GroupId>, std::size_t> weight;
    for (const auto& e : g.edges()) {
        const auto a = grouping.group_of[e.src];
        const auto b = grouping.group_of[e.dst];
        if (!a || !b) {
            ++out.unmapped_edges;
        } else if (*a == *b) {
            ++out.internal[*a];
            ++out.internal_total;
        } else {
            ++weight[{*a, *b}];
            ++out.cross_total;
        }
    }
    std::vector<NodeRecord> nodes(grouping.group_count());
    for (GroupId i = 0; i < nodes.size(); ++i) {
        nodes[i].name = DottedName::parse(grouping.names[i]);
        nodes[i].kind = kind;
    }
    std::vector<EdgeRecord> edges;
    edges.reserve(weight.size());
    for (const auto& [pair, w] : weight) {
        EdgeRecord e;
        e.src = pair.first;
        e.dst = pair.second;
        e.weight = static_cast<double>(w);
        edges.push_back(std::move(e));
    }
    out.graph = build_graph(std::move(nodes), std::move(edges));
    return out;
}

AggregatedGraph build_ns_graph(const DepGraph& declarations, std::size_t k) {
    return aggregate(declarations, namespace_grouping(declarations, k), NodeKind::namespace_);
}

AggregatedGraph aggregate_to_files(const DepGraph& declarations, const Grouping& modules) {
    return aggregate(declarations, modules, NodeKind::module);
}

ContainmentRatio containment_ratio(const DepGraph& g, const Grouping& grouping, Denominator denominator) {
    if (grouping.group_of.size() != g.node_count()) {
        throw std::invalid_argument("containment_ratio: grouping must cover every node id");
    }
    ContainmentRatio out;
    for (const auto& e : g.edges()) {
        const auto a = grouping.group_of[e.src];
        const auto b = grouping.group_of[e.dst];
        if (a && b) {
            ++out.denominator;
            if (*a == *b) ++out.same;
        } else if (denominator == Denominator::all) {
            ++out.denominator;
        }
    }
    out.ratio = out.denominator ? static_cast<double>(out.same) / static_cast<double>(out.denominator) : 0.0;
    return out;
}

CohesionTable module_cohesion(const DepGraph& declarations, const Grouping& modules) {
    if (modules.group_of.size() != declarations.node_count()) {
        throw std::invalid_argument("module_cohesion: grouping must cover every node id");
    }
    CohesionTable out;
    out.modules.resize(modules.group_count());
    for (GroupId m = 0; m < out.modules.size(); ++m) out.modules[m].group = m;
    for (const auto& e : declarations.edges()) {
        const auto a = modules.group_of[e.src];
        const auto b = modules.group_of[e.dst];
        if (a && b && *a == *b) {
            ++out.modules[*a].internal;
            continue;
        }
        if (a) ++out.modules[*a].external;
        if (b) ++out.modules[*b].external;
    }
    std::vector<double> values;
    values.reserve(out.modules.size());
    for (auto& m : out.modules) {
        const auto total = m.internal + m.external;
        m.cohesion = total ? static_cast<double>(m.internal) / static_cast<double>(total) : 0.0;
        if (m.cohesion == 0.0) ++out.zero_count;
        values.push_back(m.cohesion);
    }
    const auto s = summarize(values);
    out.mean = s.mean;
    out.median = s.median;
    out.std_dev = s.std_dev;
    out.max = s.max;
    return out;
}

EdgeBreakdown edge_boundary_breakdown(const DepGraph& declarations, const Grouping& modules,
                                      const Grouping& namespaces) {
    if (modules.group_of.size() != declarations.node_count() ||
        namespaces.group_of.size() != declarations.node_count()) {
        throw std::invalid_argument("edge_boundary_breakdown: groupings must cover every node id");
    }
    EdgeBreakdown out;
    for (const auto& e : declarations.edges()) {
        const auto ma = modules.group_of[e.src];
        const auto mb = modules.group_of[e.dst];
        const auto na = namespaces.group_of[e.src];
        const auto nb = namespaces.group_of[e.dst];
        if (!ma || !mb || !na || !nb) {
            ++out.missing;
        } else if (*ma == *mb) {
            ++out.same_module;
        } else if (*na == *nb) {
            ++out.same_namespace;
        } else {
            ++out.cross_namespace;
        }
    }
    return out;
}

std::vector<int> module_depths(const DepGraph& modules) {
    std::vector<int> out(modules.node_count());
    for (NodeId v = 0; v < modules.node_count(); ++v) out[v] = static_cast<int>(modules.node(v).name.depth());
    return out;
}

std::vector<int> declaration_depths(const DepGraph& declarations) {
    std::vector<int> out(declarations.node_count());
    for (NodeId v = 0; v < declarations.node_count(); ++v) {
        out[v] = static_cast<int>(declarations.node(v).name.depth()) - 1;
    }
    return out;
}

DepthAsymmetry depth_asymmetry(const DepGraph& g, std::span<const int> depth) {
    if (depth.size() != g.node_count()) throw std::invalid_argument("depth_asymmetry: one depth per node required");
    DepthAsymmetry out;
    std::size_t same = 0, src_deeper = 0, dst_deeper = 0;
    long long diff_sum = 0;
    for (const auto& e : g.edges()) {
        const int d = depth[e.src] - depth[e.dst];
        diff_sum += d;
        if (d == 0) {
            ++same;
        } else if (d > 0) {
            ++src_deeper;
        } else {
            ++dst_deeper;
        }
    }
    out.edges = g.edge_count();
    if (out.edges == 0) return out;
    const auto n = static_cast<double>(out.edges);
    out.same = static_cast<double>(same) / n;
    out.source_deeper = static_cast<double>(src_deeper) / n;
    out.target_deeper = static_cast<double>(dst_deeper) / n;
    out.mean_diff = static_cast<double>(diff_sum) / n;
    return out;
}

DepthDifferenceReport module_depth_difference(const DepGraph& modules, const DepGraph& declarations,
                                              std::span<const std::optional<NodeId>> decl_module,
                                              std::size_t directory_depth, std::size_t min_modules) {
    if (decl_module.size() != declarations.node_count()) {
        throw std::invalid_argument("module_depth_difference: module map must cover every declaration id");
    }
    const auto depth = module_depths(modules);
    std::vector<std::vector<NodeId>> members(modules.node_count());
    for (NodeId d = 0; d < declarations.node_count(); ++d) {
        if (decl_module[d]) members[*decl_module[d]].push_back(d);
    }

    DepthDifferenceReport out;
    std::vector<std::uint32_t> seen(modules.node_count(), 0);
    for (NodeId m = 0; m < modules.node_count(); ++m) {
        if (modules.out_degree(m) == 0) continue;
        const std::uint32_t mark = m + 1;
        seen[m] = mark;
        std::size_t used = 0;
        double use_sum = 0.0;
        for (auto d : members[m]) {
            for (auto p : declarations.successors(d)) {
                const auto pm = decl_module[p];
                if (!pm || seen[*pm] == mark) continue;
                seen[*pm] = mark;
                ++used;
                use_sum += depth[*pm];
            }
        }
        if (used == 0) continue;
        double imp_sum = 0.0;
        for (auto t : modules.successors(m)) imp_sum += depth[t];
        ModuleDepthDifference row;
        row.module = m;
        row.import_depth = imp_sum / static_cast<double>(modules.out_degree(m));
        row.use_depth = use_sum / static_cast<double>(used);
        row.delta = row.use_depth - row.import_depth;
        out.modules.push_back(row);
    }

    std::vector<double> deltas;
    std::size_t neg = 0, pos = 0, zero = 0;
    std::map<std::string, std::vector<const ModuleDepthDifference*>> by_dir;
    for (const auto& row : out.modules) {
        deltas.push_back(row.delta);
        if (row.delta < 0) {
            ++neg;
        } else if (row.delta > 0) {
            ++pos;
        } else {
            ++zero;
        }
        by_dir[modules.node(row.module).name.prefix(directory_depth).str()].push_back(&row);
    }
    const auto s = summarize(deltas);
    out.mean_delta = s.mean;
    out.median_delta = s.median;
    out.std_delta = s.std_dev;
    if (!deltas.empty()) {
        const auto n = static_cast<double>(deltas.size());
        out.negative = static_cast<double>(neg) / n;
        out.positive = static_cast<double>(pos) / n;
        out.zero = static_cast<double>(zero) / n;
    }
    for (const auto& [dir, rows] : by_dir) {
        if (rows.size() < min_modules) continue;
        std::vector<double> imp, use, del;
        for (const auto* r : rows) {
            imp.push_back(r->import_depth);
            use.push_back(r->use_depth);
            del.push_back(r->delta);
        }
        DirectoryDepthDifference d;
        d.directory = dir;
        d.modules = rows.size();
        d.import_depth = mean_of(imp);
        d.use_depth = mean_of(use);
        d.mean_delta = mean_of(del);
        d.median_delta = lower_median(del);
        out.directories.push_back(std::move(d));
    }
    std::sort(out.directories.begin(), out.directories.end(), [](const auto& x, const auto& y) {
        return std::tie(x.mean_delta, x.directory) < std::tie(y.mean_delta, y.directory);
    });
    return out;
}

std::vector<GroupPair> cross_group_pairs(const DepGraph& weighted, std::size_t top_k) {
    if (top_k == 0) throw std::invalid_argument("cross_group_pairs: top_k must be >= 1");
    std::map<std::pair<std::string, std::string>, double> sum;
    for (const auto& e : weighted.edges()) {
        auto a = weighted.name(e.src);
        auto b = weighted.name(e.dst);
        if (b < a) std::swap(a, b);
        sum[{std::move(a), std::move(b)}] += e.weight;
    }
    std::vector<GroupPair> out;
    out.reserve(sum.size());
    for (auto& [key, w] : sum) out.push_back({key.first, key.second, w});
    std::stable_sort(out.begin(), out.end(), [](const GroupPair& x, const GroupPair& y) { return x.weight > y.weight; });
    if (out.size() > top_k) out.resize(top_k);
    return out;
}

ZeroCitationReport zero_citation_by_group(const DepGraph& g, const Grouping& grouping,
                                          std::span<const NodeKind> kinds, std::size_t min_group) {
    if (min_group == 0) throw std::invalid_argument("zero_citation_by_group: min_group must be >= 1");
    if (grouping.group_of.size() != g.node_count()) {
        throw std::invalid_argument("zero_citation_by_group: grouping must cover every node id");
    }
    std::vector<ZeroCitationRow> rows(grouping.group_count());
    ZeroCitationReport out;
    out.overall.group = "*";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!kinds.empty() && std::find(kinds.begin(), kinds.end(), g.node(v).kind) == kinds.end()) continue;
        const bool zero = g.in_degree(v) == 0;
        ++out.overall.total;
        out.overall.zero += zero;
        if (const auto gid = grouping.group_of[v]) {
            ++rows[*gid].total;
            rows[*gid].zero += zero;
        }
    }
    auto finish = [](ZeroCitationRow& r) {
        r.rate = r.total ? static_cast<double>(r.zero) / static_cast<double>(r.total) : 0.0;
    };
    finish(out.overall);
    for (GroupId i = 0; i < rows.size(); ++i) {
        if (rows[i].total < min_group) continue;
        rows[i].group = grouping.names[i];
        finish(rows[i]);
        out.groups.push_back(std::move(rows[i]));
    }
    std::stable_sort(out.groups.begin(), out.groups.end(),
                     [](const ZeroCitationRow& x, const ZeroCitationRow& y) { return x.rate > y.rate; });
    return out;
}

}  // namespace deplens
