#include "deplens/module_analysis.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "deplens/parallel.hpp"
#include "deplens/structure.hpp"
#include "deplens/summary.hpp"

namespace deplens {

std::vector<EdgeId> redundant_edges(const DepGraph& g) {
    const std::size_t n = g.node_count();
    const auto level = topological_levels(g, LevelOrigin::premises);
    std::uint32_t depth = 0;
    for (auto l : level) depth = std::max(depth, l);
    std::vector<std::vector<NodeId>> by_level(n ? depth + 1 : 0);
    for (NodeId v = 0; v < n; ++v) by_level[level[v]].push_back(v);

    // desc[v]: strict descendants of v as a bitset of ceil(n/64) words.
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> desc(n * words, 0);
    std::vector<std::uint8_t> redundant(g.edge_count(), 0);

    for (const auto& layer : by_level) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::size_t i = 0; i < layer.size(); ++i) {
            const NodeId u = layer[i];
            std::uint64_t* mine = desc.data() + static_cast<std::size_t>(u) * words;
            for (auto w : g.successors(u)) {
                const std::uint64_t* theirs = desc.data() + static_cast<std::size_t>(w) * words;
                for (std::size_t k = 0; k < words; ++k) mine[k] |= theirs[k];
            }
            // `mine` now holds descendants reachable through some successor by >= 1 step.
            const auto succ = g.successors(u);
            const EdgeId first = g.out_edge_begin(u);
            for (std::size_t j = 0; j < succ.size(); ++j) {
                const NodeId v = succ[j];
                if ((mine[v / 64] >> (v % 64)) & 1U) redundant[first + j] = 1;
            }
            for (auto v : succ) mine[v / 64] |= std::uint64_t{1} << (v % 64);
        }
    }
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < redundant.size(); ++e) {
        if (redundant[e]) out.push_back(e);
    }
    return out;
}

ReductionResult transitive_reduction(const DepGraph& g) {
    ReductionResult result;
    result.removed = redundant_edges(g);
    std::vector<EdgeRecord> kept;
    kept.reserve(g.edge_count() - result.removed.size());
    std::size_t r = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (r < result.removed.size() && result.removed[r] == e) {
            ++r;
            continue;
        }
        kept.push_back(g.edge(e));
    }
    result.reduced = build_graph(g.nodes(), std::move(kept));
    result.redundancy_rate =
        g.edge_count() ? static_cast<double>(result.removed.size()) / static_cast<double>(g.edge_count()) : 0.0;
    return result;
}

CriticalPath critical_path(const DepGraph& g, std::span<const double> weights) {
    const std::size_t n = g.node_count();
    if (weights.size() != n) throw std::invalid_argument("critical_path: one weight per node required");
    CriticalPath out;
    if (n == 0) return out;
    const auto order = topological_order(g);

    // best[v]: heaviest path starting at v and ending at a sink.
    std::vector<double> best(n, 0.0);
    std::vector<NodeId> next(n, kNoNode);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const NodeId v = *it;
        double tail = 0.0;
        for (auto w : g.successors(v)) {
            // Successors are ascending, so strict '>' keeps the smallest id on ties.
            if (next[v] == kNoNode || best[w] > tail) {
                tail = best[w];
                next[v] = w;
            }
        }
        best[v] = weights[v] + tail;
    }
    NodeId start = kNoNode;
    for (NodeId v = 0; v < n; ++v) {
        if (g.in_degree(v) != 0) continue;
        if (start == kNoNode || best[v] > best[start]) start = v;
    }
    for (NodeId v = start; v != kNoNode; v = next[v]) out.path.push_back(v);
    out.total_weight = best[start];
    for (double w : weights) out.sequential_weight += w;
    out.weighted_speedup = out.total_weight > 0 ? out.sequential_weight / out.total_weight : 0.0;
    out.parallelism_ratio = static_cast<double>(n) / static_cast<double>(out.path.size());
    return out;
}

ModuleContainment module_containment(const DepGraph& g, std::size_t k) {
    if (k == 0) throw std::invalid_argument("module_containment: k must be >= 1");
    ModuleContainment out;
    std::vector<std::string> key(g.node_count());
    std::unordered_set<std::string> groups;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        key[v] = g.node(v).name.prefix(k).str();
        groups.insert(key[v]);
    }
    out.group_count = groups.size();
    out.edges = g.edge_count();
    for (const auto& e : g.edges()) {
        if (key[e.src] == key[e.dst]) ++out.same_group_edges;
    }
    out.ratio = out.edges ? static_cast<double>(out.same_group_edges) / static_cast<double>(out.edges) : 0.0;
    return out;
}

std::vector<std::optional<NodeId>> map_declarations_to_modules(const DepGraph& declarations, const DepGraph& modules) {
    std::vector<std::optional<NodeId>> out(declarations.node_count());
    std::unordered_map<std::string, std::optional<NodeId>> cache;
    for (NodeId d = 0; d < declarations.node_count(); ++d) {
        const auto& m = declarations.node(d).module;
        if (!m) continue;
        const auto name = m->str();
        auto it = cache.find(name);
        if (it == cache.end()) it = cache.emplace(name, modules.find(name)).first;
        out[d] = it->second;
    }
    return out;
}

ImportClassification classify_import_edges(const DepGraph& modules, const DepGraph& declarations,
                                           std::span<const std::optional<NodeId>> decl_module) {
    if (decl_module.size() != declarations.node_count()) {
        throw std::invalid_argument("classify_import_edges: module map must cover every declaration id");
    }
    ImportClassification out;
    std::unordered_map<std::uint64_t, std::size_t> pair_weight;
    for (const auto& e : declarations.edges()) {
        const auto a = decl_module[e.src];
        const auto b = decl_module[e.dst];
        if (!a || !b) {
            ++out.uncovered_edges;
            continue;
        }
        if (*a == *b) {
            ++out.intra_module_edges;
            continue;
        }
        ++pair_weight[(static_cast<std::uint64_t>(*a) << 32) | *b];
    }
    out.file_edges.reserve(pair_weight.size());
    for (const auto& [key, w] : pair_weight) {
        out.file_edges.push_back({static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffU), w});
    }
    std::sort(out.file_edges.begin(), out.file_edges.end(),
              [](const FileEdge& x, const FileEdge& y) { return std::tie(x.src_module, x.dst_module) < std::tie(y.src_module, y.dst_module); });

    out.import_use.resize(modules.edge_count(), ImportUse::unused);
    for (EdgeId e = 0; e < modules.edge_count(); ++e) {
        const auto& imp = modules.edge(e);
        if (pair_weight.count((static_cast<std::uint64_t>(imp.src) << 32) | imp.dst)) {
            out.import_use[e] = ImportUse::active;
            ++out.active;
        } else {
            ++out.unused;
        }
    }

    // Group file edges by source module and resolve reachability with one BFS per source.
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < out.file_edges.size(); ++i) {
        if (i == 0 || out.file_edges[i].src_module != out.file_edges[i - 1].src_module) starts.push_back(i);
    }
    starts.push_back(out.file_edges.size());
    const std::size_t n = modules.node_count();
    const std::size_t source_count = starts.size() - 1;
#pragma omp parallel
    {
        std::vector<std::uint32_t> stamp(n, 0);
        std::vector<NodeId> queue;
#pragma omp for schedule(dynamic, 8)
        for (std::size_t s = 0; s < source_count; ++s) {
            const NodeId src = out.file_edges[starts[s]].src_module;
            const auto mark = static_cast<std::uint32_t>(s + 1);
            queue.clear();
            for (auto w : modules.successors(src)) {
                if (stamp[w] != mark) {
                    stamp[w] = mark;
                    queue.push_back(w);
                }
            }
            for (std::size_t h = 0; h < queue.size(); ++h) {
                for (auto w : modules.successors(queue[h])) {
                    if (stamp[w] != mark) {
                        stamp[w] = mark;
                        queue.push_back(w);
                    }
                }
            }
            for (std::size_t i = starts[s]; i < starts[s + 1]; ++i) {
                auto& fe = out.file_edges[i];
                if (modules.has_edge(fe.src_module, fe.dst_module)) {
                    fe.cls = FileEdgeClass::direct;
                } else if (stamp[fe.dst_module] == mark) {
                    fe.cls = FileEdgeClass::transitive;
                } else {
                    fe.cls = FileEdgeClass::unreachable;
                }
            }
        }
    }
    for (const auto& fe : out.file_edges) {
        switch (fe.cls) {
            case FileEdgeClass::direct: ++out.direct; break;
            case FileEdgeClass::transitive: ++out.transitive; break;
            case FileEdgeClass::unreachable: ++out.unreachable; break;
        }
    }
    return out;
}

UtilizationSummary import_utilization(const DepGraph& modules, const DepGraph& declarations,
                                      std::span<const std::optional<NodeId>> decl_module) {
    if (decl_module.size() != declarations.node_count()) {
        throw std::invalid_argument("import_utilization: module map must cover every declaration id");
    }
    const std::size_t n = modules.node_count();
    std::vector<std::vector<NodeId>> members(n);
    for (NodeId d = 0; d < declarations.node_count(); ++d) {
        if (decl_module[d]) members[*decl_module[d]].push_back(d);
    }

    UtilizationSummary out;
    std::vector<EdgeUtilization> util(modules.edge_count());
    std::vector<std::uint8_t> included(modules.edge_count(), 0);
#pragma omp parallel
    {
        // counts[m]: distinct declarations of module m referenced by the current importer.
        std::vector<std::size_t> counts(n, 0);
        std::vector<std::uint32_t> seen(declarations.node_count(), 0);
        std::vector<NodeId> touched;
#pragma omp for schedule(dynamic, 16)
        for (std::size_t mi = 0; mi < n; ++mi) {
            const auto importer = static_cast<NodeId>(mi);
            if (modules.out_degree(importer) == 0) continue;
            const auto mark = static_cast<std::uint32_t>(mi + 1);
            touched.clear();
            for (auto d : members[importer]) {
                for (auto p : declarations.successors(d)) {
                    if (seen[p] == mark) continue;
                    seen[p] = mark;
                    if (const auto pm = decl_module[p]) {
                        if (counts[*pm]++ == 0) touched.push_back(*pm);
                    }
                }
            }
            const auto succ = modules.successors(importer);
            const EdgeId first = modules.out_edge_begin(importer);
            for (std::size_t j = 0; j < succ.size(); ++j) {
                const auto defined = members[succ[j]].size();
                if (defined == 0) continue;
                auto& u = util[first + j];
                u.edge = first + static_cast<EdgeId>(j);
                u.referenced = counts[succ[j]];
                u.defined = defined;
                u.util = static_cast<double>(u.referenced) / static_cast<double>(defined);
                included[first + j] = 1;
            }
            for (auto m : touched) counts[m] = 0;
        }
    }
    std::vector<double> values;
    for (EdgeId e = 0; e < modules.edge_count(); ++e) {
        if (!included[e]) {
            ++out.excluded_edges;
            continue;
        }
        out.per_edge.push_back(util[e]);
        values.push_back(util[e].util);
        if (util[e].referenced == 0) ++out.zero_count;
    }
    std::sort(values.begin(), values.end());
    const auto s = summarize(values);
    out.median = s.median;
    out.mean = s.mean;
    out.q1 = quantile_sorted(values, 0.25);
    out.q3 = quantile_sorted(values, 0.75);
    return out;
}

}  // namespace deplens
