#include "deplens/structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "deplens/detail/union_find.hpp"

namespace deplens {

namespace {

std::string describe_cycle(const std::vector<NodeId>& witness) {
    std::string s = "cycle detected:";
    for (auto v : witness) s += " " + std::to_string(v);
    return s;
}

// Iterative Tarjan; component ids come out in reverse topological order.
std::vector<GroupId> tarjan_scc(const DepGraph& g) {
    const std::size_t n = g.node_count();
    constexpr std::uint32_t kUnvisited = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
    std::vector<GroupId> comp(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeId> stack;
    struct Frame {
        NodeId v;
        std::size_t next;
    };
    std::vector<Frame> call;
    std::uint32_t counter = 0;
    GroupId comp_count = 0;

    for (NodeId root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& frame = call.back();
            const auto succ = g.successors(frame.v);
            if (frame.next < succ.size()) {
                const NodeId w = succ[frame.next++];
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[frame.v] = std::min(low[frame.v], index[w]);
                }
                continue;
            }
            const NodeId v = frame.v;
            call.pop_back();
            if (!call.empty()) {
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
            if (low[v] == index[v]) {
                NodeId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = comp_count;
                } while (w != v);
                ++comp_count;
            }
        }
    }
    return comp;
}

}  // namespace

CycleError::CycleError(std::vector<NodeId> witness)
    : std::runtime_error(describe_cycle(witness)), witness_(std::move(witness)) {}

Partition connected_components(const DepGraph& g, Connectivity mode) {
    const std::size_t n = g.node_count();
    if (mode == Connectivity::strong) {
        const auto comp = tarjan_scc(g);
        return Partition::by_size(comp);
    }
    detail::UnionFind uf(n);
    for (const auto& e : g.edges()) uf.unite(e.src, e.dst);
    std::vector<GroupId> roots(n);
    for (NodeId v = 0; v < n; ++v) roots[v] = uf.find(v);
    return Partition::by_size(roots);
}

Condensation condense(const DepGraph& g) {
    auto component = connected_components(g, Connectivity::strong);
    const std::size_t k = component.group_count();

    std::vector<NodeId> representative(k, kNoNode);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        auto& r = representative[component[v]];
        if (r == kNoNode) r = v;
    }
    std::vector<NodeRecord> nodes(k);
    for (std::size_t c = 0; c < k; ++c) {
        const auto& rep = g.node(representative[c]);
        nodes[c].name = rep.name;
        nodes[c].kind = rep.kind;
    }

    std::unordered_map<std::uint64_t, std::size_t> slot;
    std::vector<EdgeRecord> edges;
    for (const auto& e : g.edges()) {
        const auto a = component[e.src];
        const auto b = component[e.dst];
        if (a == b) continue;
        const auto key = (static_cast<std::uint64_t>(a) << 32) | b;
        auto [it, inserted] = slot.emplace(key, edges.size());
        if (inserted) {
            EdgeRecord rec;
            rec.src = a;
            rec.dst = b;
            rec.weight = e.weight;
            edges.push_back(rec);
        } else {
            edges[it->second].weight += e.weight;
        }
    }
    return {build_graph(std::move(nodes), std::move(edges)), std::move(component)};
}

std::vector<NodeId> topological_order(const DepGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> indeg(n);
    for (NodeId v = 0; v < n; ++v) indeg[v] = g.in_degree(v);
    std::vector<NodeId> order;
    order.reserve(n);
    for (NodeId v = 0; v < n; ++v) {
        if (indeg[v] == 0) order.push_back(v);
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (auto w : g.successors(order[head])) {
            if (--indeg[w] == 0) order.push_back(w);
        }
    }
    if (order.size() == n) return order;

    // Every leftover node keeps a leftover predecessor; walk backwards until a repeat.
    NodeId start = 0;
    while (indeg[start] == 0) ++start;
    std::vector<std::size_t> seen_at(n, static_cast<std::size_t>(-1));
    std::vector<NodeId> walk;
    NodeId v = start;
    while (seen_at[v] == static_cast<std::size_t>(-1)) {
        seen_at[v] = walk.size();
        walk.push_back(v);
        for (auto u : g.predecessors(v)) {
            if (indeg[u] != 0) {
                v = u;
                break;
            }
        }
    }
    std::vector<NodeId> cycle(walk.begin() + static_cast<std::ptrdiff_t>(seen_at[v]), walk.end());
    std::reverse(cycle.begin(), cycle.end());
    throw CycleError(std::move(cycle));
}

std::vector<std::uint32_t> topological_levels(const DepGraph& g, LevelOrigin origin) {
    const auto order = topological_order(g);
    std::vector<std::uint32_t> level(g.node_count(), 0);
    if (origin == LevelOrigin::sources) {
        for (auto v : order) {
            for (auto w : g.successors(v)) level[w] = std::max(level[w], level[v] + 1);
        }
    } else {
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            for (auto u : g.predecessors(*it)) level[u] = std::max(level[u], level[*it] + 1);
        }
    }
    return level;
}

DagProfile dag_depth_and_widths(const DepGraph& g, LevelOrigin origin) {
    DagProfile profile;
    if (g.node_count() == 0) return profile;
    const auto level = topological_levels(g, origin);
    profile.depth = *std::max_element(level.begin(), level.end());
    profile.widths.assign(profile.depth + 1, 0);
    for (auto l : level) ++profile.widths[l];
    return profile;
}

std::vector<std::size_t> degrees(const DepGraph& g, Direction direction) {
    std::vector<std::size_t> d(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        d[v] = direction == Direction::in ? g.in_degree(v) : g.out_degree(v);
    }
    return d;
}

DegreeStats degree_stats(const DepGraph& g, Direction direction) {
    DegreeStats s;
    const auto d = degrees(g, direction);
    if (d.empty()) return s;
    for (auto x : d) {
        ++s.histogram[x];
        if (x == 0) ++s.zero_count;
    }
    // Histogram walk gives mean, lower median and std without sorting.
    const double n = static_cast<double>(d.size());
    double sum = 0.0;
    for (const auto& [deg, count] : s.histogram) sum += static_cast<double>(deg) * static_cast<double>(count);
    s.mean = sum / n;
    double ss = 0.0;
    for (const auto& [deg, count] : s.histogram) {
        const double diff = static_cast<double>(deg) - s.mean;
        ss += diff * diff * static_cast<double>(count);
    }
    s.std_dev = std::sqrt(ss / n);
    const std::size_t median_rank = (d.size() - 1) / 2;
    std::size_t seen = 0;
    for (const auto& [deg, count] : s.histogram) {
        seen += count;
        if (seen > median_rank) {
            s.median = static_cast<double>(deg);
            break;
        }
    }
    s.max = s.histogram.rbegin()->first;
    return s;
}

}  // namespace deplens
