#include "deplens/graph.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <tuple>

namespace deplens {

namespace {

constexpr std::array<std::string_view, kNodeKindCount> kKindNames = {
    "theorem", "definition", "abbrev", "constructor", "inductive",
    "opaque",  "quotient",   "axiom",  "module",      "namespace",
};

constexpr std::array<std::string_view, 4> kOriginNames = {"statement", "proof", "both", "unknown"};

}  // namespace

std::string_view to_string(NodeKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<NodeKind> parse_node_kind(std::string_view text) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == text) return static_cast<NodeKind>(i);
    }
    return std::nullopt;
}

std::string_view to_string(Origin origin) { return kOriginNames[static_cast<std::size_t>(origin)]; }

std::optional<Origin> parse_origin(std::string_view text) {
    for (std::size_t i = 0; i < kOriginNames.size(); ++i) {
        if (kOriginNames[i] == text) return static_cast<Origin>(i);
    }
    return std::nullopt;
}

DepGraph build_graph(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges, BuildOptions options) {
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i].id = static_cast<NodeId>(i);
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (e.src >= n || e.dst >= n) {
            throw GraphError(GraphError::Code::dangling_endpoint, i,
                             "edge " + std::to_string(i) + " (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                                 ") refers to an undeclared node");
        }
        if (e.src == e.dst && !options.allow_self_edges) {
            throw GraphError(GraphError::Code::self_edge, i, "edge " + std::to_string(i) + " is a self-edge");
        }
        if (!(e.weight >= 0.0)) {
            throw GraphError(GraphError::Code::negative_weight, i, "edge " + std::to_string(i) + " has negative weight");
        }
    }

    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(edges[a].src, edges[a].dst) < std::tie(edges[b].src, edges[b].dst);
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
        const auto& prev = edges[order[i - 1]];
        const auto& cur = edges[order[i]];
        if (prev.src == cur.src && prev.dst == cur.dst) {
            const auto idx = std::max(order[i - 1], order[i]);
            throw GraphError(GraphError::Code::duplicate_edge, idx,
                             "edge " + std::to_string(idx) + " duplicates (" + std::to_string(cur.src) + "," +
                                 std::to_string(cur.dst) + ")");
        }
    }

    DepGraph g;
    g.edges_.reserve(edges.size());
    for (auto idx : order) g.edges_.push_back(std::move(edges[idx]));
    g.nodes_ = std::move(nodes);

    const std::size_t m = g.edges_.size();
    g.out_offsets_.assign(n + 1, 0);
    g.in_offsets_.assign(n + 1, 0);
    g.out_targets_.resize(m);
    for (std::size_t e = 0; e < m; ++e) {
        ++g.out_offsets_[g.edges_[e].src + 1];
        ++g.in_offsets_[g.edges_[e].dst + 1];
        g.out_targets_[e] = g.edges_[e].dst;
    }
    for (std::size_t v = 0; v < n; ++v) {
        g.out_offsets_[v + 1] += g.out_offsets_[v];
        g.in_offsets_[v + 1] += g.in_offsets_[v];
    }
    g.in_sources_.resize(m);
    g.in_edge_ids_.resize(m);
    std::vector<std::size_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    // Edges are visited in (src, dst) order, so each in-list comes out sorted by source.
    for (std::size_t e = 0; e < m; ++e) {
        const auto slot = cursor[g.edges_[e].dst]++;
        g.in_sources_[slot] = g.edges_[e].src;
        g.in_edge_ids_[slot] = static_cast<EdgeId>(e);
    }
    return g;
}

std::optional<EdgeId> DepGraph::find_edge(NodeId src, NodeId dst) const {
    if (src >= node_count()) return std::nullopt;
    const auto succ = successors(src);
    const auto it = std::lower_bound(succ.begin(), succ.end(), dst);
    if (it == succ.end() || *it != dst) return std::nullopt;
    return static_cast<EdgeId>(out_offsets_[src] + static_cast<std::size_t>(it - succ.begin()));
}

bool DepGraph::has_edge(NodeId src, NodeId dst) const { return find_edge(src, dst).has_value(); }

std::optional<NodeId> DepGraph::find(std::string_view name) const {
    if (!name_index_built_) {
        name_index_.reserve(nodes_.size());
        for (const auto& node : nodes_) name_index_.emplace(node.name.str(), node.id);
        name_index_built_ = true;
    }
    const auto it = name_index_.find(std::string(name));
    if (it == name_index_.end()) return std::nullopt;
    return it->second;
}

Partition::Partition(std::vector<GroupId> labels) : labels_(std::move(labels)) {
    GroupId max_label = 0;
    for (auto l : labels_) max_label = std::max(max_label, l);
    sizes_.assign(labels_.empty() ? 0 : static_cast<std::size_t>(max_label) + 1, 0);
    for (auto l : labels_) ++sizes_[l];
    nonempty_groups_ = static_cast<std::size_t>(std::count_if(sizes_.begin(), sizes_.end(), [](auto s) { return s > 0; }));
}

Partition Partition::canonical(std::span<const GroupId> labels) {
    std::unordered_map<GroupId, GroupId> remap;
    std::vector<GroupId> out;
    out.reserve(labels.size());
    for (auto l : labels) {
        auto [it, inserted] = remap.emplace(l, static_cast<GroupId>(remap.size()));
        out.push_back(it->second);
    }
    return Partition(std::move(out));
}

Partition Partition::by_size(std::span<const GroupId> labels) {
    const auto first = canonical(labels);
    const auto& sizes = first.sizes();
    // In canonical order group g's smallest member precedes group g+1's.
    std::vector<GroupId> order(sizes.size());
    std::iota(order.begin(), order.end(), GroupId{0});
    std::stable_sort(order.begin(), order.end(), [&](GroupId a, GroupId b) { return sizes[a] > sizes[b]; });
    std::vector<GroupId> rank(sizes.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<GroupId>(i);
    std::vector<GroupId> out(labels.size());
    for (std::size_t v = 0; v < labels.size(); ++v) out[v] = rank[first[static_cast<NodeId>(v)]];
    return Partition(std::move(out));
}

std::size_t Grouping::covered_count() const {
    return static_cast<std::size_t>(std::count_if(group_of.begin(), group_of.end(), [](const auto& g) { return g.has_value(); }));
}

}  // namespace deplens
