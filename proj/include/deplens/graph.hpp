#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "deplens/dotted_name.hpp"

namespace deplens {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using GroupId = std::uint32_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

enum class NodeKind : std::uint8_t {
    theorem,
    definition,
    abbrev,
    constructor,
    inductive,
    opaque,
    quotient,
    axiom,
    module,
    namespace_,
};
inline constexpr std::size_t kNodeKindCount = 10;

[[nodiscard]] std::string_view to_string(NodeKind kind);
/// Returns std::nullopt for strings outside the fixed enumeration.
[[nodiscard]] std::optional<NodeKind> parse_node_kind(std::string_view text);

struct DefHeight {
    enum class Kind : std::uint8_t { regular, abbreviation, opaque };
    Kind kind = Kind::regular;
    std::uint32_t value = 0;  // meaningful for `regular` only, <= kMaxRegular

    static constexpr std::uint32_t kMaxRegular = 10'000;
    friend bool operator==(const DefHeight&, const DefHeight&) = default;
};

struct NodeRecord {
    NodeId id = 0;
    DottedName name;
    NodeKind kind = NodeKind::definition;
    std::optional<DottedName> module;
    /// Absent when the dataset carries no attribute data for this node.
    std::optional<std::vector<std::string>> attributes;
    std::optional<DefHeight> def_height;
    std::optional<std::vector<std::string>> tactics;
    std::optional<std::string> marker;
};

enum class Origin : std::uint8_t { statement, proof, both, unknown };
enum class Flag : std::uint8_t { no, yes, unknown };
enum class Visibility : std::uint8_t { public_, private_ };

[[nodiscard]] std::string_view to_string(Origin origin);
[[nodiscard]] std::optional<Origin> parse_origin(std::string_view text);

struct EdgeRecord {
    NodeId src = 0;
    NodeId dst = 0;
    Origin origin = Origin::unknown;
    Flag synthesized = Flag::unknown;
    Flag auto_derived = Flag::unknown;
    std::optional<Visibility> visibility;
    double weight = 1.0;
    /// Free-form mechanism tags (e.g. "extends", "coe", "instance").
    std::vector<std::string> tags;
};

class GraphError : public std::runtime_error {
public:
    enum class Code { dangling_endpoint, duplicate_edge, self_edge, negative_weight };
    GraphError(Code code, std::size_t edge_index, const std::string& what)
        : std::runtime_error(what), code_(code), edge_index_(edge_index) {}
    [[nodiscard]] Code code() const noexcept { return code_; }
    [[nodiscard]] std::size_t edge_index() const noexcept { return edge_index_; }

private:
    Code code_;
    std::size_t edge_index_;
};

struct BuildOptions {
    bool allow_self_edges = false;
};

/// Immutable directed graph with CSR adjacency in both directions.
///
/// Edges are stored citer -> cited and sorted by (src, dst); the out-adjacency
/// of node v is `edges()[out_offsets[v] .. out_offsets[v+1])`. The in-adjacency
/// stores edge ids so attributes stay shared.
class DepGraph {
public:
    DepGraph() : out_offsets_{0}, in_offsets_{0} {}

    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }

    [[nodiscard]] const NodeRecord& node(NodeId v) const { return nodes_[v]; }
    [[nodiscard]] const std::vector<NodeRecord>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<EdgeRecord>& edges() const noexcept { return edges_; }
    [[nodiscard]] const EdgeRecord& edge(EdgeId e) const { return edges_[e]; }

    [[nodiscard]] std::span<const NodeId> successors(NodeId v) const {
        return {out_targets_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
    }
    [[nodiscard]] std::span<const NodeId> predecessors(NodeId v) const {
        return {in_sources_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
    }
    /// Edge ids of v's outgoing edges, aligned with successors(v).
    [[nodiscard]] EdgeId out_edge_begin(NodeId v) const { return static_cast<EdgeId>(out_offsets_[v]); }
    /// Edge ids of v's incoming edges, aligned with predecessors(v).
    [[nodiscard]] std::span<const EdgeId> in_edges(NodeId v) const {
        return {in_edge_ids_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
    }

    [[nodiscard]] std::size_t out_degree(NodeId v) const { return out_offsets_[v + 1] - out_offsets_[v]; }
    [[nodiscard]] std::size_t in_degree(NodeId v) const { return in_offsets_[v + 1] - in_offsets_[v]; }

    [[nodiscard]] bool has_edge(NodeId src, NodeId dst) const;
    [[nodiscard]] std::optional<EdgeId> find_edge(NodeId src, NodeId dst) const;

    /// Lookup by surface-form name; the index is built on first use.
    [[nodiscard]] std::optional<NodeId> find(std::string_view name) const;
    [[nodiscard]] std::string name(NodeId v) const { return nodes_[v].name.str(); }

    friend DepGraph build_graph(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges, BuildOptions options);

private:
    std::vector<NodeRecord> nodes_;
    std::vector<EdgeRecord> edges_;
    std::vector<std::size_t> out_offsets_;
    std::vector<NodeId> out_targets_;
    std::vector<std::size_t> in_offsets_;
    std::vector<NodeId> in_sources_;
    std::vector<EdgeId> in_edge_ids_;
    mutable std::unordered_map<std::string, NodeId> name_index_;
    mutable bool name_index_built_ = false;
};

/// Builds an immutable graph. Node ids are reassigned to positions in `nodes`.
/// Throws GraphError naming the offending input edge index.
[[nodiscard]] DepGraph build_graph(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges,
                                   BuildOptions options = {});

/// Total map node -> group with a group-size index.
class Partition {
public:
    Partition() = default;
    /// `labels[v]` is v's group; group ids need not be dense but sizes are
    /// indexed up to the largest label.
    explicit Partition(std::vector<GroupId> labels);

    /// Relabels groups densely in order of first appearance.
    static Partition canonical(std::span<const GroupId> labels);
    /// Relabels groups by size descending, ties by smallest member id.
    static Partition by_size(std::span<const GroupId> labels);

    [[nodiscard]] std::size_t node_count() const noexcept { return labels_.size(); }
    [[nodiscard]] std::size_t group_count() const noexcept { return nonempty_groups_; }
    [[nodiscard]] GroupId operator[](NodeId v) const { return labels_[v]; }
    [[nodiscard]] const std::vector<GroupId>& labels() const noexcept { return labels_; }
    /// sizes()[g] = member count of group g (zero for unused ids).
    [[nodiscard]] const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }

private:
    std::vector<GroupId> labels_;
    std::vector<std::size_t> sizes_;
    std::size_t nonempty_groups_ = 0;
};

/// Partial map node -> named group (module of a declaration, namespace, ...).
struct Grouping {
    std::vector<std::optional<GroupId>> group_of;
    std::vector<std::string> names;

    [[nodiscard]] std::size_t group_count() const noexcept { return names.size(); }
    [[nodiscard]] std::size_t covered_count() const;
};

}  // namespace deplens
