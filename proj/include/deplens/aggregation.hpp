#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deplens/graph.hpp"

namespace deplens {

/// Key given to dotless names, which have no enclosing namespace.
inline constexpr std::string_view kRootNamespace = "_root_";

struct NamespaceKey {
    std::string name;
    bool root = false;

    friend bool operator==(const NamespaceKey&, const NamespaceKey&) = default;
};

/// >= k+1 components: first k. 2..k components: the parent. 1 component: root.
[[nodiscard]] NamespaceKey truncate_namespace(const DottedName& name, std::size_t k);

/// Groups nodes by truncate_namespace(name, k). Group names are sorted.
[[nodiscard]] Grouping namespace_grouping(const DepGraph& g, std::size_t k);
/// Groups declarations by their `module` field; nodes without one are unmapped.
[[nodiscard]] Grouping module_grouping(const DepGraph& g);
/// Groups nodes by the first k components of their own name.
[[nodiscard]] Grouping prefix_grouping(const DepGraph& g, std::size_t k);
/// Groups declarations by a module-graph node id (see map_declarations_to_modules).
[[nodiscard]] Grouping grouping_from_modules(std::span<const std::optional<NodeId>> decl_module, const DepGraph& modules);

/// Group-level graph; edge weight counts the member edges it aggregates.
struct AggregatedGraph {
    DepGraph graph;                  // node v <-> grouping group v; no self-edges
    std::vector<std::size_t> internal;  // per group: member edges inside it
    std::size_t internal_total = 0;
    std::size_t cross_total = 0;        // sum of edge weights
    std::size_t unmapped_edges = 0;     // edges with an ungrouped endpoint
};

/// Node names of the result are the group names; `kind` is applied to every node.
[[nodiscard]] AggregatedGraph aggregate(const DepGraph& g, const Grouping& grouping, NodeKind kind);
[[nodiscard]] AggregatedGraph build_ns_graph(const DepGraph& declarations, std::size_t k);
[[nodiscard]] AggregatedGraph aggregate_to_files(const DepGraph& declarations, const Grouping& modules);

enum class Denominator { all, covered };

struct ContainmentRatio {
    double ratio = 0.0;
    std::size_t same = 0;
    std::size_t denominator = 0;
};

/// Fraction of edges whose endpoints share a group. `covered` counts only
/// edges with both endpoints grouped.
[[nodiscard]] ContainmentRatio containment_ratio(const DepGraph& g, const Grouping& grouping,
                                                 Denominator denominator = Denominator::all);

struct ModuleCohesion {
    GroupId group = 0;
    std::size_t internal = 0;
    std::size_t external = 0;  // exactly one endpoint inside
    double cohesion = 0.0;
};

struct CohesionTable {
    std::vector<ModuleCohesion> modules;  // ascending group id
    double mean = 0.0;
    double median = 0.0;  // lower median
    double std_dev = 0.0;
    double max = 0.0;
    std::size_t zero_count = 0;
};

[[nodiscard]] CohesionTable module_cohesion(const DepGraph& declarations, const Grouping& modules);

struct EdgeBreakdown {
    std::size_t same_module = 0;
    std::size_t same_namespace = 0;  // cross-module
    std::size_t cross_namespace = 0;
    std::size_t missing = 0;         // some endpoint without a module or namespace

    [[nodiscard]] std::size_t total() const noexcept {
        return same_module + same_namespace + cross_namespace + missing;
    }
};

[[nodiscard]] EdgeBreakdown edge_boundary_breakdown(const DepGraph& declarations, const Grouping& modules,
                                                    const Grouping& namespaces);

struct DepthAsymmetry {
    std::size_t edges = 0;
    double same = 0.0;            // fractions of `edges`
    double source_deeper = 0.0;
    double target_deeper = 0.0;
    double mean_diff = 0.0;       // mean of depth(src) - depth(dst)
};

/// Module names: depth = component count.
[[nodiscard]] std::vector<int> module_depths(const DepGraph& modules);
/// Declaration names: depth = component count - 1 (the namespace depth).
[[nodiscard]] std::vector<int> declaration_depths(const DepGraph& declarations);

[[nodiscard]] DepthAsymmetry depth_asymmetry(const DepGraph& g, std::span<const int> depth);

struct ModuleDepthDifference {
    NodeId module = 0;
    double import_depth = 0.0;  // mean depth of direct imports
    double use_depth = 0.0;     // mean depth of distinct other modules cited by its declarations
    double delta = 0.0;         // use_depth - import_depth
};

struct DirectoryDepthDifference {
    std::string directory;
    std::size_t modules = 0;
    double import_depth = 0.0;
    double use_depth = 0.0;
    double mean_delta = 0.0;
    double median_delta = 0.0;  // lower median
};

struct DepthDifferenceReport {
    std::vector<ModuleDepthDifference> modules;  // only modules where both means exist
    double mean_delta = 0.0;
    double median_delta = 0.0;
    double std_delta = 0.0;
    double negative = 0.0;  // fraction with delta < 0
    double positive = 0.0;
    double zero = 0.0;
    std::vector<DirectoryDepthDifference> directories;  // ascending mean_delta, ties by name
};

/// Compares, per module, the depth of what it imports against the depth of
/// what its declarations cite. Directories are name prefixes of length
/// `directory_depth`; directories with fewer than `min_modules` are dropped.
[[nodiscard]] DepthDifferenceReport module_depth_difference(const DepGraph& modules, const DepGraph& declarations,
                                                            std::span<const std::optional<NodeId>> decl_module,
                                                            std::size_t directory_depth = 2,
                                                            std::size_t min_modules = 1);

struct GroupPair {
    std::string a;  // a < b
    std::string b;
    double weight = 0.0;  // w(a->b) + w(b->a)
};

/// Unordered pairs ranked by summed weight descending, ties by (a, b).
[[nodiscard]] std::vector<GroupPair> cross_group_pairs(const DepGraph& weighted, std::size_t top_k);

struct ZeroCitationRow {
    std::string group;
    std::size_t total = 0;
    std::size_t zero = 0;
    double rate = 0.0;
};

struct ZeroCitationReport {
    ZeroCitationRow overall;                // over every filtered node, grouped or not
    std::vector<ZeroCitationRow> groups;    // rate descending, ties by name
};

/// Share of nodes with in-degree 0 per group among nodes whose kind is in
/// `kinds` (empty = all kinds). Groups with fewer than `min_group` such nodes
/// are omitted.
[[nodiscard]] ZeroCitationReport zero_citation_by_group(const DepGraph& g, const Grouping& grouping,
                                                        std::span<const NodeKind> kinds, std::size_t min_group = 1);

}  // namespace deplens
