#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "deplens/graph.hpp"

namespace deplens {

struct AxisCounts {
    std::map<std::string, std::size_t> counts;  // known classes only
    std::size_t unknown = 0;

    [[nodiscard]] std::size_t known() const;
    /// count / known(); 0 when nothing is known.
    [[nodiscard]] double fraction(const std::string& cls) const;
};

struct EdgePartitionStats {
    AxisCounts origin;     // statement, proof, both
    AxisCounts synthesis;  // explicit, synthesized
    AxisCounts derivation; // human, auto
    double synthesis_ratio = 0.0;  // synthesized / known
    double auto_fraction = 0.0;    // auto / known
};

[[nodiscard]] EdgePartitionStats edge_partition_stats(const DepGraph& g);

using NodePredicate = std::function<bool(const NodeRecord&)>;
using EdgePredicate = std::function<bool(const EdgeRecord&)>;

/// Nodes passing `keep_node`, re-indexed in ascending original id, and the
/// edges passing `keep_edge` whose endpoints both survive.
[[nodiscard]] DepGraph subgraph_by_predicate(const DepGraph& g, const NodePredicate& keep_node,
                                             const EdgePredicate& keep_edge);

/// Edges carrying `tag`.
[[nodiscard]] EdgePredicate edge_has_tag(std::string tag);
/// Nodes whose attribute set contains `attribute`.
[[nodiscard]] NodePredicate node_has_attribute(std::string attribute);

/// Same graph restricted to the endpoints of the edges passing `keep_edge`.
[[nodiscard]] DepGraph edge_induced_subgraph(const DepGraph& g, const EdgePredicate& keep_edge);

/// Longest finite directed shortest-path length (unit lengths).
[[nodiscard]] std::size_t diameter(const DepGraph& g);

struct AttributeCount {
    std::string attribute;
    std::size_t count = 0;
    double share = 0.0;  // of the attribute universe
};

struct AttributeStats {
    std::size_t universe = 0;  // nodes with attribute data
    std::vector<AttributeCount> attributes;  // count descending, ties by name
    std::size_t any_attribute = 0;
    double any_share = 0.0;
    double flattening_ratio = 0.0;  // to_additive count / universe
};

[[nodiscard]] AttributeStats attribute_stats(const std::vector<NodeRecord>& nodes,
                                             const std::string& flattening_attribute = "to_additive");

struct DefHeightStats {
    std::size_t regular = 0;
    std::size_t abbreviation = 0;
    std::size_t opaque = 0;
    double median = 0.0;  // lower median of regular heights
    double mean = 0.0;
    std::uint32_t max = 0;
    std::array<double, 9> deciles{};  // 10th..90th percentile, linear interpolation
};

[[nodiscard]] DefHeightStats def_height_stats(const std::vector<NodeRecord>& nodes);

struct FreqProfile {
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;

    [[nodiscard]] std::map<std::string, double> distribution() const;
    /// Labels by count descending, ties by label.
    [[nodiscard]] std::vector<std::pair<std::string, std::size_t>> ranked() const;
};

/// Jensen-Shannon divergence in bits.
[[nodiscard]] double jensen_shannon(const FreqProfile& p, const FreqProfile& q);

struct TacticStats {
    FreqProfile global;
    std::size_t proofs = 0;  // nodes with a nonempty tactic list
    std::size_t steps = 0;
    double mean_steps = 0.0;
    double median_steps = 0.0;
    std::size_t max_steps = 0;
    std::vector<std::string> groups;          // sorted
    std::vector<FreqProfile> group_profiles;  // aligned with `groups`
    std::vector<std::vector<double>> jsd;     // groups x groups
};

/// Per-group profiles use `grouping`; ungrouped nodes only enter the global profile.
[[nodiscard]] TacticStats tactic_stats(const std::vector<NodeRecord>& nodes, const Grouping& grouping);

/// kind x kind edge counts, indexed by NodeKind value; rows are source kinds.
using KindMatrix = std::array<std::array<std::size_t, kNodeKindCount>, kNodeKindCount>;

[[nodiscard]] KindMatrix inter_kind_flow(const DepGraph& g);

}  // namespace deplens
