#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "deplens/graph.hpp"

namespace deplens {

class CycleError : public std::runtime_error {
public:
    explicit CycleError(std::vector<NodeId> witness);
    /// Node sequence v0 -> v1 -> ... -> v0 (the closing node is not repeated).
    [[nodiscard]] const std::vector<NodeId>& witness() const noexcept { return witness_; }

private:
    std::vector<NodeId> witness_;
};

enum class Connectivity { weak, strong };

/// Component ids are ordered by size descending, ties by smallest member id.
[[nodiscard]] Partition connected_components(const DepGraph& g, Connectivity mode);

struct Condensation {
    DepGraph dag;         // one node per SCC; node name/kind taken from the smallest member
    Partition component;  // original node -> super-node id
};

/// Collapses every SCC into one super-node. Super-edge weights sum the
/// crossing edges' weights.
[[nodiscard]] Condensation condense(const DepGraph& g);

/// Which end of each edge sits at level 0.
enum class LevelOrigin {
    sources,   // in-degree-0 nodes (top-level importers) at 0; level(v) = 1 + max over predecessors
    premises,  // out-degree-0 nodes (foundations) at 0; level(v) = 1 + max over successors
};

/// Longest-path layering of an acyclic graph. Throws CycleError otherwise.
[[nodiscard]] std::vector<std::uint32_t> topological_levels(const DepGraph& g,
                                                            LevelOrigin origin = LevelOrigin::sources);

/// Topological order (every edge u->v has u before v). Throws CycleError.
[[nodiscard]] std::vector<NodeId> topological_order(const DepGraph& g);

struct DagProfile {
    std::uint32_t depth = 0;
    std::vector<std::size_t> widths;  // widths[i] = nodes at level i
};

[[nodiscard]] DagProfile dag_depth_and_widths(const DepGraph& g, LevelOrigin origin = LevelOrigin::sources);

enum class Direction { in, out };

struct DegreeStats {
    double mean = 0.0;
    double median = 0.0;  // lower median
    double std_dev = 0.0;  // population
    std::size_t max = 0;
    std::size_t zero_count = 0;
    std::map<std::size_t, std::size_t> histogram;  // degree -> node count
};

[[nodiscard]] DegreeStats degree_stats(const DepGraph& g, Direction direction);

[[nodiscard]] std::vector<std::size_t> degrees(const DepGraph& g, Direction direction);

}  // namespace deplens
