#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "deplens/graph.hpp"

namespace deplens {

/// Weak connectivity of the subgraph induced by V minus the removed nodes.
struct RemovalEffect {
    std::size_t wcc_count = 0;
    std::size_t gcc_size = 0;
    std::size_t disconnected = 0;  // surviving nodes outside the new GCC
};

/// Duplicate ids in `removed` count once.
[[nodiscard]] RemovalEffect remove_and_measure(const DepGraph& g, std::span<const NodeId> removed);

struct NodeImpact {
    NodeId node = 0;
    std::size_t gcc_after = 0;
    /// Nodes of the original GCC, other than `node`, that fall outside the new GCC.
    std::size_t disconnected = 0;
};

[[nodiscard]] std::vector<NodeImpact> single_node_impact(const DepGraph& g, std::span<const NodeId> candidates);

enum class RemovalKind { random, targeted };

struct RemovalStrategy {
    RemovalKind kind = RemovalKind::random;
    std::vector<double> scores;  // targeted: removed highest first, ties by id
};

struct RemovalCurve {
    std::vector<double> fractions;     // removed fraction, ascending
    std::vector<double> gcc_fraction;  // mean GCC size / original |V|
    std::vector<double> gcc_std;       // population std over trials
    RemovalKind kind = RemovalKind::random;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
};

/// Node order removed first-to-last for one trial.
[[nodiscard]] std::vector<NodeId> removal_order(const DepGraph& g, const RemovalStrategy& strategy, std::size_t trial,
                                                std::uint64_t seed);

/// At fraction f, the first round(f * |V|) nodes of the removal order are
/// gone. Targeted strategies run a single trial.
[[nodiscard]] RemovalCurve removal_curve(const DepGraph& g, const RemovalStrategy& strategy,
                                         std::span<const double> fractions, std::size_t trials, std::uint64_t seed);

/// GCC size after removing each prefix length in `removed_counts` (ascending),
/// computed by re-adding nodes in reverse order.
[[nodiscard]] std::vector<std::size_t> gcc_after_prefixes(const DepGraph& g, std::span<const NodeId> order,
                                                          std::span<const std::size_t> removed_counts);

}  // namespace deplens
