#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "deplens/centrality.hpp"
#include "deplens/graph.hpp"
#include "deplens/robustness.hpp"

/// Single-threaded reference implementations of the parallel kernels. They
/// share no code with the kernels they check and favor directness over speed.
namespace deplens::serial {

/// For each edge (u,v), searches from u's other successors for v.
[[nodiscard]] std::vector<EdgeId> redundant_edges(const DepGraph& g);

/// Push-style power iteration.
[[nodiscard]] PageRankResult pagerank(const DepGraph& g, const PageRankOptions& options = {});

/// Brandes passes summed in source order.
[[nodiscard]] std::vector<double> betweenness(const DepGraph& g, const BetweennessOptions& options = {});

/// Recomputes the GCC from scratch at every fraction.
[[nodiscard]] RemovalCurve removal_curve(const DepGraph& g, const RemovalStrategy& strategy,
                                         std::span<const double> fractions, std::size_t trials, std::uint64_t seed);

}  // namespace deplens::serial
