#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deplens/graph.hpp"

namespace deplens {

struct PageRankOptions {
    double damping = 0.85;
    double tolerance = 1e-10;  // on the L1 change between iterates
    std::size_t max_iterations = 200;
};

struct PageRankResult {
    std::vector<double> scores;  // sums to 1
    std::size_t iterations = 0;
    bool converged = false;  // false: `scores` is the last iterate
};

/// Random-surfer rank following stored edge direction, so cited nodes gain
/// rank. Dangling mass is spread uniformly. Throws on an empty graph.
[[nodiscard]] PageRankResult pagerank(const DepGraph& g, const PageRankOptions& options = {});

struct BetweennessOptions {
    std::optional<std::size_t> pivots;  // nullopt: every node is a source
    std::uint64_t seed = 0;             // used only with pivots
    bool normalized = true;             // divide by (N-1)(N-2)
};

/// Directed, unit-length Brandes betweenness. With k pivots, sources are a
/// seeded sample without replacement and totals are scaled by N/k. The result
/// does not depend on the thread count.
[[nodiscard]] std::vector<double> betweenness(const DepGraph& g, const BetweennessOptions& options = {});

/// Pivot sources actually used for (n, k, seed), in processing order.
[[nodiscard]] std::vector<NodeId> betweenness_pivots(std::size_t n, std::size_t k, std::uint64_t seed);

struct RankedNode {
    NodeId node = 0;
    std::string name;
    double score = 0.0;
};

/// Highest scores first, ties by name; k larger than the graph returns all nodes.
[[nodiscard]] std::vector<RankedNode> top_k(const DepGraph& g, std::span<const double> scores, std::size_t k);

struct LabelStats {
    std::string label;
    std::size_t count = 0;
    double mean_in_degree = 0.0;
    double zero_citation_rate = 0.0;
    double mean_pagerank = 0.0;
};

struct LabelRatio {
    std::string numerator;
    std::string denominator;
    double mean_in_degree = 0.0;
    double zero_citation_rate = 0.0;
    double mean_pagerank = 0.0;
};

struct GroupComparison {
    std::vector<LabelStats> rows;  // ascending label
    std::optional<LabelRatio> ratio;
};

/// Compares nodes by their `marker` label; unlabeled nodes are skipped. The
/// ratio row divides the first by the second entry of `ratio_labels` when
/// both are present. Throws when no node is labeled.
[[nodiscard]] GroupComparison group_compare(const DepGraph& g, std::span<const double> pagerank_scores,
                                            std::span<const std::string> ratio_labels = {});

}  // namespace deplens
