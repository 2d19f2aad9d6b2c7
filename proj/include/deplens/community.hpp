#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "deplens/graph.hpp"

namespace deplens {

/// Weighted undirected graph in symmetric CSR form. A self-loop of weight w
/// is kept out of the adjacency and contributes 2w to its node's degree.
struct UndirectedGraph {
    std::vector<std::size_t> offsets{0};
    std::vector<NodeId> neighbors;
    std::vector<double> weights;
    std::vector<double> self_loops;
    double total_weight = 0.0;  // m: every undirected edge and self-loop once

    [[nodiscard]] std::size_t node_count() const noexcept { return offsets.size() - 1; }
    /// Undirected edge count, self-loops included.
    [[nodiscard]] std::size_t edge_count() const noexcept;
    [[nodiscard]] double degree(NodeId v) const;
};

struct UndirectedEdge {
    NodeId u = 0;
    NodeId v = 0;
    double weight = 1.0;
};

/// Merges parallel edges by summing weights.
[[nodiscard]] UndirectedGraph make_undirected(std::size_t node_count, std::span<const UndirectedEdge> edges);

/// w(u,v) = w(u->v) + w(v->u).
[[nodiscard]] UndirectedGraph undirected_projection(const DepGraph& g);

/// Newman modularity with resolution `gamma`. Throws when the graph has no weight.
[[nodiscard]] double modularity(const UndirectedGraph& g, std::span<const GroupId> labels, double gamma = 1.0);

struct LouvainOptions {
    std::uint64_t seed = 0;
    double resolution = 1.0;
    std::size_t max_passes = 100;
    double min_gain = 1e-12;
};

struct CommunityResult {
    Partition partition;  // ids by size descending
    double modularity = 0.0;
    std::size_t passes = 0;
    std::vector<double> pass_modularity;  // after each aggregation pass
    std::uint64_t seed = 0;
    double resolution = 1.0;
};

/// Louvain method with a seeded node visit order. Deterministic per seed.
[[nodiscard]] CommunityResult louvain(const UndirectedGraph& g, const LouvainOptions& options = {});

struct PartitionComparison {
    double entropy_a = 0.0;  // natural log
    double entropy_b = 0.0;
    double mutual_information = 0.0;
    double nmi = 0.0;
    double ari = 0.0;
};

/// Throws std::invalid_argument when the label vectors differ in length.
[[nodiscard]] PartitionComparison compare_partitions(std::span<const GroupId> a, std::span<const GroupId> b);

}  // namespace deplens
