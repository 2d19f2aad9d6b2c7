#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "deplens/graph.hpp"

namespace deplens {

struct ReductionResult {
    DepGraph reduced;
    std::vector<EdgeId> removed;  // ids in the original graph, ascending
    double redundancy_rate = 0.0;
};

/// Edges (u,v) for which v is reachable from u by a path of length >= 2.
/// Throws CycleError on cyclic input.
[[nodiscard]] std::vector<EdgeId> redundant_edges(const DepGraph& g);

/// Unique minimal subgraph with the same reachability relation.
[[nodiscard]] ReductionResult transitive_reduction(const DepGraph& g);

struct CriticalPath {
    std::vector<NodeId> path;       // source-to-sink, maximal node-weight sum
    double total_weight = 0.0;      // W(path)
    double sequential_weight = 0.0; // sum of all node weights
    double weighted_speedup = 0.0;  // sequential_weight / total_weight
    double parallelism_ratio = 0.0; // |V| / path length in nodes
};

/// Maximum node-weight path over source-to-sink paths; ties go to the
/// lexicographically smallest id sequence. Throws CycleError.
[[nodiscard]] CriticalPath critical_path(const DepGraph& g, std::span<const double> weights);

struct ModuleContainment {
    double ratio = 0.0;
    std::size_t group_count = 0;
    std::size_t same_group_edges = 0;
    std::size_t edges = 0;
};

/// Fraction of edges whose endpoints share their first `k` name components.
[[nodiscard]] ModuleContainment module_containment(const DepGraph& g, std::size_t k);

/// Module node (in `modules`) of each declaration, by the declaration's `module` field.
[[nodiscard]] std::vector<std::optional<NodeId>> map_declarations_to_modules(const DepGraph& declarations,
                                                                             const DepGraph& modules);

enum class ImportUse { active, unused };
enum class FileEdgeClass { direct, transitive, unreachable };

struct FileEdge {
    NodeId src_module = 0;
    NodeId dst_module = 0;
    std::size_t weight = 0;  // declaration edges aggregated into this pair
    FileEdgeClass cls = FileEdgeClass::direct;
};

struct ImportClassification {
    std::vector<ImportUse> import_use;  // aligned with the module graph's edge ids
    std::size_t active = 0;
    std::size_t unused = 0;
    std::vector<FileEdge> file_edges;  // sorted by (src, dst)
    std::size_t direct = 0;
    std::size_t transitive = 0;
    std::size_t unreachable = 0;
    std::size_t uncovered_edges = 0;    // declaration edges with an unmapped endpoint
    std::size_t intra_module_edges = 0; // declaration edges inside one module
};

[[nodiscard]] ImportClassification classify_import_edges(const DepGraph& modules, const DepGraph& declarations,
                                                         std::span<const std::optional<NodeId>> decl_module);

struct EdgeUtilization {
    EdgeId edge = 0;
    std::size_t referenced = 0;  // |refs(importer) ∩ D(imported)|
    std::size_t defined = 0;     // |D(imported)|
    double util = 0.0;
};

struct UtilizationSummary {
    std::vector<EdgeUtilization> per_edge;  // ascending edge id
    std::size_t excluded_edges = 0;         // imports of declaration-free modules
    double median = 0.0;                    // lower median
    double mean = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    std::size_t zero_count = 0;
};

[[nodiscard]] UtilizationSummary import_utilization(const DepGraph& modules, const DepGraph& declarations,
                                                    std::span<const std::optional<NodeId>> decl_module);

}  // namespace deplens
