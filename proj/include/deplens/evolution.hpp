#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "deplens/graph.hpp"
#include "deplens/ingest.hpp"

namespace deplens {

struct Snapshot {
    std::string label;
    const DepGraph* declarations = nullptr;  // may be null
    const DepGraph* modules = nullptr;       // may be null
};

struct GrowthRow {
    std::string label;
    std::size_t declarations = 0;
    std::size_t modules = 0;
    std::size_t edges = 0;  // declaration edges
    double density = 0.0;   // edges / declarations
};

/// One row per snapshot, in input order. Throws on an empty series or a
/// repeated label.
[[nodiscard]] std::vector<GrowthRow> growth_indicators(const std::vector<Snapshot>& series);

struct HubTurnover {
    double spearman = 0.0;
    std::size_t union_size = 0;
    std::size_t shared_names = 0;
};

/// Spearman correlation of in-degree ranks over the union of both top-k sets.
/// Only names present in both graphs take part; a node outside one graph's
/// top k shares that graph's last rank. Throws when no name is shared or k < 2.
[[nodiscard]] HubTurnover hub_turnover(const DepGraph& a, const DepGraph& b, std::size_t k);

/// NMI of two partitions restricted to the names both graphs share.
[[nodiscard]] double community_persistence(const DepGraph& a, const Partition& pa, const DepGraph& b,
                                           const Partition& pb);

struct ComodEdge {
    std::size_t a = 0;  // indices into ComodGraph::modules, a < b
    std::size_t b = 0;
    std::size_t weight = 0;  // pull requests touching both
};

struct ComodGraph {
    std::vector<std::string> modules;  // sorted
    std::vector<ComodEdge> edges;      // sorted by (a, b)
};

[[nodiscard]] ComodGraph build_comod_graph(const std::vector<PullRequest>& prs);

enum class PairClass { both, comod_only, import_only };
[[nodiscard]] std::string to_string(PairClass cls);

struct ModulePair {
    std::string a;  // a < b
    std::string b;
    PairClass cls = PairClass::both;
    std::size_t comod_weight = 0;
};

struct ComodComparison {
    std::vector<ModulePair> pairs;  // sorted by (a, b)
    std::size_t both = 0;
    std::size_t comod_only = 0;  // hidden dependencies
    std::size_t import_only = 0;
};

/// Undirected comparison of co-modification pairs with import pairs, matched by module name.
[[nodiscard]] ComodComparison comod_vs_imports(const ComodGraph& comod, const DepGraph& modules);

}  // namespace deplens
