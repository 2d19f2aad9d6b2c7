#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "deplens/graph.hpp"

namespace deplens {

/// One problem found while reading a dataset file.
struct Issue {
    std::string file;
    std::size_t line = 0;  // 1-based; 0 when not tied to a line
    std::string code;
    std::string message;
};

class IngestError : public std::runtime_error {
public:
    explicit IngestError(Issue issue);
    [[nodiscard]] const Issue& issue() const noexcept { return issue_; }

private:
    Issue issue_;
};

/// Field names of the line-delimited node records.
struct NodeFieldMap {
    std::string name = "name";
    std::string kind = "kind";
    std::string module = "module";
    std::string attributes = "attributes";
    std::string def_height = "def_height";
    std::string tactics = "tactics";
    std::string marker = "marker";
};

/// Header names of the edge table columns.
struct EdgeColumnMap {
    std::string src = "src";
    std::string dst = "dst";
    std::string origin = "origin";
    std::string synth = "synth";
    std::string auto_derived = "auto";
    std::string visibility = "visibility";
    std::string weight = "weight";
    std::string tags = "tags";
};

struct ColumnMapping {
    NodeFieldMap nodes;
    EdgeColumnMap edges;
};

struct NodeLoad {
    std::vector<NodeRecord> records;
    std::vector<Issue> errors;
};

/// Reads node records (one JSON object per line). Ids follow line order among
/// accepted records. Collects errors instead of throwing.
[[nodiscard]] NodeLoad read_nodes(std::istream& in, const NodeFieldMap& fields = {}, const std::string& source = "<nodes>");
/// Strict variant: throws IngestError on the first malformed line.
[[nodiscard]] std::vector<NodeRecord> load_nodes(const std::filesystem::path& path, const NodeFieldMap& fields = {});

using NameIndex = std::unordered_map<std::string, NodeId>;
[[nodiscard]] NameIndex make_name_index(const std::vector<NodeRecord>& nodes);

struct EdgeLoad {
    std::vector<EdgeRecord> edges;
    std::size_t rows = 0;
    std::size_t unresolved = 0;
    std::vector<Issue> unresolved_rows;  // first 100 only
    std::vector<Issue> errors;
};

/// Reads the comma-separated edge table. Rows whose endpoints are missing from
/// `index` are skipped and counted; malformed rows are errors.
[[nodiscard]] EdgeLoad read_edges(std::istream& in, const NameIndex& index, const EdgeColumnMap& columns = {},
                                  const std::string& source = "<edges>");
/// Strict variant: throws IngestError on the first malformed row.
[[nodiscard]] EdgeLoad load_edges(const std::filesystem::path& path, const NameIndex& index,
                                  const EdgeColumnMap& columns = {});

struct BuildWeights {
    std::map<std::string, double> seconds;
    std::vector<Issue> warnings;
};

[[nodiscard]] BuildWeights read_build_weights(std::istream& in, const std::string& source = "<weights>");
[[nodiscard]] BuildWeights load_build_weights(const std::filesystem::path& path);

/// Per-node weights for `g`; modules absent from the table get 0 and a warning.
[[nodiscard]] std::vector<double> node_weights(const DepGraph& g, const BuildWeights& weights,
                                               std::vector<Issue>* warnings = nullptr);

struct PullRequest {
    std::string pr_id;
    std::vector<std::string> files;  // sorted, unique, dotted module names
};

[[nodiscard]] std::vector<PullRequest> read_comod(std::istream& in, const std::string& source = "<comod>");
[[nodiscard]] std::vector<PullRequest> load_comod(const std::filesystem::path& path);

enum class Layer { module, declaration };

struct DatasetManifest {
    Layer layer = Layer::module;
    std::filesystem::path node_path;
    std::filesystem::path edge_path;
    std::optional<std::filesystem::path> weight_path;
    std::optional<std::filesystem::path> comod_path;
    std::string snapshot_label;
    std::string content_hash;  // empty when not recorded
};

struct Manifest {
    std::vector<DatasetManifest> datasets;
    ColumnMapping columns;
};

/// Reads a manifest JSON file; relative paths resolve against its directory.
[[nodiscard]] Manifest load_manifest(const std::filesystem::path& path);

/// Hex SHA-256 over the referenced files in manifest order.
[[nodiscard]] std::string compute_content_hash(const DatasetManifest& dataset);
/// Hash over every dataset of a manifest.
[[nodiscard]] std::string compute_manifest_hash(const Manifest& manifest);

struct LoadedLayer {
    DepGraph graph;
    std::size_t edge_rows = 0;
    std::size_t unresolved_edges = 0;
    std::size_t self_edges_dropped = 0;
    std::vector<Issue> warnings;
};

/// Loads and builds one layer, throwing IngestError on malformed input.
[[nodiscard]] LoadedLayer load_layer(const DatasetManifest& dataset, const ColumnMapping& columns = {});

struct ValidationReport {
    std::map<std::string, std::size_t> counts;
    std::vector<Issue> errors;
    std::vector<Issue> warnings;

    [[nodiscard]] bool accepted() const noexcept { return errors.empty(); }
};

/// Loads every dataset of the manifest and aggregates all problems. Cycles in
/// a declaration layer are warnings when every member is an inductive type or
/// constructor and errors otherwise; module-layer cycles are errors.
[[nodiscard]] ValidationReport validate(const Manifest& manifest);

/// Canonical writers (the normal form of the readers above).
void write_nodes(std::ostream& out, const std::vector<NodeRecord>& nodes, const NodeFieldMap& fields = {});
void write_edges(std::ostream& out, const std::vector<NodeRecord>& nodes, const std::vector<EdgeRecord>& edges,
                 const EdgeColumnMap& columns = {});

/// Splits one CSV line honoring double-quoted fields.
[[nodiscard]] std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace deplens
