#include "deplens/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "deplens/aggregation.hpp"
#include "deplens/centrality.hpp"
#include "deplens/community.hpp"
#include "deplens/decomp_stats.hpp"
#include "deplens/evolution.hpp"
#include "deplens/ingest.hpp"
#include "deplens/module_analysis.hpp"
#include "deplens/parallel.hpp"
#include "deplens/robustness.hpp"
#include "deplens/structure.hpp"
#include "deplens/summary.hpp"
#include "deplens/tail_fit.hpp"

namespace deplens::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LayerSpec {
    enum class Base { module, decl, ns } base = Base::module;
    std::size_t depth = 1;  // ns only
    std::string text;
};

std::size_t parse_depth(const std::string& text, const std::string& what) {
    std::size_t k = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, k);
    if (ec != std::errc{} || ptr != end || k == 0) throw UsageError("invalid depth in " + what);
    return k;
}

LayerSpec parse_layer(const std::string& text) {
    LayerSpec spec;
    spec.text = text;
    if (text == "module") return spec;
    if (text == "decl" || text == "declaration") {
        spec.base = LayerSpec::Base::decl;
        spec.text = "decl";
        return spec;
    }
    if (text == "ns" || text.rfind("ns:", 0) == 0) {
        spec.base = LayerSpec::Base::ns;
        if (text.size() > 2) spec.depth = parse_depth(text.substr(3), "--layer " + text);
        spec.text = "ns:" + std::to_string(spec.depth);
        return spec;
    }
    throw UsageError("--layer must be module, decl or ns:k (got '" + text + "')");
}

struct Options {
    std::string manifest;
    std::string layer = "module";
    std::string snapshot;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string out;
    std::string format = "json";
    bool timing = false;

    std::string stats_kind = "degree";
    std::size_t depth = 1;
    bool has_depth = false;
    std::size_t top_k = 10;
    std::size_t pivots = 0;
    bool has_pivots = false;
    double alpha = 0.85;
    double resolution = 1.0;
    std::string partition_a = "ns:1";
    std::string partition_b = "module";
    std::string direction = "in";
    std::uint64_t xmin = 0;
    bool has_xmin = false;
    std::size_t min_samples = 50;
    std::vector<double> fractions{0.0, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
    std::size_t trials = 10;
    std::size_t hubs = 5;
    std::size_t impact_top = 30;
    std::vector<std::string> nodes;
    std::string from;
    std::string to;
};

std::uint64_t require_seed(const Options& o, const std::string& why) {
    if (!o.has_seed) throw UsageError("--seed is required for " + why);
    return o.seed;
}

/// Lazily loaded layers of one manifest, all from one snapshot label.
class Session {
public:
    explicit Session(const Options& o) : path_(o.manifest) {
        if (o.manifest.empty()) throw UsageError("--manifest is required");
        manifest_ = load_manifest(path_);
        if (manifest_.datasets.empty()) throw DataError("manifest lists no datasets");
        label_ = o.snapshot.empty() ? manifest_.datasets.back().snapshot_label : o.snapshot;
        const auto labels = snapshot_labels();
        if (std::find(labels.begin(), labels.end(), label_) == labels.end()) {
            throw DataError("unknown snapshot '" + label_ + "'");
        }
    }

    [[nodiscard]] const Manifest& manifest() const { return manifest_; }
    [[nodiscard]] const std::string& label() const { return label_; }

    const std::string& hash() {
        if (hash_.empty()) hash_ = compute_manifest_hash(manifest_);
        return hash_;
    }

    /// Labels in order of first appearance.
    [[nodiscard]] std::vector<std::string> snapshot_labels() const {
        std::vector<std::string> out;
        for (const auto& d : manifest_.datasets) {
            if (std::find(out.begin(), out.end(), d.snapshot_label) == out.end()) out.push_back(d.snapshot_label);
        }
        return out;
    }

    [[nodiscard]] const DatasetManifest* find(Layer layer, const std::string& label) const {
        const DatasetManifest* hit = nullptr;
        for (const auto& d : manifest_.datasets) {
            if (d.layer == layer && d.snapshot_label == label) hit = &d;
        }
        return hit;
    }

    [[nodiscard]] bool has(Layer layer) const { return find(layer, label_) != nullptr; }

    const DatasetManifest& dataset(Layer layer) const { return dataset(layer, label_); }
    const DatasetManifest& dataset(Layer layer, const std::string& label) const {
        if (const auto* d = find(layer, label)) return *d;
        throw DataError(std::string("manifest has no ") + (layer == Layer::module ? "module" : "declaration") +
                        " layer for snapshot '" + label + "'");
    }

    const LoadedLayer& load(Layer layer) { return load(layer, label_); }
    const LoadedLayer& load(Layer layer, const std::string& label) {
        const auto* d = &dataset(layer, label);
        auto it = loaded_.find(d);
        if (it != loaded_.end()) return *it->second;
        if (!d->content_hash.empty()) {
            const auto actual = compute_content_hash(*d);
            if (actual != d->content_hash) throw DataError("content hash mismatch for " + d->node_path.string());
        }
        auto layer_data = std::make_unique<LoadedLayer>(load_layer(*d, manifest_.columns));
        return *loaded_.emplace(d, std::move(layer_data)).first->second;
    }

    const DepGraph& modules() { return load(Layer::module).graph; }
    const DepGraph& declarations() { return load(Layer::declaration).graph; }

    const AggregatedGraph& namespaces(std::size_t k) {
        auto it = ns_.find(k);
        if (it == ns_.end()) it = ns_.emplace(k, std::make_unique<AggregatedGraph>(build_ns_graph(declarations(), k))).first;
        return *it->second;
    }

    const DepGraph& graph(const LayerSpec& spec) {
        switch (spec.base) {
            case LayerSpec::Base::module: return modules();
            case LayerSpec::Base::decl: return declarations();
            case LayerSpec::Base::ns: return namespaces(spec.depth).graph;
        }
        throw std::logic_error("unreachable layer");
    }

    const std::vector<std::optional<NodeId>>& decl_modules() {
        if (!decl_modules_) decl_modules_ = map_declarations_to_modules(declarations(), modules());
        return *decl_modules_;
    }

private:
    fs::path path_;
    Manifest manifest_;
    std::string label_;
    std::string hash_;
    std::map<const DatasetManifest*, std::unique_ptr<LoadedLayer>> loaded_;
    std::map<std::size_t, std::unique_ptr<AggregatedGraph>> ns_;
    std::optional<std::vector<std::optional<NodeId>>> decl_modules_;
};

double share(std::size_t part, std::size_t whole) {
    return whole ? static_cast<double>(part) / static_cast<double>(whole) : 0.0;
}

Report start(const std::string& command, const Options& o, Session& s, bool uses_layer = true) {
    Report r;
    r.command = command;
    r.manifest_hash = s.hash();
    r.parameters["snapshot"] = s.label();
    if (uses_layer) r.parameters["layer"] = parse_layer(o.layer).text;
    return r;
}

json degree_json(const DegreeStats& d) {
    return {{"mean", d.mean}, {"median", d.median}, {"std", d.std_dev}, {"max", d.max}, {"zero_count", d.zero_count}};
}

json ranked_json(const std::vector<RankedNode>& rows) {
    json out = json::array();
    for (const auto& r : rows) out.push_back({{"name", r.name}, {"score", r.score}});
    return out;
}

json issues_json(const std::vector<Issue>& issues) {
    json out = json::array();
    for (const auto& i : issues) {
        out.push_back({{"file", i.file}, {"line", i.line}, {"code", i.code}, {"message", i.message}});
    }
    return out;
}

std::vector<double> as_doubles(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

Curve layer_width_curve(const DagProfile& profile) {
    Curve c{"layer_widths", "level", "width", {}};
    for (std::size_t i = 0; i < profile.widths.size(); ++i) {
        c.points.emplace_back(static_cast<double>(i), static_cast<double>(profile.widths[i]));
    }
    return c;
}

json dag_json(const DepGraph& g, std::vector<Curve>& curves) {
    json out;
    DagProfile profile;
    try {
        profile = dag_depth_and_widths(g);
        out["condensed"] = false;
    } catch (const CycleError&) {
        profile = dag_depth_and_widths(condense(g).dag);
        out["condensed"] = true;
    }
    out["depth"] = profile.depth;
    out["layers"] = profile.widths.size();
    out["max_width"] = profile.widths.empty() ? 0 : *std::max_element(profile.widths.begin(), profile.widths.end());
    out["median_width"] = lower_median(as_doubles(profile.widths));
    out["source_layer"] = profile.widths.empty() ? 0 : profile.widths.front();
    curves.push_back(layer_width_curve(profile));
    return out;
}

Grouping grouping_from_partition(const Partition& p) {
    Grouping g;
    g.group_of.reserve(p.node_count());
    for (NodeId v = 0; v < p.node_count(); ++v) g.group_of.emplace_back(p[v]);
    for (std::size_t i = 0; i < p.sizes().size(); ++i) g.names.push_back("c" + std::to_string(i));
    return g;
}

/// Partition comparison over the nodes both groupings cover.
json compare_groupings(const Grouping& a, const Grouping& b) {
    std::vector<GroupId> la, lb;
    std::set<GroupId> ga, gb;
    for (std::size_t v = 0; v < a.group_of.size(); ++v) {
        if (!a.group_of[v] || !b.group_of[v]) continue;
        la.push_back(*a.group_of[v]);
        lb.push_back(*b.group_of[v]);
        ga.insert(la.back());
        gb.insert(lb.back());
    }
    if (la.empty()) throw DataError("no node is covered by both partitions");
    const auto c = compare_partitions(la, lb);
    return {{"nodes", la.size()},           {"groups_a", ga.size()},     {"groups_b", gb.size()},
            {"entropy_a", c.entropy_a},     {"entropy_b", c.entropy_b},  {"mutual_information", c.mutual_information},
            {"nmi", c.nmi},                 {"ari", c.ari}};
}

std::vector<RankedNode> in_degree_top(const DepGraph& g, std::size_t k) {
    return top_k(g, as_doubles(degrees(g, Direction::in)), k);
}

// ---------------------------------------------------------------- commands

Report cmd_validate(Session& s, const Options& o) {
    auto r = start("validate", o, s, false);
    const auto v = validate(s.manifest());
    r.payload["accepted"] = v.accepted();
    r.payload["counts"] = v.counts;
    r.payload["errors"] = issues_json(v.errors);
    r.payload["warnings"] = issues_json(v.warnings);
    return r;
}

Report cmd_stats(Session& s, const Options& o) {
    auto r = start("stats", o, s);
    r.parameters["kind"] = o.stats_kind;
    const auto& g = s.graph(parse_layer(o.layer));
    auto& p = r.payload;
    if (o.stats_kind == "degree") {
        p["nodes"] = g.node_count();
        p["edges"] = g.edge_count();
        for (const auto dir : {Direction::in, Direction::out}) {
            const auto d = degree_stats(g, dir);
            const std::string key = dir == Direction::in ? "in" : "out";
            p[key] = degree_json(d);
            Curve c{"degree_" + key, "degree", "count", {}};
            for (const auto& [deg, count] : d.histogram) c.points.emplace_back(deg, count);
            r.curves.push_back(std::move(c));
        }
        const auto weak = connected_components(g, Connectivity::weak);
        const auto strong = connected_components(g, Connectivity::strong);
        const auto& ws = weak.sizes();
        const std::size_t gcc = ws.empty() ? 0 : ws.front();
        p["weak_components"] = {{"count", weak.group_count()},
                                {"gcc", gcc},
                                {"gcc_fraction", share(gcc, g.node_count())},
                                {"singletons", std::count(ws.begin(), ws.end(), std::size_t{1})}};
        const auto& ss = strong.sizes();
        p["strong_components"] = {
            {"count", strong.group_count()},
            {"giant", ss.empty() ? 0 : ss.front()},
            {"nontrivial", std::count_if(ss.begin(), ss.end(), [](std::size_t x) { return x > 1; })}};
        p["dag"] = dag_json(g, r.curves);
    } else if (o.stats_kind == "height") {
        const auto h = def_height_stats(g.nodes());
        p = {{"regular", h.regular}, {"abbreviation", h.abbreviation}, {"opaque", h.opaque},
             {"median", h.median},   {"mean", h.mean},                 {"max", h.max},
             {"deciles", h.deciles}};
    } else if (o.stats_kind == "attributes") {
        const auto a = attribute_stats(g.nodes());
        p = {{"universe", a.universe},
             {"any_attribute", a.any_attribute},
             {"any_share", a.any_share},
             {"flattening_ratio", a.flattening_ratio}};
        json top = json::array();
        for (std::size_t i = 0; i < a.attributes.size() && i < o.top_k; ++i) {
            const auto& row = a.attributes[i];
            top.push_back({{"attribute", row.attribute}, {"count", row.count}, {"share", row.share}});
        }
        p["top"] = std::move(top);
    } else {
        const std::size_t k = o.has_depth ? o.depth : 1;
        r.parameters["depth"] = k;
        const auto t = tactic_stats(g.nodes(), namespace_grouping(g, k));
        p = {{"proofs", t.proofs},
             {"steps", t.steps},
             {"mean_steps", t.mean_steps},
             {"median_steps", t.median_steps},
             {"max_steps", t.max_steps},
             {"distinct_tactics", t.global.counts.size()}};
        json top = json::array();
        const auto ranked = t.global.ranked();
        for (std::size_t i = 0; i < ranked.size() && i < o.top_k; ++i) {
            top.push_back({{"tactic", ranked[i].first},
                           {"count", ranked[i].second},
                           {"share", share(ranked[i].second, t.global.total)}});
        }
        p["top"] = std::move(top);
        p["groups"] = t.groups;
        p["jsd"] = t.jsd;
    }
    return r;
}

Report cmd_reduce(Session& s, const Options& o) {
    auto r = start("reduce", o, s);
    const auto& g = s.graph(parse_layer(o.layer));
    const auto tr = transitive_reduction(g);
    json removed = json::array();
    for (auto e : tr.removed) removed.push_back({g.name(g.edge(e).src), g.name(g.edge(e).dst)});
    r.payload = {{"nodes", g.node_count()},
                 {"edges", g.edge_count()},
                 {"reduced_edges", tr.reduced.edge_count()},
                 {"removed", tr.removed.size()},
                 {"redundancy_rate", tr.redundancy_rate},
                 {"removed_edges", std::move(removed)}};
    return r;
}

Report cmd_critical_path(Session& s, const Options& o) {
    auto r = start("critical-path", o, s, false);
    const auto& ds = s.dataset(Layer::module);
    if (!ds.weight_path) throw DataError("module layer has no build-weight file");
    const auto& g = s.modules();
    std::vector<Issue> warnings;
    const auto w = node_weights(g, load_build_weights(*ds.weight_path), &warnings);
    const auto cp = critical_path(g, w);
    json path = json::array();
    for (auto v : cp.path) path.push_back(g.name(v));
    r.payload = {{"path", std::move(path)},
                 {"path_nodes", cp.path.size()},
                 {"total_weight", cp.total_weight},
                 {"sequential_weight", cp.sequential_weight},
                 {"weighted_speedup", cp.weighted_speedup},
                 {"parallelism_ratio", cp.parallelism_ratio},
                 {"modules_without_weight", warnings.size()}};
    return r;
}

std::size_t max_name_depth(const DepGraph& g) {
    std::size_t d = 0;
    for (const auto& n : g.nodes()) d = std::max(d, n.name.depth());
    return d;
}

Report cmd_containment(Session& s, const Options& o) {
    auto r = start("containment", o, s);
    const auto spec = parse_layer(o.layer);
    auto& p = r.payload;
    Curve decay{"containment_decay", "depth", "ratio", {}};
    json table = json::array();
    if (spec.base == LayerSpec::Base::decl) {
        const auto& g = s.declarations();
        const auto files = module_grouping(g);
        const auto all = containment_ratio(g, files, Denominator::all);
        const auto covered = containment_ratio(g, files, Denominator::covered);
        p = {{"level", "file"},
             {"ratio", all.ratio},
             {"same", all.same},
             {"edges", all.denominator},
             {"covered_ratio", covered.ratio},
             {"covered_edges", covered.denominator}};
        return r;
    }
    const std::size_t requested = o.has_depth ? o.depth : spec.depth;
    r.parameters["depth"] = requested;
    if (spec.base == LayerSpec::Base::module) {
        const auto& g = s.modules();
        const std::size_t top = std::max(max_name_depth(g), requested);
        for (std::size_t k = 1; k <= top; ++k) {
            const auto c = module_containment(g, k);
            decay.points.emplace_back(k, c.ratio);
            table.push_back({{"depth", k}, {"ratio", c.ratio}, {"groups", c.group_count}, {"same", c.same_group_edges}});
            if (k == requested) p = {{"level", "module"}, {"ratio", c.ratio}, {"groups", c.group_count}, {"edges", c.edges}};
        }
    } else {
        const auto& g = s.declarations();
        const std::size_t top = std::max(max_name_depth(g) > 1 ? max_name_depth(g) - 1 : 1, requested);
        for (std::size_t k = 1; k <= top; ++k) {
            const auto grouping = namespace_grouping(g, k);
            const auto c = containment_ratio(g, grouping, Denominator::all);
            decay.points.emplace_back(k, c.ratio);
            table.push_back({{"depth", k}, {"ratio", c.ratio}, {"groups", grouping.group_count()}, {"same", c.same}});
            if (k == requested) {
                p = {{"level", "namespace"}, {"ratio", c.ratio}, {"groups", grouping.group_count()}, {"edges", c.denominator}};
            }
        }
    }
    p["by_depth"] = std::move(table);
    r.curves.push_back(std::move(decay));
    return r;
}

Report cmd_cohesion(Session& s, const Options& o) {
    auto r = start("cohesion", o, s, false);
    const auto& g = s.declarations();
    const auto files = module_grouping(g);
    const auto t = module_cohesion(g, files);
    const auto b = edge_boundary_breakdown(g, files, namespace_grouping(g, 1));
    json rows = json::array();
    std::vector<double> sorted;
    for (const auto& m : t.modules) {
        rows.push_back({{"module", files.names[m.group]},
                        {"internal", m.internal},
                        {"external", m.external},
                        {"cohesion", m.cohesion}});
        sorted.push_back(m.cohesion);
    }
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    Curve c{"cohesion_rank", "rank", "cohesion", {}};
    for (std::size_t i = 0; i < sorted.size(); ++i) c.points.emplace_back(i + 1, sorted[i]);
    r.curves.push_back(std::move(c));
    const auto total = b.total();
    r.payload = {{"modules", t.modules.size()},
                 {"mean", t.mean},
                 {"median", t.median},
                 {"std", t.std_dev},
                 {"max", t.max},
                 {"zero_count", t.zero_count},
                 {"zero_fraction", share(t.zero_count, t.modules.size())},
                 {"edge_breakdown",
                  {{"same_module", b.same_module},
                   {"same_namespace", b.same_namespace},
                   {"cross_namespace", b.cross_namespace},
                   {"missing", b.missing},
                   {"same_module_fraction", share(b.same_module, total)},
                   {"same_namespace_fraction", share(b.same_namespace, total)},
                   {"cross_namespace_fraction", share(b.cross_namespace, total)},
                   {"missing_fraction", share(b.missing, total)}}},
                 {"per_module", std::move(rows)}};
    return r;
}

Report cmd_utilization(Session& s, const Options& o) {
    auto r = start("utilization", o, s, false);
    const auto& gm = s.modules();
    const auto& gd = s.declarations();
    const auto u = import_utilization(gm, gd, s.decl_modules());
    json rows = json::array();
    std::vector<double> sorted;
    for (const auto& e : u.per_edge) {
        const auto& rec = gm.edge(e.edge);
        rows.push_back({{"importer", gm.name(rec.src)},
                        {"imported", gm.name(rec.dst)},
                        {"referenced", e.referenced},
                        {"defined", e.defined},
                        {"util", e.util}});
        sorted.push_back(e.util);
    }
    std::sort(sorted.begin(), sorted.end());
    Curve c{"utilization_sorted", "rank", "util", {}};
    for (std::size_t i = 0; i < sorted.size(); ++i) c.points.emplace_back(i + 1, sorted[i]);
    r.curves.push_back(std::move(c));
    r.payload = {{"imports", gm.edge_count()},
                 {"measured", u.per_edge.size()},
                 {"excluded", u.excluded_edges},
                 {"median", u.median},
                 {"mean", u.mean},
                 {"q1", u.q1},
                 {"q3", u.q3},
                 {"zero_count", u.zero_count},
                 {"zero_fraction", share(u.zero_count, u.per_edge.size())},
                 {"per_edge", std::move(rows)}};
    return r;
}

Report cmd_classify_imports(Session& s, const Options& o) {
    auto r = start("classify-imports", o, s, false);
    const auto& gm = s.modules();
    const auto c = classify_import_edges(gm, s.declarations(), s.decl_modules());
    const std::size_t files = c.file_edges.size();
    json unused = json::array();
    for (EdgeId e = 0; e < c.import_use.size(); ++e) {
        if (c.import_use[e] == ImportUse::unused) unused.push_back({gm.name(gm.edge(e).src), gm.name(gm.edge(e).dst)});
    }
    r.payload = {{"imports", gm.edge_count()},
                 {"active", c.active},
                 {"unused", c.unused},
                 {"active_fraction", share(c.active, c.active + c.unused)},
                 {"file_edges", files},
                 {"direct", c.direct},
                 {"transitive", c.transitive},
                 {"unreachable", c.unreachable},
                 {"direct_fraction", share(c.direct, files)},
                 {"transitive_fraction", share(c.transitive, files)},
                 {"unreachable_fraction", share(c.unreachable, files)},
                 {"uncovered_edges", c.uncovered_edges},
                 {"intra_module_edges", c.intra_module_edges},
                 {"unused_imports", std::move(unused)}};
    return r;
}

std::size_t ns_depth(const Options& o) {
    const auto spec = parse_layer(o.layer);
    if (o.has_depth) return o.depth;
    return spec.base == LayerSpec::Base::ns ? spec.depth : 1;
}

Report cmd_aggregate_ns(Session& s, const Options& o) {
    auto r = start("aggregate-ns", o, s, false);
    const std::size_t k = ns_depth(o);
    r.parameters["depth"] = k;
    const auto& agg = s.namespaces(k);
    const auto& g = agg.graph;
    json cycles = json::array();
    for (const auto& e : g.edges()) {
        if (e.src < e.dst && g.has_edge(e.dst, e.src)) cycles.push_back({g.name(e.src), g.name(e.dst)});
    }
    const auto cond = condense(g);
    const auto profile = dag_depth_and_widths(cond.dag);
    const auto& sizes = cond.component.sizes();
    r.curves.push_back(layer_width_curve(profile));
    bool acyclic = cond.dag.node_count() == g.node_count();
    r.payload = {{"namespaces", g.node_count()},
                 {"edges", g.edge_count()},
                 {"internal_total", agg.internal_total},
                 {"cross_total", agg.cross_total},
                 {"unmapped_edges", agg.unmapped_edges},
                 {"containment", share(agg.internal_total, agg.internal_total + agg.cross_total)},
                 {"acyclic", acyclic},
                 {"two_cycles", std::move(cycles)},
                 {"condensation",
                  {{"super_nodes", cond.dag.node_count()},
                   {"giant_scc", sizes.empty() ? 0 : sizes.front()},
                   {"layers", profile.widths.size()}}}};
    return r;
}

Report cmd_pairs(Session& s, const Options& o) {
    auto r = start("pairs", o, s, false);
    const std::size_t k = ns_depth(o);
    r.parameters["depth"] = k;
    r.parameters["top_k"] = o.top_k;
    const auto& agg = s.namespaces(k);
    json rows = json::array();
    for (const auto& p : cross_group_pairs(agg.graph, o.top_k)) {
        rows.push_back({{"a", p.a}, {"b", p.b}, {"weight", p.weight}, {"share", agg.cross_total ? p.weight / static_cast<double>(agg.cross_total) : 0.0}});
    }
    r.payload = {{"cross_total", agg.cross_total}, {"pairs", std::move(rows)}};
    return r;
}

Report cmd_centrality(Session& s, const Options& o) {
    auto r = start("centrality", o, s);
    r.parameters["alpha"] = o.alpha;
    r.parameters["top_k"] = o.top_k;
    const auto& g = s.graph(parse_layer(o.layer));
    PageRankOptions pro;
    pro.damping = o.alpha;
    const auto pr = pagerank(g, pro);
    BetweennessOptions bo;
    if (o.has_pivots) {
        bo.pivots = o.pivots;
        bo.seed = require_seed(o, "pivot-sampled betweenness");
        r.parameters["pivots"] = o.pivots;
        r.parameters["seed"] = o.seed;
    }
    const auto bt = betweenness(g, bo);
    r.payload["pagerank"] = {{"iterations", pr.iterations},
                             {"converged", pr.converged},
                             {"top", ranked_json(top_k(g, pr.scores, o.top_k))}};
    r.payload["betweenness"] = {{"exact", !o.has_pivots}, {"top", ranked_json(top_k(g, bt, o.top_k))}};
    r.payload["in_degree"] = ranked_json(in_degree_top(g, o.top_k));
    r.payload["out_degree"] = ranked_json(top_k(g, as_doubles(degrees(g, Direction::out)), o.top_k));
    const std::vector<std::string> labels{"theorem", "lemma"};
    const bool labeled = std::any_of(g.nodes().begin(), g.nodes().end(), [](const NodeRecord& n) { return n.marker.has_value(); });
    if (labeled) {
        const auto cmp = group_compare(g, pr.scores, labels);
        json rows = json::array();
        for (const auto& row : cmp.rows) {
            rows.push_back({{"label", row.label},
                            {"count", row.count},
                            {"mean_in_degree", row.mean_in_degree},
                            {"zero_citation_rate", row.zero_citation_rate},
                            {"mean_pagerank", row.mean_pagerank}});
        }
        json gc{{"rows", std::move(rows)}};
        if (cmp.ratio) {
            gc["ratio"] = {{"numerator", cmp.ratio->numerator},
                           {"denominator", cmp.ratio->denominator},
                           {"mean_in_degree", cmp.ratio->mean_in_degree},
                           {"zero_citation_rate", cmp.ratio->zero_citation_rate},
                           {"mean_pagerank", cmp.ratio->mean_pagerank}};
        }
        r.payload["marker_comparison"] = std::move(gc);
    }
    return r;
}

/// Top-level naming used to judge community alignment.
Grouping reference_grouping(const DepGraph& g, const LayerSpec& spec) {
    return spec.base == LayerSpec::Base::decl ? namespace_grouping(g, 1) : prefix_grouping(g, 1);
}

CommunityResult run_louvain(const DepGraph& g, const Options& o) {
    const auto ug = undirected_projection(g);
    if (ug.total_weight <= 0.0) throw DataError("community detection needs at least one edge");
    LouvainOptions lo;
    lo.seed = require_seed(o, "community detection");
    lo.resolution = o.resolution;
    return louvain(ug, lo);
}

Report cmd_community(Session& s, const Options& o) {
    auto r = start("community", o, s);
    const auto spec = parse_layer(o.layer);
    const auto& g = s.graph(spec);
    const auto cr = run_louvain(g, o);
    r.parameters["seed"] = o.seed;
    r.parameters["resolution"] = o.resolution;
    json sizes = json::array();
    for (auto sz : cr.partition.sizes()) {
        if (sizes.size() == o.top_k) break;
        sizes.push_back(sz);
    }
    Curve c{"community_sizes", "rank", "size", {}};
    for (std::size_t i = 0; i < cr.partition.sizes().size(); ++i) c.points.emplace_back(i + 1, cr.partition.sizes()[i]);
    r.curves.push_back(std::move(c));
    r.payload = {{"modularity", cr.modularity},
                 {"communities", cr.partition.group_count()},
                 {"passes", cr.passes},
                 {"pass_modularity", cr.pass_modularity},
                 {"largest_sizes", std::move(sizes)},
                 {"top_level_agreement", compare_groupings(grouping_from_partition(cr.partition), reference_grouping(g, spec))}};
    return r;
}

Grouping grouping_from_spec(const std::string& text, const DepGraph& g, const Options& o) {
    if (text == "community") return grouping_from_partition(run_louvain(g, o).partition);
    if (text == "module") {
        auto m = module_grouping(g);
        if (m.covered_count() == 0) throw DataError("partition 'module' needs nodes with a module field");
        return m;
    }
    if (text == "scc") return grouping_from_partition(connected_components(g, Connectivity::strong));
    if (text.rfind("ns:", 0) == 0) return namespace_grouping(g, parse_depth(text.substr(3), text));
    if (text.rfind("prefix:", 0) == 0) return prefix_grouping(g, parse_depth(text.substr(7), text));
    throw UsageError("partition must be community, module, scc, ns:k or prefix:k (got '" + text + "')");
}

Report cmd_compare_partitions(Session& s, const Options& o) {
    auto r = start("compare-partitions", o, s);
    r.parameters["a"] = o.partition_a;
    r.parameters["b"] = o.partition_b;
    if (o.partition_a == "community" || o.partition_b == "community") {
        r.parameters["seed"] = require_seed(o, "community partitions");
        r.parameters["resolution"] = o.resolution;
    }
    const auto& g = s.graph(parse_layer(o.layer));
    r.payload = compare_groupings(grouping_from_spec(o.partition_a, g, o), grouping_from_spec(o.partition_b, g, o));
    return r;
}

Report cmd_fit_tail(Session& s, const Options& o) {
    auto r = start("fit-tail", o, s);
    r.parameters["direction"] = o.direction;
    r.parameters["min_samples"] = o.min_samples;
    if (o.has_xmin) r.parameters["xmin"] = o.xmin;
    const auto& g = s.graph(parse_layer(o.layer));
    const auto deg = degrees(g, o.direction == "in" ? Direction::in : Direction::out);
    auto samples = positive_samples(deg);
    TailFitOptions opts;
    opts.min_samples = o.min_samples;
    if (o.has_xmin) opts.fixed_xmin = o.xmin;
    const auto fit = fit_powerlaw(samples, opts);
    const auto cmp = compare_alternatives(samples, fit);
    json alts = json::array();
    for (const auto& a : cmp.alternatives) {
        alts.push_back({{"model", to_string(a.model)},
                        {"parameters", a.parameters},
                        {"log_likelihood", a.log_likelihood},
                        {"R", a.R},
                        {"p", a.p},
                        {"converged", a.converged},
                        {"favors", a.R > 0 ? "power_law" : (a.R < 0 ? "alternative" : "neither")}});
    }
    std::sort(samples.begin(), samples.end());
    Curve c{"ccdf", "degree", "p_ge", {}};
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i > 0 && samples[i] == samples[i - 1]) continue;
        c.points.emplace_back(static_cast<double>(samples[i]), share(samples.size() - i, samples.size()));
    }
    r.curves.push_back(std::move(c));
    r.payload = {{"samples", fit.n},
                 {"zeros_excluded", deg.size() - samples.size()},
                 {"alpha", fit.alpha},
                 {"x_min", fit.x_min},
                 {"sigma", fit.sigma},
                 {"ks", fit.ks},
                 {"n_tail", fit.n_tail},
                 {"tail_fraction", fit.tail_fraction},
                 {"powerlaw_log_likelihood", cmp.powerlaw_log_likelihood},
                 {"alternatives", std::move(alts)}};
    return r;
}

std::vector<NodeId> resolve_names(const DepGraph& g, const std::vector<std::string>& names) {
    std::vector<NodeId> out;
    for (const auto& n : names) {
        const auto v = g.find(n);
        if (!v) throw DataError("unknown node '" + n + "'");
        out.push_back(*v);
    }
    return out;
}

Report cmd_robustness(Session& s, const Options& o) {
    auto r = start("robustness", o, s);
    const auto seed = require_seed(o, "random removal");
    for (std::size_t i = 0; i < o.fractions.size(); ++i) {
        const double f = o.fractions[i];
        if (!(f >= 0.0 && f <= 1.0) || (i > 0 && f < o.fractions[i - 1])) {
            throw UsageError("--fractions must be ascending values in [0,1]");
        }
    }
    r.parameters["seed"] = seed;
    r.parameters["fractions"] = o.fractions;
    r.parameters["trials"] = o.trials;
    r.parameters["hubs"] = o.hubs;
    r.parameters["impact_top"] = o.impact_top;
    r.parameters["targeted_by"] = "pagerank";
    if (!o.nodes.empty()) r.parameters["nodes"] = o.nodes;
    if (o.trials == 0) throw UsageError("--trials must be >= 1");
    const auto& g = s.graph(parse_layer(o.layer));

    const auto random = removal_curve(g, {RemovalKind::random, {}}, o.fractions, o.trials, seed);
    // Targeted order: PageRank on the intact graph, computed once.
    const auto pr = g.node_count() > 0 ? pagerank(g).scores : std::vector<double>{};
    const auto targeted = removal_curve(g, {RemovalKind::targeted, pr}, o.fractions, 1, seed);
    json rows = json::array();
    Curve cr{"random", "fraction", "gcc_fraction", {}};
    Curve ct{"targeted", "fraction", "gcc_fraction", {}};
    for (std::size_t i = 0; i < o.fractions.size(); ++i) {
        rows.push_back({{"fraction", o.fractions[i]},
                        {"random", random.gcc_fraction[i]},
                        {"random_std", random.gcc_std[i]},
                        {"targeted", targeted.gcc_fraction[i]}});
        cr.points.emplace_back(o.fractions[i], random.gcc_fraction[i]);
        ct.points.emplace_back(o.fractions[i], targeted.gcc_fraction[i]);
    }
    r.curves.push_back(std::move(cr));
    r.curves.push_back(std::move(ct));

    // The same top in-degree hubs are removed from the raw and the reduced
    // graph. --hubs 0 skips the reduction, which is costly on large layers.
    json hub_removal = nullptr;
    if (o.hubs > 0) {
        std::vector<NodeId> hubs;
        json hub_names = json::array();
        for (const auto& h : in_degree_top(g, o.hubs)) {
            hubs.push_back(h.node);
            hub_names.push_back(h.name);
        }
        const auto raw = remove_and_measure(g, hubs);
        hub_removal = {{"removed", std::move(hub_names)},
                       {"raw", {{"wcc_count", raw.wcc_count}, {"gcc_size", raw.gcc_size}}}};
        try {
            const auto reduced = remove_and_measure(transitive_reduction(g).reduced, hubs);
            hub_removal["reduced"] = {{"wcc_count", reduced.wcc_count}, {"gcc_size", reduced.gcc_size}};
        } catch (const CycleError&) {
            hub_removal["reduced"] = nullptr;
        }
    }

    std::vector<NodeId> candidates;
    if (o.impact_top > 0 && g.node_count() > 0) {
        for (const auto& n : top_k(g, pr, o.impact_top)) candidates.push_back(n.node);
    }
    for (auto v : resolve_names(g, o.nodes)) {
        if (std::find(candidates.begin(), candidates.end(), v) == candidates.end()) candidates.push_back(v);
    }
    json impacts = json::array();
    std::size_t worst = 0;
    for (const auto& imp : single_node_impact(g, candidates)) {
        impacts.push_back({{"node", g.name(imp.node)}, {"gcc_after", imp.gcc_after}, {"disconnected", imp.disconnected}});
        worst = std::max(worst, imp.disconnected);
    }
    r.payload = {{"nodes", g.node_count()},
                 {"curve", std::move(rows)},
                 {"hub_removal", std::move(hub_removal)},
                 {"single_node_impact", std::move(impacts)},
                 {"max_disconnected", worst}};
    return r;
}

json axis_json(const AxisCounts& a) {
    json counts = json::object();
    json fractions = json::object();
    for (const auto& [cls, c] : a.counts) {
        counts[cls] = c;
        fractions[cls] = a.fraction(cls);
    }
    return {{"counts", std::move(counts)}, {"fractions", std::move(fractions)}, {"unknown", a.unknown}};
}

json asymmetry_json(const DepthAsymmetry& d) {
    return {{"edges", d.edges},
            {"same", d.same},
            {"source_deeper", d.source_deeper},
            {"target_deeper", d.target_deeper},
            {"mean_diff", d.mean_diff}};
}

Report cmd_decomp(Session& s, const Options& o) {
    auto r = start("decomp", o, s, false);
    r.parameters["top_k"] = o.top_k;
    const auto& g = s.declarations();
    auto& p = r.payload;

    const auto eps = edge_partition_stats(g);
    p["edges"] = g.edge_count();
    p["origin"] = axis_json(eps.origin);
    p["synthesis"] = axis_json(eps.synthesis);
    p["derivation"] = axis_json(eps.derivation);
    p["synthesis_ratio"] = eps.synthesis_ratio;
    p["auto_fraction"] = eps.auto_fraction;

    struct View {
        const char* name;
        EdgePredicate keep;
        bool diameter;
    };
    const std::vector<View> views{
        {"coercion", edge_has_tag("coe"), true},
        {"extends", edge_has_tag("extends"), true},
        {"typeclass", edge_has_tag("instance"), true},
        {"synthesized", [](const EdgeRecord& e) { return e.synthesized == Flag::yes; }, false},
        {"auto_derived", [](const EdgeRecord& e) { return e.auto_derived == Flag::yes; }, false},
    };
    json views_json = json::object();
    for (const auto& v : views) {
        const auto sub = edge_induced_subgraph(g, v.keep);
        json entry{{"nodes", sub.node_count()},
                   {"edges", sub.edge_count()},
                   {"weak_components", connected_components(sub, Connectivity::weak).group_count()}};
        if (v.diameter) entry["diameter"] = diameter(sub);
        views_json[v.name] = std::move(entry);
    }
    p["subgraphs"] = std::move(views_json);

    const auto flow = inter_kind_flow(g);
    json flow_rows = json::array();
    for (std::size_t a = 0; a < kNodeKindCount; ++a) {
        for (std::size_t b = 0; b < kNodeKindCount; ++b) {
            if (flow[a][b] == 0) continue;
            flow_rows.push_back({{"src_kind", to_string(static_cast<NodeKind>(a))},
                                 {"dst_kind", to_string(static_cast<NodeKind>(b))},
                                 {"count", flow[a][b]},
                                 {"share", share(flow[a][b], g.edge_count())}});
        }
    }
    p["kind_flow"] = std::move(flow_rows);

    p["depth_asymmetry"] = {{"declaration", asymmetry_json(depth_asymmetry(g, declaration_depths(g)))}};
    if (s.has(Layer::module)) {
        const auto& gm = s.modules();
        p["depth_asymmetry"]["module"] = asymmetry_json(depth_asymmetry(gm, module_depths(gm)));
        const auto dd = module_depth_difference(gm, g, s.decl_modules());
        json dirs = json::array();
        for (const auto& d : dd.directories) {
            dirs.push_back({{"directory", d.directory}, {"modules", d.modules}, {"mean_delta", d.mean_delta}, {"median_delta", d.median_delta}});
        }
        p["depth_difference"] = {{"modules", dd.modules.size()},
                                 {"mean_delta", dd.mean_delta},
                                 {"median_delta", dd.median_delta},
                                 {"std_delta", dd.std_delta},
                                 {"negative", dd.negative},
                                 {"zero", dd.zero},
                                 {"positive", dd.positive},
                                 {"directories", std::move(dirs)}};
    }

    const NodeKind theorem_kind[] = {NodeKind::theorem};
    const auto zc = zero_citation_by_group(g, namespace_grouping(g, 1), theorem_kind);
    json zrows = json::array();
    for (std::size_t i = 0; i < zc.groups.size() && i < o.top_k; ++i) {
        const auto& z = zc.groups[i];
        zrows.push_back({{"namespace", z.group}, {"total", z.total}, {"zero", z.zero}, {"rate", z.rate}});
    }
    p["zero_citation"] = {{"theorems", zc.overall.total}, {"zero", zc.overall.zero}, {"rate", zc.overall.rate}, {"by_namespace", std::move(zrows)}};
    p["flattening_ratio"] = attribute_stats(g.nodes()).flattening_ratio;
    return r;
}

Report cmd_snapshot_diff(Session& s, const Options& o) {
    auto r = start("snapshot-diff", o, s);
    const auto labels = s.snapshot_labels();
    const std::string from = o.from.empty() ? labels.front() : o.from;
    const std::string to = o.to.empty() ? labels.back() : o.to;
    for (const auto& l : {from, to}) {
        if (std::find(labels.begin(), labels.end(), l) == labels.end()) throw DataError("unknown snapshot '" + l + "'");
    }
    r.parameters["from"] = from;
    r.parameters["to"] = to;
    r.parameters["top_k"] = o.top_k;
    const auto spec = parse_layer(o.layer);
    if (spec.base == LayerSpec::Base::ns) throw UsageError("snapshot-diff compares module or decl layers");
    const Layer layer = spec.base == LayerSpec::Base::module ? Layer::module : Layer::declaration;

    std::vector<Snapshot> series;
    for (const auto& l : labels) {
        Snapshot snap{l, nullptr, nullptr};
        if (s.find(Layer::declaration, l)) snap.declarations = &s.load(Layer::declaration, l).graph;
        if (s.find(Layer::module, l)) snap.modules = &s.load(Layer::module, l).graph;
        series.push_back(snap);
    }
    json growth = json::array();
    Curve c{"growth", "snapshot_index", layer == Layer::module ? "modules" : "declarations", {}};
    const auto rows = growth_indicators(series);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& g = rows[i];
        growth.push_back({{"label", g.label},
                          {"declarations", g.declarations},
                          {"modules", g.modules},
                          {"edges", g.edges},
                          {"density", g.density}});
        c.points.emplace_back(i, layer == Layer::module ? g.modules : g.declarations);
    }
    r.curves.push_back(std::move(c));
    const auto& a = s.load(layer, from).graph;
    const auto& b = s.load(layer, to).graph;
    const auto hub = hub_turnover(a, b, o.top_k);
    r.payload = {{"growth", std::move(growth)},
                 {"hub_turnover", {{"spearman", hub.spearman}, {"union_size", hub.union_size}, {"shared_names", hub.shared_names}}}};
    if (o.has_seed) {
        r.parameters["seed"] = o.seed;
        r.parameters["resolution"] = o.resolution;
        const auto pa = run_louvain(a, o);
        const auto pb = run_louvain(b, o);
        r.payload["community_persistence"] = community_persistence(a, pa.partition, b, pb.partition);
    }
    return r;
}

Report cmd_comod(Session& s, const Options& o) {
    auto r = start("comod", o, s, false);
    const auto& ds = s.dataset(Layer::module);
    if (!ds.comod_path) throw DataError("module layer has no co-modification file");
    const auto prs = load_comod(*ds.comod_path);
    const auto cg = build_comod_graph(prs);
    const auto cmp = comod_vs_imports(cg, s.modules());
    json edges = json::array();
    for (const auto& e : cg.edges) edges.push_back({{"a", cg.modules[e.a]}, {"b", cg.modules[e.b]}, {"weight", e.weight}});
    json hidden = json::array();
    for (const auto& p : cmp.pairs) {
        if (p.cls == PairClass::comod_only) hidden.push_back({{"a", p.a}, {"b", p.b}, {"weight", p.comod_weight}});
    }
    r.payload = {{"pull_requests", prs.size()},
                 {"modules", cg.modules.size()},
                 {"comod_edges", std::move(edges)},
                 {"both", cmp.both},
                 {"comod_only", cmp.comod_only},
                 {"import_only", cmp.import_only},
                 {"hidden_dependencies", std::move(hidden)}};
    return r;
}

// ---------------------------------------------------------------- output

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("cannot write " + path.string());
}

std::string render(const Report& r, const Options& o) {
    const auto env = envelope(r);
    return o.format == "csv" ? flatten_csv(env) : env.dump(2) + "\n";
}

std::vector<fs::path> emit_curves_as(const Report& report, const fs::path& dir, const std::string& stem) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    std::vector<fs::path> out;
    for (const auto& c : report.curves) {
        std::string text = c.x_label + "," + c.y_label + "\n";
        for (const auto& [x, y] : c.points) text += format_number(x) + "," + format_number(y) + "\n";
        out.push_back(dir / (stem + "." + c.name + ".csv"));
        write_text(out.back(), text);
    }
    return out;
}

void publish(const Report& r, const Options& o, const std::string& stem, std::ostream& out) {
    const auto text = render(r, o);
    if (o.out.empty()) {
        out << text;
        return;
    }
    emit_curves_as(r, o.out, stem);
    write_text(fs::path(o.out) / (stem + (o.format == "csv" ? ".csv" : ".json")), text);
}

using Command = std::function<Report(Session&, const Options&)>;

/// Every analysis with its natural layer; inapplicable ones are recorded as skipped.
Report cmd_report_all(Session& s, const Options& base, std::ostream& out, bool& validation_failed) {
    auto r = start("report-all", base, s, false);
    r.parameters["seed"] = require_seed(base, "report-all");
    struct Step {
        std::string key;
        Command run;
        std::function<void(Options&)> tweak;
    };
    const auto layer = [](const char* l) { return [l](Options& o) { o.layer = l; }; };
    const auto stats = [](const char* l, const char* kind) {
        return [l, kind](Options& o) {
            o.layer = l;
            o.stats_kind = kind;
        };
    };
    const std::vector<Step> steps{
        {"validate", cmd_validate, {}},
        {"stats.module", cmd_stats, stats("module", "degree")},
        {"stats.decl", cmd_stats, stats("decl", "degree")},
        {"stats.ns", cmd_stats, stats("ns:1", "degree")},
        {"stats.decl.height", cmd_stats, stats("decl", "height")},
        {"stats.decl.attributes", cmd_stats, stats("decl", "attributes")},
        {"stats.decl.tactics", cmd_stats, stats("decl", "tactics")},
        {"reduce.module", cmd_reduce, layer("module")},
        {"critical-path", cmd_critical_path, {}},
        {"containment.module", cmd_containment, layer("module")},
        {"containment.ns", cmd_containment, layer("ns:1")},
        {"containment.file", cmd_containment, layer("decl")},
        {"cohesion", cmd_cohesion, {}},
        {"utilization", cmd_utilization, {}},
        {"classify-imports", cmd_classify_imports, {}},
        {"aggregate-ns", cmd_aggregate_ns, layer("ns:1")},
        {"pairs", cmd_pairs, layer("ns:1")},
        {"centrality.module", cmd_centrality, layer("module")},
        {"centrality.decl", cmd_centrality, layer("decl")},
        {"community.module", cmd_community, layer("module")},
        {"community.decl", cmd_community, layer("decl")},
        {"compare-partitions", cmd_compare_partitions, layer("decl")},
        {"fit-tail.decl.in", cmd_fit_tail, layer("decl")},
        {"fit-tail.decl.out", cmd_fit_tail, [](Options& o) {
             o.layer = "decl";
             o.direction = "out";
         }},
        {"robustness.module", cmd_robustness, layer("module")},
        {"robustness.decl", cmd_robustness, [](Options& o) {
             o.layer = "decl";
             o.hubs = 0;
         }},
        {"decomp", cmd_decomp, {}},
        {"snapshot-diff", cmd_snapshot_diff, layer("module")},
        {"comod", cmd_comod, {}},
    };
    json index = json::array();
    for (const auto& step : steps) {
        Options o = base;
        if (step.tweak) step.tweak(o);
        json entry{{"report", step.key}};
        try {
            const auto sub = step.run(s, o);
            if (step.key == "validate" && !sub.payload.at("accepted").get<bool>()) validation_failed = true;
            if (!o.out.empty()) {
                publish(sub, o, step.key, out);
                entry["status"] = "written";
            } else {
                entry["status"] = "ok";
                entry["payload"] = sub.payload;
            }
        } catch (const UsageError&) {
            throw;
        } catch (const DataError& e) {
            entry["status"] = "skipped";
            entry["reason"] = e.what();
        } catch (const std::invalid_argument& e) {
            entry["status"] = "skipped";
            entry["reason"] = e.what();
        } catch (const CycleError& e) {
            entry["status"] = "skipped";
            entry["reason"] = e.what();
        }
        index.push_back(std::move(entry));
    }
    r.payload["reports"] = std::move(index);
    return r;
}

void add_common(CLI::App& app, Options& o, CLI::Option*& seed_opt) {
    app.add_option("--manifest", o.manifest, "Dataset manifest (JSON)");
    app.add_option("--layer", o.layer, "module | decl | ns:k");
    app.add_option("--snapshot", o.snapshot, "Snapshot label (default: last listed)");
    seed_opt = app.add_option("--seed", o.seed, "Seed for randomized analyses");
    app.add_option("--out", o.out, "Write reports and curve files into this directory");
    app.add_option("--format", o.format, "Report encoding")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--timing", o.timing, "Record wall time in the envelope");
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

json envelope(const Report& report) {
    json env;
    env["tool"] = "deplens";
    env["version"] = kToolVersion;
    env["command"] = report.command;
    env["manifest_hash"] = report.manifest_hash;
    env["parameters"] = report.parameters;
    env["payload"] = report.payload;
    if (!report.curves.empty()) {
        json names = json::array();
        for (const auto& c : report.curves) names.push_back(c.name);
        env["curves"] = std::move(names);
    }
    if (report.wall_time_s) env["wall_time_s"] = *report.wall_time_s;
    return env;
}

std::vector<fs::path> emit_curves(const Report& report, const fs::path& out_dir) {
    return emit_curves_as(report, out_dir, report.command);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void flatten_into(const json& node, const std::string& key, std::string& out) {
    if (node.is_object() || node.is_array()) {
        if (node.empty()) {
            out += csv_field(key) + ",\n";
            return;
        }
        std::size_t i = 0;
        for (auto it = node.begin(); it != node.end(); ++it, ++i) {
            const std::string part = node.is_object() ? it.key() : std::to_string(i);
            flatten_into(*it, key.empty() ? part : key + "." + part, out);
        }
        return;
    }
    std::string value;
    if (node.is_string()) {
        value = node.get<std::string>();
    } else if (!node.is_null()) {
        value = node.dump();
    }
    out += csv_field(key) + "," + csv_field(value) + "\n";
}

}  // namespace

std::string flatten_csv(const json& doc) {
    std::string out = "key,value\n";
    flatten_into(doc, "", out);
    return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    configure_threads_from_env();
    CLI::App app{"Dependency-network analysis of formal-mathematics libraries", "deplens"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    CLI::Option* seed_opt = nullptr;
    add_common(app, o, seed_opt);

    std::map<std::string, CLI::App*> sub;
    const auto add = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        sub[name] = s;
        return s;
    };
    std::vector<CLI::Option*> depth_opts;
    CLI::Option* pivots_opt = nullptr;
    CLI::Option* xmin_opt = nullptr;

    add("validate", "Load every dataset and report problems");
    add("stats", "Degree, height, attribute or tactic statistics")
        ->add_option("--kind", o.stats_kind)
        ->check(CLI::IsMember({"degree", "height", "attributes", "tactics"}));
    depth_opts.push_back(sub["stats"]->add_option("--depth", o.depth, "Namespace depth for tactic groups"));
    add("reduce", "Transitive reduction and redundancy rate");
    add("critical-path", "Maximum-weight build path");
    depth_opts.push_back(add("containment", "Containment ratio by hierarchy depth")->add_option("--depth", o.depth));
    add("cohesion", "Per-module cohesion of the declaration graph");
    add("utilization", "Import utilization per module edge");
    add("classify-imports", "Active/unused imports and file-edge classes");
    depth_opts.push_back(add("aggregate-ns", "Namespace graph at depth k")->add_option("--depth", o.depth));
    {
        auto* s = add("pairs", "Heaviest cross-namespace pairs");
        depth_opts.push_back(s->add_option("--depth", o.depth));
        s->add_option("--top-k", o.top_k);
    }
    {
        auto* s = add("centrality", "PageRank, betweenness and degree rankings");
        s->add_option("--alpha", o.alpha, "PageRank damping");
        pivots_opt = s->add_option("--pivots", o.pivots, "Sampled betweenness sources");
        s->add_option("--top-k", o.top_k);
    }
    {
        auto* s = add("community", "Louvain communities");
        s->add_option("--resolution", o.resolution);
        s->add_option("--top-k", o.top_k);
    }
    {
        auto* s = add("compare-partitions", "NMI and ARI between two partitions");
        s->add_option("--a", o.partition_a, "community | module | scc | ns:k | prefix:k");
        s->add_option("--b", o.partition_b);
        s->add_option("--resolution", o.resolution);
    }
    {
        auto* s = add("fit-tail", "Discrete power-law fit of a degree sequence");
        s->add_option("--direction", o.direction)->check(CLI::IsMember({"in", "out"}));
        xmin_opt = s->add_option("--xmin", o.xmin, "Fixed lower cutoff");
        s->add_option("--min-samples", o.min_samples);
    }
    {
        auto* s = add("robustness", "Random and targeted removal curves");
        s->add_option("--fractions", o.fractions)->delimiter(',');
        s->add_option("--trials", o.trials);
        s->add_option("--hubs", o.hubs, "Top in-degree nodes removed together");
        s->add_option("--impact-top", o.impact_top, "Top PageRank nodes removed one at a time");
        s->add_option("--node", o.nodes, "Extra node for single-removal impact");
    }
    add("decomp", "Edge partitions, subgraph views, kind flow, depth measures")->add_option("--top-k", o.top_k);
    {
        auto* s = add("snapshot-diff", "Growth, hub turnover and community persistence");
        s->add_option("--from", o.from);
        s->add_option("--to", o.to);
        s->add_option("--top-k", o.top_k);
        s->add_option("--resolution", o.resolution);
    }
    add("comod", "Co-modification graph against imports");
    add("report-all", "Every analysis into --out");

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitCode::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ExitCode::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return ExitCode::usage_error;
    }
    o.has_seed = seed_opt->count() > 0;
    o.has_depth = std::any_of(depth_opts.begin(), depth_opts.end(), [](CLI::Option* d) { return d->count() > 0; });
    o.has_pivots = pivots_opt->count() > 0;
    o.has_xmin = xmin_opt->count() > 0;

    const std::map<std::string, Command> commands{
        {"validate", cmd_validate},
        {"stats", cmd_stats},
        {"reduce", cmd_reduce},
        {"critical-path", cmd_critical_path},
        {"containment", cmd_containment},
        {"cohesion", cmd_cohesion},
        {"utilization", cmd_utilization},
        {"classify-imports", cmd_classify_imports},
        {"aggregate-ns", cmd_aggregate_ns},
        {"pairs", cmd_pairs},
        {"centrality", cmd_centrality},
        {"community", cmd_community},
        {"compare-partitions", cmd_compare_partitions},
        {"fit-tail", cmd_fit_tail},
        {"robustness", cmd_robustness},
        {"decomp", cmd_decomp},
        {"snapshot-diff", cmd_snapshot_diff},
        {"comod", cmd_comod},
    };
    std::string name;
    for (const auto& [n, s] : sub) {
        if (s->parsed()) name = n;
    }

    try {
        parse_layer(o.layer);
        Session session(o);
        const auto t0 = std::chrono::steady_clock::now();
        bool failed = false;
        Report report;
        if (name == "report-all") {
            if (o.out.empty()) throw UsageError("report-all requires --out");
            report = cmd_report_all(session, o, out, failed);
        } else {
            report = commands.at(name)(session, o);
            if (name == "validate") failed = !report.payload.at("accepted").get<bool>();
        }
        if (o.timing) {
            report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        publish(report, o, name, out);
        return failed ? ExitCode::data_failure : ExitCode::ok;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::usage_error;
    } catch (const IngestError& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::data_failure;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::data_failure;
    } catch (const CycleError& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::data_failure;
    } catch (const GraphError& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::data_failure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::data_failure;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return ExitCode::internal_error;
    }
}

}  // namespace deplens::cli
