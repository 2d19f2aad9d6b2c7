#include "deplens/ingest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "deplens/structure.hpp"

namespace deplens {

using nlohmann::json;

namespace {

std::string issue_text(const Issue& issue) {
    std::ostringstream os;
    os << issue.file;
    if (issue.line) os << ':' << issue.line;
    os << ": " << issue.code << ": " << issue.message;
    return os.str();
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError({path.string(), 0, "unreadable_file", "cannot open file"});
    return in;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::optional<Flag> parse_flag(std::string_view s) {
    s = trim(s);
    if (s == "1" || s == "true") return Flag::yes;
    if (s == "0" || s == "false") return Flag::no;
    if (s == "?" || s.empty()) return Flag::unknown;
    return std::nullopt;
}

char flag_char(Flag f) { return f == Flag::yes ? '1' : f == Flag::no ? '0' : '?'; }

std::vector<std::string> string_list(const json& value) {
    std::vector<std::string> out;
    if (!value.is_array()) throw std::invalid_argument("expected a list of strings");
    for (const auto& item : value) out.push_back(item.get<std::string>());
    return out;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

IngestError::IngestError(Issue issue) : std::runtime_error(issue_text(issue)), issue_(std::move(issue)) {}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

NodeLoad read_nodes(std::istream& in, const NodeFieldMap& fields, const std::string& source) {
    NodeLoad out;
    std::unordered_map<std::string, std::size_t> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fail = [&](std::string code, std::string message) {
            out.errors.push_back({source, line_no, std::move(code), std::move(message)});
        };
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& ex) {
            fail("malformed", ex.what());
            continue;
        }
        if (!obj.is_object() || !obj.contains(fields.name) || !obj.contains(fields.kind)) {
            fail("malformed", "record needs '" + fields.name + "' and '" + fields.kind + "'");
            continue;
        }
        try {
            NodeRecord rec;
            const auto name = obj.at(fields.name).get<std::string>();
            rec.name = DottedName::parse(name);
            const auto kind_text = obj.at(fields.kind).get<std::string>();
            const auto kind = parse_node_kind(kind_text);
            if (!kind) {
                fail("unknown_kind", "unknown kind '" + kind_text + "'");
                continue;
            }
            rec.kind = *kind;
            if (auto it = obj.find(fields.module); it != obj.end() && !it->is_null()) {
                rec.module = DottedName::parse(path_to_module_name(it->get<std::string>()));
            }
            if (auto it = obj.find(fields.attributes); it != obj.end() && !it->is_null()) {
                auto attrs = string_list(*it);
                std::sort(attrs.begin(), attrs.end());
                attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
                rec.attributes = std::move(attrs);
            }
            if (auto it = obj.find(fields.def_height); it != obj.end() && !it->is_null()) {
                if (it->is_number_integer()) {
                    const auto h = it->get<std::int64_t>();
                    if (h < 0 || h > DefHeight::kMaxRegular) {
                        fail("malformed", "def_height out of range");
                        continue;
                    }
                    rec.def_height = DefHeight{DefHeight::Kind::regular, static_cast<std::uint32_t>(h)};
                } else {
                    const auto text = it->get<std::string>();
                    if (text == "abbrev" || text == "abbreviation") {
                        rec.def_height = DefHeight{DefHeight::Kind::abbreviation, 0};
                    } else if (text == "opaque") {
                        rec.def_height = DefHeight{DefHeight::Kind::opaque, 0};
                    } else {
                        fail("malformed", "def_height must be an integer, \"abbrev\" or \"opaque\"");
                        continue;
                    }
                }
            }
            if (auto it = obj.find(fields.tactics); it != obj.end() && !it->is_null()) {
                rec.tactics = string_list(*it);
            }
            if (auto it = obj.find(fields.marker); it != obj.end() && !it->is_null()) {
                rec.marker = it->get<std::string>();
            }
            if (auto [it, inserted] = seen.emplace(name, line_no); !inserted) {
                fail("duplicate_name", "name '" + name + "' already declared on line " + std::to_string(it->second));
                continue;
            }
            rec.id = static_cast<NodeId>(out.records.size());
            out.records.push_back(std::move(rec));
        } catch (const std::exception& ex) {
            fail("malformed", ex.what());
        }
    }
    return out;
}

std::vector<NodeRecord> load_nodes(const std::filesystem::path& path, const NodeFieldMap& fields) {
    auto in = open_input(path);
    auto loaded = read_nodes(in, fields, path.string());
    if (!loaded.errors.empty()) throw IngestError(loaded.errors.front());
    return std::move(loaded.records);
}

NameIndex make_name_index(const std::vector<NodeRecord>& nodes) {
    NameIndex index;
    index.reserve(nodes.size());
    for (const auto& n : nodes) index.emplace(n.name.str(), n.id);
    return index;
}

EdgeLoad read_edges(std::istream& in, const NameIndex& index, const EdgeColumnMap& columns, const std::string& source) {
    EdgeLoad out;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        header = split_csv_line(line);
        for (auto& h : header) h = std::string(trim(h));
        break;
    }
    if (header.empty()) return out;

    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto c_src = column(columns.src);
    const auto c_dst = column(columns.dst);
    if (!c_src || !c_dst) {
        out.errors.push_back({source, line_no, "malformed", "header lacks '" + columns.src + "' or '" + columns.dst + "'"});
        return out;
    }
    const auto c_origin = column(columns.origin);
    const auto c_synth = column(columns.synth);
    const auto c_auto = column(columns.auto_derived);
    const auto c_vis = column(columns.visibility);
    const auto c_weight = column(columns.weight);
    const auto c_tags = column(columns.tags);

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++out.rows;
        const auto f = split_csv_line(line);
        auto fail = [&](std::string message) { out.errors.push_back({source, line_no, "malformed", std::move(message)}); };
        auto get = [&](std::optional<std::size_t> c) -> std::string_view {
            if (!c || *c >= f.size()) return {};
            return trim(f[*c]);
        };
        if (f.size() > header.size() || *c_src >= f.size() || *c_dst >= f.size()) {
            fail("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
            continue;
        }
        EdgeRecord rec;
        if (const auto o = get(c_origin); !o.empty()) {
            const auto origin = parse_origin(o);
            if (!origin) {
                fail("unknown origin '" + std::string(o) + "'");
                continue;
            }
            rec.origin = *origin;
        }
        const auto synth = parse_flag(get(c_synth));
        const auto autod = parse_flag(get(c_auto));
        if (!synth || !autod) {
            fail("flags must be 0, 1 or ?");
            continue;
        }
        rec.synthesized = *synth;
        rec.auto_derived = *autod;
        if (const auto v = get(c_vis); !v.empty()) {
            if (v == "public") {
                rec.visibility = Visibility::public_;
            } else if (v == "private") {
                rec.visibility = Visibility::private_;
            } else {
                fail("unknown visibility '" + std::string(v) + "'");
                continue;
            }
        }
        if (const auto w = get(c_weight); !w.empty()) {
            const auto value = parse_number(w);
            if (!value) {
                fail("weight is not a number");
                continue;
            }
            if (*value < 0) {
                out.errors.push_back({source, line_no, "negative_weight", "weight must be nonnegative"});
                continue;
            }
            rec.weight = *value;
        }
        if (const auto t = get(c_tags); !t.empty()) {
            std::size_t start = 0;
            while (start <= t.size()) {
                const auto semi = t.find(';', start);
                const auto piece = trim(t.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start));
                if (!piece.empty()) rec.tags.emplace_back(piece);
                if (semi == std::string_view::npos) break;
                start = semi + 1;
            }
            std::sort(rec.tags.begin(), rec.tags.end());
        }
        const auto src = index.find(std::string(get(c_src)));
        const auto dst = index.find(std::string(get(c_dst)));
        if (src == index.end() || dst == index.end()) {
            ++out.unresolved;
            if (out.unresolved_rows.size() < 100) {
                const auto missing = src == index.end() ? get(c_src) : get(c_dst);
                out.unresolved_rows.push_back({source, line_no, "unresolved_endpoint", "unknown name '" + std::string(missing) + "'"});
            }
            continue;
        }
        rec.src = src->second;
        rec.dst = dst->second;
        out.edges.push_back(std::move(rec));
    }
    return out;
}

EdgeLoad load_edges(const std::filesystem::path& path, const NameIndex& index, const EdgeColumnMap& columns) {
    auto in = open_input(path);
    auto loaded = read_edges(in, index, columns, path.string());
    if (!loaded.errors.empty()) throw IngestError(loaded.errors.front());
    return loaded;
}

BuildWeights read_build_weights(std::istream& in, const std::string& source) {
    BuildWeights out;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 2) throw IngestError({source, line_no, "malformed", "expected 'module,seconds'"});
        const auto value = parse_number(f[1]);
        if (first && !value && trim(f[0]) == "module") {
            first = false;
            continue;
        }
        first = false;
        if (!value) throw IngestError({source, line_no, "malformed", "weight is not a number"});
        if (*value < 0) throw IngestError({source, line_no, "negative_weight", "weight must be nonnegative"});
        out.seconds[path_to_module_name(trim(f[0]))] = *value;
    }
    if (out.seconds.empty()) out.warnings.push_back({source, 0, "empty_weights", "no build weights found"});
    return out;
}

BuildWeights load_build_weights(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_build_weights(in, path.string());
}

std::vector<double> node_weights(const DepGraph& g, const BuildWeights& weights, std::vector<Issue>* warnings) {
    std::vector<double> w(g.node_count(), 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto name = g.name(v);
        if (auto it = weights.seconds.find(name); it != weights.seconds.end()) {
            w[v] = it->second;
        } else if (warnings) {
            warnings->push_back({"", 0, "missing_weight", "no build weight for '" + name + "', using 0"});
        }
    }
    return w;
}

std::vector<PullRequest> read_comod(std::istream& in, const std::string& source) {
    std::vector<PullRequest> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        PullRequest pr;
        try {
            const auto obj = json::parse(line);
            const auto& id = obj.at("pr_id");
            pr.pr_id = id.is_string() ? id.get<std::string>() : id.dump();
            std::set<std::string> files;
            for (const auto& f : string_list(obj.at("files"))) {
                files.insert(DottedName::parse(path_to_module_name(f)).str());
            }
            pr.files.assign(files.begin(), files.end());
        } catch (const std::exception& ex) {
            throw IngestError({source, line_no, "malformed", ex.what()});
        }
        if (pr.files.empty()) throw IngestError({source, line_no, "empty_file_list", "pull request lists no files"});
        out.push_back(std::move(pr));
    }
    return out;
}

std::vector<PullRequest> load_comod(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_comod(in, path.string());
}

Manifest load_manifest(const std::filesystem::path& path) {
    auto in = open_input(path);
    Manifest manifest;
    const auto base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        const std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };
    try {
        const auto doc = json::parse(in);
        for (const auto& d : doc.at("datasets")) {
            DatasetManifest ds;
            const auto layer = d.at("layer").get<std::string>();
            if (layer == "module") {
                ds.layer = Layer::module;
            } else if (layer == "declaration" || layer == "decl") {
                ds.layer = Layer::declaration;
            } else {
                throw std::invalid_argument("unknown layer '" + layer + "'");
            }
            ds.node_path = resolve(d.at("nodes").get<std::string>());
            ds.edge_path = resolve(d.at("edges").get<std::string>());
            if (d.contains("weights")) ds.weight_path = resolve(d.at("weights").get<std::string>());
            if (d.contains("comod")) ds.comod_path = resolve(d.at("comod").get<std::string>());
            ds.snapshot_label = d.value("snapshot", std::string{});
            ds.content_hash = d.value("hash", std::string{});
            manifest.datasets.push_back(std::move(ds));
        }
        if (doc.contains("columns")) {
            const auto& c = doc.at("columns");
            if (c.contains("nodes")) {
                const auto& n = c.at("nodes");
                auto& f = manifest.columns.nodes;
                f.name = n.value("name", f.name);
                f.kind = n.value("kind", f.kind);
                f.module = n.value("module", f.module);
                f.attributes = n.value("attributes", f.attributes);
                f.def_height = n.value("def_height", f.def_height);
                f.tactics = n.value("tactics", f.tactics);
                f.marker = n.value("marker", f.marker);
            }
            if (c.contains("edges")) {
                const auto& e = c.at("edges");
                auto& f = manifest.columns.edges;
                f.src = e.value("src", f.src);
                f.dst = e.value("dst", f.dst);
                f.origin = e.value("origin", f.origin);
                f.synth = e.value("synth", f.synth);
                f.auto_derived = e.value("auto", f.auto_derived);
                f.visibility = e.value("visibility", f.visibility);
                f.weight = e.value("weight", f.weight);
                f.tags = e.value("tags", f.tags);
            }
        }
    } catch (const IngestError&) {
        throw;
    } catch (const std::exception& ex) {
        throw IngestError({path.string(), 0, "malformed_manifest", ex.what()});
    }
    return manifest;
}

namespace {

struct DigestDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

void hash_file(EVP_MD_CTX* ctx, const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const auto got = in.gcount();
        if (got > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(got));
    }
    const char sep = '\0';
    EVP_DigestUpdate(ctx, &sep, 1);
}

std::string finish_hex(EVP_MD_CTX* ctx) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

void hash_dataset(EVP_MD_CTX* ctx, const DatasetManifest& ds) {
    hash_file(ctx, ds.node_path);
    hash_file(ctx, ds.edge_path);
    if (ds.weight_path) hash_file(ctx, *ds.weight_path);
    if (ds.comod_path) hash_file(ctx, *ds.comod_path);
}

}  // namespace

std::string compute_content_hash(const DatasetManifest& dataset) {
    std::unique_ptr<EVP_MD_CTX, DigestDeleter> ctx(EVP_MD_CTX_new());
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    hash_dataset(ctx.get(), dataset);
    return finish_hex(ctx.get());
}

std::string compute_manifest_hash(const Manifest& manifest) {
    std::unique_ptr<EVP_MD_CTX, DigestDeleter> ctx(EVP_MD_CTX_new());
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    for (const auto& ds : manifest.datasets) {
        EVP_DigestUpdate(ctx.get(), ds.snapshot_label.data(), ds.snapshot_label.size());
        hash_dataset(ctx.get(), ds);
    }
    return finish_hex(ctx.get());
}

LoadedLayer load_layer(const DatasetManifest& dataset, const ColumnMapping& columns) {
    LoadedLayer out;
    auto nodes = load_nodes(dataset.node_path, columns.nodes);
    const auto index = make_name_index(nodes);
    auto edges = load_edges(dataset.edge_path, index, columns.edges);
    out.edge_rows = edges.rows;
    out.unresolved_edges = edges.unresolved;
    out.warnings = std::move(edges.unresolved_rows);
    std::vector<EdgeRecord> kept;
    kept.reserve(edges.edges.size());
    for (auto& e : edges.edges) {
        if (e.src == e.dst) {
            ++out.self_edges_dropped;
            continue;
        }
        kept.push_back(std::move(e));
    }
    try {
        out.graph = build_graph(std::move(nodes), std::move(kept));
    } catch (const GraphError& ex) {
        throw IngestError({dataset.edge_path.string(), 0, "duplicate_edge", ex.what()});
    }
    return out;
}

ValidationReport validate(const Manifest& manifest) {
    ValidationReport report;
    auto append = [](std::vector<Issue>& to, const std::vector<Issue>& from) { to.insert(to.end(), from.begin(), from.end()); };
    for (const auto& ds : manifest.datasets) {
        const std::string prefix = (ds.layer == Layer::module ? "module" : "declaration") +
                                   (ds.snapshot_label.empty() ? std::string{} : "@" + ds.snapshot_label);
        if (!ds.content_hash.empty()) {
            try {
                const auto actual = compute_content_hash(ds);
                if (actual != ds.content_hash) {
                    report.errors.push_back({ds.node_path.string(), 0, "hash_mismatch",
                                             "recorded " + ds.content_hash + ", computed " + actual});
                }
            } catch (const IngestError& ex) {
                report.errors.push_back(ex.issue());
                continue;
            }
        }
        NodeLoad nodes;
        EdgeLoad edges;
        try {
            auto nin = open_input(ds.node_path);
            nodes = read_nodes(nin, manifest.columns.nodes, ds.node_path.string());
            auto ein = open_input(ds.edge_path);
            edges = read_edges(ein, make_name_index(nodes.records), manifest.columns.edges, ds.edge_path.string());
        } catch (const IngestError& ex) {
            report.errors.push_back(ex.issue());
            continue;
        }
        append(report.errors, nodes.errors);
        append(report.errors, edges.errors);
        append(report.warnings, edges.unresolved_rows);
        report.counts[prefix + ".nodes"] = nodes.records.size();
        report.counts[prefix + ".edge_rows"] = edges.rows;
        report.counts[prefix + ".edges_resolved"] = edges.edges.size();
        report.counts[prefix + ".edges_unresolved"] = edges.unresolved;

        if (ds.weight_path) {
            try {
                const auto w = load_build_weights(*ds.weight_path);
                append(report.warnings, w.warnings);
                report.counts[prefix + ".build_weights"] = w.seconds.size();
            } catch (const IngestError& ex) {
                report.errors.push_back(ex.issue());
            }
        }
        if (ds.comod_path) {
            try {
                report.counts[prefix + ".pull_requests"] = load_comod(*ds.comod_path).size();
            } catch (const IngestError& ex) {
                report.errors.push_back(ex.issue());
            }
        }

        std::vector<EdgeRecord> kept;
        std::size_t self_edges = 0;
        for (auto& e : edges.edges) {
            if (e.src == e.dst) {
                ++self_edges;
            } else {
                kept.push_back(std::move(e));
            }
        }
        if (self_edges) {
            report.warnings.push_back({ds.edge_path.string(), 0, "self_edge", std::to_string(self_edges) + " self-edges dropped"});
        }
        DepGraph g;
        try {
            g = build_graph(std::move(nodes.records), std::move(kept));
        } catch (const GraphError& ex) {
            report.errors.push_back({ds.edge_path.string(), 0, "duplicate_edge", ex.what()});
            continue;
        }
        const auto scc = connected_components(g, Connectivity::strong);
        std::vector<std::vector<NodeId>> members(scc.sizes().size());
        for (NodeId v = 0; v < g.node_count(); ++v) {
            if (scc.sizes()[scc[v]] > 1) members[scc[v]].push_back(v);
        }
        std::size_t tolerated = 0;
        for (const auto& comp : members) {
            if (comp.empty()) continue;
            const bool structural = std::all_of(comp.begin(), comp.end(), [&](NodeId v) {
                const auto k = g.node(v).kind;
                return k == NodeKind::inductive || k == NodeKind::constructor;
            });
            std::string names;
            for (std::size_t i = 0; i < comp.size() && i < 5; ++i) names += (i ? ", " : "") + g.name(comp[i]);
            if (ds.layer == Layer::declaration && structural) {
                ++tolerated;
            } else {
                report.errors.push_back({ds.edge_path.string(), 0, "cycle",
                                         "cycle among " + std::to_string(comp.size()) + " nodes: " + names});
            }
        }
        if (tolerated) {
            report.warnings.push_back({ds.edge_path.string(), 0, "inductive_cycle",
                                       std::to_string(tolerated) + " inductive/constructor cycles tolerated"});
        }
    }
    return report;
}

void write_nodes(std::ostream& out, const std::vector<NodeRecord>& nodes, const NodeFieldMap& fields) {
    for (const auto& n : nodes) {
        json obj = json::object();
        obj[fields.name] = n.name.str();
        obj[fields.kind] = std::string(to_string(n.kind));
        if (n.module) obj[fields.module] = n.module->str();
        if (n.attributes) obj[fields.attributes] = *n.attributes;
        if (n.def_height) {
            switch (n.def_height->kind) {
                case DefHeight::Kind::regular: obj[fields.def_height] = n.def_height->value; break;
                case DefHeight::Kind::abbreviation: obj[fields.def_height] = "abbrev"; break;
                case DefHeight::Kind::opaque: obj[fields.def_height] = "opaque"; break;
            }
        }
        if (n.tactics) obj[fields.tactics] = *n.tactics;
        if (n.marker) obj[fields.marker] = *n.marker;
        out << obj.dump() << '\n';
    }
}

void write_edges(std::ostream& out, const std::vector<NodeRecord>& nodes, const std::vector<EdgeRecord>& edges,
                 const EdgeColumnMap& columns) {
    out << columns.src << ',' << columns.dst << ',' << columns.origin << ',' << columns.synth << ','
        << columns.auto_derived << ',' << columns.visibility << ',' << columns.weight << ',' << columns.tags << '\n';
    for (const auto& e : edges) {
        std::string tags;
        for (std::size_t i = 0; i < e.tags.size(); ++i) tags += (i ? ";" : "") + e.tags[i];
        out << csv_field(nodes[e.src].name.str()) << ',' << csv_field(nodes[e.dst].name.str()) << ','
            << to_string(e.origin) << ',' << flag_char(e.synthesized) << ',' << flag_char(e.auto_derived) << ','
            << (e.visibility ? (*e.visibility == Visibility::public_ ? "public" : "private") : "") << ','
            << format_double(e.weight) << ',' << csv_field(tags) << '\n';
    }
}

}  // namespace deplens
