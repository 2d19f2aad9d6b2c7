#include "deplens/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "deplens/community.hpp"

namespace deplens {
namespace {

/// Average ranks (1-based) of `values`, highest value first.
std::vector<double> descending_ranks(const std::vector<double>& values) {
    std::vector<std::size_t> idx(values.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
    std::vector<double> rank(values.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && values[idx[j]] == values[idx[i]]) ++j;
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) rank[idx[t]] = r;
        i = j;
    }
    return rank;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return x == y ? 1.0 : 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Names of `g` with a counterpart in `other`, paired with both node ids.
std::vector<std::pair<NodeId, NodeId>> shared_nodes(const DepGraph& g, const DepGraph& other) {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (const auto w = other.find(g.name(v))) out.emplace_back(v, *w);
    }
    return out;
}

}  // namespace

std::vector<GrowthRow> growth_indicators(const std::vector<Snapshot>& series) {
    if (series.empty()) throw std::invalid_argument("growth_indicators: empty series");
    std::set<std::string> seen;
    std::vector<GrowthRow> out;
    for (const auto& s : series) {
        if (!seen.insert(s.label).second) throw std::invalid_argument("growth_indicators: repeated label " + s.label);
        GrowthRow row;
        row.label = s.label;
        if (s.declarations) {
            row.declarations = s.declarations->node_count();
            row.edges = s.declarations->edge_count();
        }
        if (s.modules) row.modules = s.modules->node_count();
        row.density = row.declarations ? static_cast<double>(row.edges) / static_cast<double>(row.declarations) : 0.0;
        out.push_back(std::move(row));
    }
    return out;
}

HubTurnover hub_turnover(const DepGraph& a, const DepGraph& b, std::size_t k) {
    if (k < 2) throw std::invalid_argument("hub_turnover: k must be >= 2");
    const auto shared = shared_nodes(a, b);
    if (shared.empty()) throw std::invalid_argument("hub_turnover: graphs share no node names");

    // Top-k of each graph among shared nodes, ties by name.
    const auto top = [&](bool first) {
        std::vector<std::size_t> idx(shared.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        const auto& g = first ? a : b;
        const auto id = [&](std::size_t i) { return first ? shared[i].first : shared[i].second; };
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
            const auto dx = g.in_degree(id(x));
            const auto dy = g.in_degree(id(y));
            if (dx != dy) return dx > dy;
            return g.name(id(x)) < g.name(id(y));
        });
        idx.resize(std::min(k, idx.size()));
        return idx;
    };
    const auto ta = top(true);
    const auto tb = top(false);
    std::set<std::size_t> in_a(ta.begin(), ta.end()), in_b(tb.begin(), tb.end());
    std::set<std::size_t> members = in_a;
    members.insert(tb.begin(), tb.end());

    // Absent nodes get -1, below every real in-degree, so they tie at the last rank.
    std::vector<double> va, vb;
    for (auto i : members) {
        va.push_back(in_a.count(i) ? static_cast<double>(a.in_degree(shared[i].first)) : -1.0);
        vb.push_back(in_b.count(i) ? static_cast<double>(b.in_degree(shared[i].second)) : -1.0);
    }
    HubTurnover out;
    out.union_size = members.size();
    out.shared_names = shared.size();
    out.spearman = pearson(descending_ranks(va), descending_ranks(vb));
    return out;
}

double community_persistence(const DepGraph& a, const Partition& pa, const DepGraph& b, const Partition& pb) {
    if (pa.node_count() != a.node_count() || pb.node_count() != b.node_count()) {
        throw std::invalid_argument("community_persistence: partition does not match its graph");
    }
    const auto shared = shared_nodes(a, b);
    if (shared.empty()) throw std::invalid_argument("community_persistence: graphs share no node names");
    std::vector<GroupId> la, lb;
    la.reserve(shared.size());
    lb.reserve(shared.size());
    for (const auto& [x, y] : shared) {
        la.push_back(pa[x]);
        lb.push_back(pb[y]);
    }
    return compare_partitions(la, lb).nmi;
}

ComodGraph build_comod_graph(const std::vector<PullRequest>& prs) {
    ComodGraph out;
    std::set<std::string> names;
    for (const auto& pr : prs) names.insert(pr.files.begin(), pr.files.end());
    out.modules.assign(names.begin(), names.end());
    std::unordered_map<std::string, std::size_t> id;
    for (std::size_t i = 0; i < out.modules.size(); ++i) id.emplace(out.modules[i], i);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> weight;
    for (const auto& pr : prs) {
        std::vector<std::size_t> f;
        for (const auto& file : pr.files) f.push_back(id.at(file));
        std::sort(f.begin(), f.end());
        f.erase(std::unique(f.begin(), f.end()), f.end());
        for (std::size_t i = 0; i < f.size(); ++i) {
            for (std::size_t j = i + 1; j < f.size(); ++j) ++weight[{f[i], f[j]}];
        }
    }
    for (const auto& [key, w] : weight) out.edges.push_back({key.first, key.second, w});
    return out;
}

std::string to_string(PairClass cls) {
    switch (cls) {
        case PairClass::both: return "both";
        case PairClass::comod_only: return "comod_only";
        case PairClass::import_only: return "import_only";
    }
    return "unknown";
}

ComodComparison comod_vs_imports(const ComodGraph& comod, const DepGraph& modules) {
    std::map<std::pair<std::string, std::string>, ModulePair> pairs;
    const auto key = [](std::string x, std::string y) {
        if (y < x) std::swap(x, y);
        return std::make_pair(std::move(x), std::move(y));
    };
    for (const auto& e : comod.edges) {
        auto k = key(comod.modules[e.a], comod.modules[e.b]);
        pairs[k] = {k.first, k.second, PairClass::comod_only, e.weight};
    }
    for (const auto& e : modules.edges()) {
        auto k = key(modules.name(e.src), modules.name(e.dst));
        auto it = pairs.find(k);
        if (it == pairs.end()) {
            pairs.emplace(k, ModulePair{k.first, k.second, PairClass::import_only, 0});
        } else if (it->second.cls == PairClass::comod_only) {
            it->second.cls = PairClass::both;
        }
    }
    ComodComparison out;
    for (auto& [k, p] : pairs) {
        switch (p.cls) {
            case PairClass::both: ++out.both; break;
            case PairClass::comod_only: ++out.comod_only; break;
            case PairClass::import_only: ++out.import_only; break;
        }
        out.pairs.push_back(std::move(p));
    }
    return out;
}

}  // namespace deplens
