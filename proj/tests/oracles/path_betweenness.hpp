#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "deplens/graph.hpp"

namespace oracle {

/// Betweenness from all-pairs shortest-path counts: for each ordered pair
/// (s,t), v carries sigma_sv * sigma_vt / sigma_st when it lies on a
/// shortest s-t path. Unnormalized.
inline std::vector<double> path_betweenness(const deplens::DepGraph& g) {
    const std::size_t n = g.node_count();
    constexpr int inf = std::numeric_limits<int>::max() / 4;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& e : g.edges()) d[e.src][e.dst] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];

    // sigma[s][t]: number of shortest s-t paths, by counting walks along tight edges.
    std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
    for (std::size_t s = 0; s < n; ++s) {
        sigma[s][s] = 1.0;
        int maxd = 0;
        for (std::size_t t = 0; t < n; ++t)
            if (d[s][t] < inf && d[s][t] > maxd) maxd = d[s][t];
        for (int len = 1; len <= maxd; ++len)
            for (const auto& e : g.edges())
                if (d[s][e.src] == len - 1 && d[s][e.dst] == len) sigma[s][e.dst] += sigma[s][e.src];
    }
    std::vector<double> bc(n, 0.0);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t) {
            if (s == t || d[s][t] >= inf) continue;
            for (std::size_t v = 0; v < n; ++v) {
                if (v == s || v == t) continue;
                if (d[s][v] + d[v][t] == d[s][t]) bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
            }
        }
    return bc;
}

}  // namespace oracle
