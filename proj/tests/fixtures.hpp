#pragma once

#include "asymde/ensemble.hpp"

namespace asymde::testfix {

// Six-variable, four-check multigraph with one double edge (v3 to c1,
// zero-indexed). Its parity matrix under the odd-multiplicity rule is
//   1 1 1 0 0 0
//   0 0 0 0 0 1
//   0 1 1 0 1 0
//   1 0 0 0 1 1
// and the null space has dimension 3.
inline ensemble::BipartiteGraph small_multigraph() {
    ensemble::BipartiteGraph g;
    g.n = 6;
    g.m = 4;
    const int adj[4][3] = {{0, 1, 2}, {3, 3, 5}, {1, 2, 4}, {0, 4, 5}};
    g.var_degree.assign(6, 0);
    g.chk_degree.assign(4, 3);
    g.var_edges.resize(6);
    g.chk_edges.resize(4);
    for (int c = 0; c < 4; ++c)
        for (int k = 0; k < 3; ++k) {
            const int v = adj[c][k];
            const auto e = static_cast<std::uint32_t>(g.edge_var.size());
            g.edge_var.push_back(v);
            g.edge_chk.push_back(c);
            g.var_edges[v].push_back(e);
            g.chk_edges[c].push_back(e);
            ++g.var_degree[v];
        }
    return g;
}

// Two variables and two checks joined by a four-cycle.
inline ensemble::BipartiteGraph four_cycle_graph() {
    ensemble::BipartiteGraph g;
    g.n = 2;
    g.m = 2;
    g.var_degree.assign(2, 2);
    g.chk_degree.assign(2, 2);
    g.var_edges.resize(2);
    g.chk_edges.resize(2);
    const int pairs[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (const auto& [v, c] : pairs) {
        const auto e = static_cast<std::uint32_t>(g.edge_var.size());
        g.edge_var.push_back(v);
        g.edge_chk.push_back(c);
        g.var_edges[v].push_back(e);
        g.chk_edges[c].push_back(e);
    }
    return g;
}

}  // namespace asymde::testfix
