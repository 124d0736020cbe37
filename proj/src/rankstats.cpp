#include "asymde/rankstats.hpp"

#include <algorithm>
#include <cmath>

namespace asymde::rankstats {

SupportTree build_support_tree(const ensemble::BipartiteGraph& g, std::size_t i, std::size_t j,
                               int l) {
    std::uint32_t root_edge = UINT32_MAX;
    for (const auto e : g.var_edges[i])
        if (g.edge_chk[e] == j) {
            root_edge = e;
            break;
        }
    if (root_edge == UINT32_MAX)
        throw NotAnEdge("no edge between variable " + std::to_string(i) + " and check " +
                        std::to_string(j));

    SupportTree tree;
    tree.root_var = i;
    tree.root_chk = j;
    tree.l = l;

    std::vector<char> var_in(g.n, 0), chk_in(g.m, 0);
    var_in[i] = 1;
    // root check is a member from the start; re-entry through a parallel
    // edge or a cycle must not duplicate it in the member list
    chk_in[j] = 1;
    std::vector<std::size_t> var_order{i};
    std::vector<std::size_t> chk_order;  // non-root members, BFS order

    // l-1 rounds of var -> chk -> var expansion reach depth 2(l-1)
    std::vector<std::size_t> frontier{i};
    for (int step = 0; step < l - 1 && !frontier.empty(); ++step) {
        std::vector<std::size_t> next_chk;
        for (const auto v : frontier)
            for (const auto e : g.var_edges[v]) {
                if (e == root_edge) continue;
                const std::size_t c = g.edge_chk[e];
                if (chk_in[c]) continue;
                chk_in[c] = 1;
                next_chk.push_back(c);
            }
        std::vector<std::size_t> next_var;
        for (const auto c : next_chk) {
            chk_order.push_back(c);
            for (const auto e : g.chk_edges[c]) {
                const std::size_t v = g.edge_var[e];
                if (var_in[v]) continue;
                var_in[v] = 1;
                var_order.push_back(v);
                next_var.push_back(v);
            }
        }
        frontier = std::move(next_var);
    }

    tree.variables = var_order;
    std::sort(tree.variables.begin(), tree.variables.end());
    tree.checks.push_back(j);
    tree.checks.insert(tree.checks.end(), chk_order.begin(), chk_order.end());

    tree.constraints = gf2::GF2Matrix(chk_order.size(), tree.variables.size());
    auto col_of = [&](std::size_t v) {
        return static_cast<std::size_t>(
            std::lower_bound(tree.variables.begin(), tree.variables.end(), v) -
            tree.variables.begin());
    };
    for (std::size_t r = 0; r < chk_order.size(); ++r)
        for (const auto e : g.chk_edges[chk_order[r]])
            tree.constraints.flip(r, col_of(g.edge_var[e]));

    // induced edge count over member nodes, root check included
    std::size_t induced = 0;
    for (std::size_t e = 0; e < g.edges(); ++e)
        if (var_in[g.edge_var[e]] && chk_in[g.edge_chk[e]]) ++induced;
    tree.cycle_free = induced + 1 == tree.variables.size() + tree.checks.size();
    return tree;
}

namespace {

std::uint64_t project(const gf2::BitVec& cw, const std::vector<std::size_t>& vars) {
    std::uint64_t w = 0;
    for (std::size_t k = 0; k < vars.size(); ++k)
        if (gf2::bv_get(cw, vars[k])) w |= std::uint64_t{1} << k;
    return w;
}

}  // namespace

ProjectionAudit perfect_projection_audit(const gf2::GF2Matrix& a, const SupportTree& tree,
                                         std::size_t cap) {
    if (tree.variables.size() > 64)
        throw std::invalid_argument("tree projection wider than 64 variables");
    ProjectionAudit audit;
    const std::size_t cdim = tree.variables.size() - gf2::rank(tree.constraints);
    audit.tree_satisfying = std::size_t{1} << cdim;

    for (const auto& cw : gf2::enumerate_codewords(a, cap))
        ++audit.histogram[project(cw, tree.variables)];

    if (audit.histogram.size() != audit.tree_satisfying) return audit;
    const std::size_t count = audit.histogram.begin()->second;
    for (const auto& [w, c] : audit.histogram)
        if (c != count) return audit;
    audit.is_perfect = true;
    return audit;
}

bool perfect_projection_rank(const gf2::GF2Matrix& a, const SupportTree& tree) {
    const gf2::GF2Basis basis = gf2::null_space_basis(a);
    gf2::GF2Matrix proj(basis.size(), tree.variables.size());
    for (std::size_t r = 0; r < basis.size(); ++r)
        for (std::size_t k = 0; k < tree.variables.size(); ++k)
            if (gf2::bv_get(basis.rows[r], tree.variables[k])) proj.set(r, k, true);
    const std::size_t realized = gf2::rank(proj);
    const std::size_t satisfying = tree.variables.size() - gf2::rank(tree.constraints);
    return realized == satisfying;
}

std::vector<RankEstimate> estimate_E2mr(int dv, int dc, const std::vector<std::size_t>& n_list,
                                        std::size_t m_prime, std::size_t trials,
                                        std::uint64_t seed) {
    if (trials < 100) throw std::invalid_argument("at least 100 trials required");
    std::vector<RankEstimate> out;
    for (const auto n : n_list) {
        const std::size_t edges = n * static_cast<std::size_t>(dv);
        const std::size_t prime_sockets = m_prime * static_cast<std::size_t>(dc - 1);
        if (prime_sockets > edges || (edges - prime_sockets) % dc != 0)
            throw ensemble::InfeasibleDegrees("socket count not divisible by check degree");
        std::vector<int> var_deg(n, dv);
        std::vector<int> chk_deg(m_prime, dc - 1);
        chk_deg.resize(m_prime + (edges - prime_sockets) / dc, dc);

        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto g = ensemble::sample_graph_from_degrees(var_deg, chk_deg,
                                                              seed + 0x10001ull * n + t);
            const auto a = ensemble::parity_matrix(g);
            const double v = std::ldexp(1.0, static_cast<int>(a.rows() - gf2::rank(a)));
            sum += v;
            sum_sq += v * v;
        }
        RankEstimate est;
        est.n = n;
        est.mean = sum / static_cast<double>(trials);
        const double var = (sum_sq - sum * sum / static_cast<double>(trials)) /
                           static_cast<double>(trials - 1);
        est.std_err = std::sqrt(std::max(0.0, var) / static_cast<double>(trials));
        out.push_back(est);
    }
    return out;
}

}  // namespace asymde::rankstats
