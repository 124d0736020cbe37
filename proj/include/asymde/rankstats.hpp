#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "asymde/ensemble.hpp"
#include "asymde/gf2.hpp"

namespace asymde::rankstats {

struct NotAnEdge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Message neighborhood of edge (variable i, check j) at iteration l: BFS
// from i with the root edge removed, down to depth 2(l-1). checks[0] is
// the root check j; the constraint matrix rows are the non-root checks,
// whose neighbors all lie inside the tree by construction. cycle_free
// compares induced edge count (root edge and multi-edges included)
// against node count.
struct SupportTree {
    std::size_t root_var = 0;
    std::size_t root_chk = 0;
    int l = 0;
    std::vector<std::size_t> variables;  // sorted
    std::vector<std::size_t> checks;     // root first
    gf2::GF2Matrix constraints{0, 0};    // (checks.size()-1) x variables.size()
    bool cycle_free = false;
};

SupportTree build_support_tree(const ensemble::BipartiteGraph& g, std::size_t i, std::size_t j,
                               int l);

// Exhaustive check of projection uniformity: enumerate the null space of
// a, project onto the tree variables, and compare against the uniform
// law over tree-satisfying strings. Tree must have at most 64 variables.
struct ProjectionAudit {
    bool is_perfect = false;
    std::size_t tree_satisfying = 0;            // 2^(|V| - rank(constraints))
    std::map<std::uint64_t, std::size_t> histogram;  // projected word -> count
};

ProjectionAudit perfect_projection_audit(const gf2::GF2Matrix& a, const SupportTree& tree,
                                         std::size_t cap);

// Same predicate without enumeration: projections of a linear code are
// uniform over the projected subspace, so the audit reduces to comparing
// the dimension of the projected null-space basis with the dimension of
// the tree-satisfying space.
bool perfect_projection_rank(const gf2::GF2Matrix& a, const SupportTree& tree);

// Monte Carlo estimate of E{2^(rows - rank)} over the semi-regular
// ensemble with m_prime checks of degree dc-1 and the rest of degree dc.
struct RankEstimate {
    std::size_t n = 0;
    double mean = 0.0;
    double std_err = 0.0;
};

std::vector<RankEstimate> estimate_E2mr(int dv, int dc, const std::vector<std::size_t>& n_list,
                                        std::size_t m_prime, std::size_t trials,
                                        std::uint64_t seed);

}  // namespace asymde::rankstats
