#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymde/gf2.hpp"

namespace asymde::ensemble {

struct InfeasibleDegrees : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Edge-perspective degree distributions lambda(x) = sum lambda_k x^{k-1},
// rho(x) = sum rho_k x^{k-1}; coefficients keyed by node degree k.
class DegreeDistribution {
public:
    // terms sorted ascending by degree, coefficients in [0,1] summing to 1
    DegreeDistribution(std::vector<std::pair<int, double>> lambda,
                       std::vector<std::pair<int, double>> rho,
                       bool allow_degree_one = false);

    static DegreeDistribution regular(int dv, int dc);

    const std::vector<std::pair<int, double>>& lambda() const { return lambda_; }
    const std::vector<std::pair<int, double>>& rho() const { return rho_; }

    double lambda2() const;
    double rho_prime_1() const;      // sum rho_k (k-1)
    double int_lambda() const;       // sum lambda_k / k
    double int_rho() const;
    double design_rate() const;      // 1 - int_rho / int_lambda
    double lambda_eval(double x) const;
    double rho_eval(double x) const;
    int max_lambda_degree() const { return lambda_.back().first; }
    int max_rho_degree() const { return rho_.back().first; }

    // One term per line: "lambda k <fraction>" / "rho k <fraction>".
    static DegreeDistribution parse(const std::string& text);
    static DegreeDistribution load(const std::string& path);
    std::string serialize() const;

private:
    std::vector<std::pair<int, double>> lambda_, rho_;
};

// Socket-level bipartite multigraph: variable sockets paired with check
// sockets by a seeded uniform permutation.
struct BipartiteGraph {
    std::size_t n = 0;  // variable nodes
    std::size_t m = 0;  // check nodes
    std::vector<int> var_degree;
    std::vector<int> chk_degree;
    // edge e connects edge_var[e] with edge_chk[e]
    std::vector<std::uint32_t> edge_var;
    std::vector<std::uint32_t> edge_chk;
    // adjacency as edge indices
    std::vector<std::vector<std::uint32_t>> var_edges;
    std::vector<std::vector<std::uint32_t>> chk_edges;
    std::uint64_t seed = 0;

    std::size_t edges() const { return edge_var.size(); }
};

// Uniform socket pairing for explicit degree sequences.
BipartiteGraph sample_graph_from_degrees(const std::vector<int>& var_degree,
                                         const std::vector<int>& chk_degree,
                                         std::uint64_t seed);

// Finite-n realization of (lambda, rho): node counts by largest-remainder
// rounding at edge budget E = round(n / int_lambda); a residual socket
// imbalance of a few sockets is absorbed by resizing highest-degree check
// nodes.
BipartiteGraph sample_graph(const DegreeDistribution& d, std::size_t n, std::uint64_t seed);

// A[j,i] = 1 iff check j and variable i share an odd number of edges.
gf2::GF2Matrix parity_matrix(const BipartiteGraph& g);

}  // namespace asymde::ensemble
