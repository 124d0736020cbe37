#include "asymde/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace asymde::ensemble {

namespace {

void validate_side(const std::vector<std::pair<int, double>>& terms, const char* side,
                   int min_degree, double tol) {
    if (terms.empty()) throw std::invalid_argument(std::string(side) + ": empty distribution");
    double sum = 0.0;
    int prev = 0;
    for (const auto& [k, w] : terms) {
        if (k < min_degree)
            throw std::invalid_argument(std::string(side) + ": degree " + std::to_string(k) +
                                        " below minimum " + std::to_string(min_degree));
        if (k <= prev) throw std::invalid_argument(std::string(side) + ": degrees not ascending");
        if (w < 0.0 || w > 1.0)
            throw std::invalid_argument(std::string(side) + ": coefficient out of [0,1]");
        prev = k;
        sum += w;
    }
    if (std::abs(sum - 1.0) > tol)
        throw std::invalid_argument(std::string(side) + ": coefficients sum to " +
                                    std::to_string(sum) + ", expected 1");
}

}  // namespace

DegreeDistribution::DegreeDistribution(std::vector<std::pair<int, double>> lambda,
                                       std::vector<std::pair<int, double>> rho,
                                       bool allow_degree_one)
    : lambda_(std::move(lambda)), rho_(std::move(rho)) {
    validate_side(lambda_, "lambda", allow_degree_one ? 1 : 2, 1e-9);
    validate_side(rho_, "rho", 2, 1e-9);
}

DegreeDistribution DegreeDistribution::regular(int dv, int dc) {
    return DegreeDistribution({{dv, 1.0}}, {{dc, 1.0}});
}

double DegreeDistribution::lambda2() const {
    for (const auto& [k, w] : lambda_)
        if (k == 2) return w;
    return 0.0;
}

double DegreeDistribution::rho_prime_1() const {
    double acc = 0.0;
    for (const auto& [k, w] : rho_) acc += w * (k - 1);
    return acc;
}

double DegreeDistribution::int_lambda() const {
    double acc = 0.0;
    for (const auto& [k, w] : lambda_) acc += w / k;
    return acc;
}

double DegreeDistribution::int_rho() const {
    double acc = 0.0;
    for (const auto& [k, w] : rho_) acc += w / k;
    return acc;
}

double DegreeDistribution::design_rate() const { return 1.0 - int_rho() / int_lambda(); }

double DegreeDistribution::lambda_eval(double x) const {
    double acc = 0.0;
    for (const auto& [k, w] : lambda_) acc += w * std::pow(x, k - 1);
    return acc;
}

double DegreeDistribution::rho_eval(double x) const {
    double acc = 0.0;
    for (const auto& [k, w] : rho_) acc += w * std::pow(x, k - 1);
    return acc;
}

DegreeDistribution DegreeDistribution::parse(const std::string& text) {
    std::vector<std::pair<int, double>> lam, rho;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string side;
        if (!(ls >> side)) continue;
        int k;
        double w;
        if (!(ls >> k >> w))
            throw std::invalid_argument("degree file line " + std::to_string(lineno) +
                                        ": expected '<side> <degree> <fraction>'");
        if (side == "lambda")
            lam.emplace_back(k, w);
        else if (side == "rho")
            rho.emplace_back(k, w);
        else
            throw std::invalid_argument("degree file line " + std::to_string(lineno) +
                                        ": unknown side '" + side + "'");
    }
    auto bykey = [](auto& v) { std::sort(v.begin(), v.end()); };
    bykey(lam);
    bykey(rho);
    for (auto* side : {&lam, &rho}) {
        double sum = 0.0;
        for (const auto& [k, w] : *side) sum += w;
        // 1e-5 slack: published tables round each coefficient to 5 or 6
        // digits, so the printed sums land within a few 1e-6 of 1
        if (std::abs(sum - 1.0) > 1e-5)
            throw std::invalid_argument("degree file: coefficients sum to " +
                                        std::to_string(sum) + ", expected 1 within 1e-5");
        // renormalize the residual so the internal 1e-9 invariant holds
        for (auto& [k, w] : *side) w /= sum;
    }
    return DegreeDistribution(std::move(lam), std::move(rho));
}

DegreeDistribution DegreeDistribution::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open degree file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string DegreeDistribution::serialize() const {
    std::ostringstream out;
    out.precision(12);
    for (const auto& [k, w] : lambda_) out << "lambda " << k << " " << w << "\n";
    for (const auto& [k, w] : rho_) out << "rho " << k << " " << w << "\n";
    return out.str();
}

BipartiteGraph sample_graph_from_degrees(const std::vector<int>& var_degree,
                                         const std::vector<int>& chk_degree,
                                         std::uint64_t seed) {
    const std::size_t ev = std::accumulate(var_degree.begin(), var_degree.end(), std::size_t{0});
    const std::size_t ec = std::accumulate(chk_degree.begin(), chk_degree.end(), std::size_t{0});
    if (ev != ec) throw InfeasibleDegrees("socket counts differ: " + std::to_string(ev) + " vs " +
                                          std::to_string(ec));
    BipartiteGraph g;
    g.n = var_degree.size();
    g.m = chk_degree.size();
    g.var_degree = var_degree;
    g.chk_degree = chk_degree;
    g.seed = seed;
    g.edge_var.reserve(ev);
    g.edge_chk.resize(ev);
    for (std::uint32_t v = 0; v < g.n; ++v)
        for (int s = 0; s < var_degree[v]; ++s) g.edge_var.push_back(v);
    std::vector<std::uint32_t> chk_sockets;
    chk_sockets.reserve(ev);
    for (std::uint32_t c = 0; c < g.m; ++c)
        for (int s = 0; s < chk_degree[c]; ++s) chk_sockets.push_back(c);
    std::mt19937_64 rng(seed);
    std::shuffle(chk_sockets.begin(), chk_sockets.end(), rng);
    g.edge_chk = std::move(chk_sockets);

    g.var_edges.resize(g.n);
    g.chk_edges.resize(g.m);
    for (std::uint32_t e = 0; e < ev; ++e) {
        g.var_edges[g.edge_var[e]].push_back(e);
        g.chk_edges[g.edge_chk[e]].push_back(e);
    }
    return g;
}

namespace {

// Largest-remainder rounding of fractional node counts to a fixed total.
std::vector<std::size_t> largest_remainder(const std::vector<double>& raw, std::size_t total) {
    std::vector<std::size_t> counts(raw.size());
    std::vector<std::pair<double, std::size_t>> rem(raw.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        counts[i] = static_cast<std::size_t>(std::floor(raw[i]));
        assigned += counts[i];
        rem[i] = {raw[i] - std::floor(raw[i]), i};
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    if (assigned > total) throw InfeasibleDegrees("rounding overflow in node counts");
    for (std::size_t i = 0; i < total - assigned; ++i) counts[rem[i % rem.size()].second] += 1;
    return counts;
}

}  // namespace

BipartiteGraph sample_graph(const DegreeDistribution& d, std::size_t n, std::uint64_t seed) {
    const double int_lam = d.int_lambda();
    const auto edge_budget = static_cast<std::size_t>(std::llround(n / int_lam));
    if (n < static_cast<std::size_t>(d.max_lambda_degree()))
        throw InfeasibleDegrees("n smaller than the maximum variable degree");

    // variable node counts
    std::vector<double> raw_v;
    raw_v.reserve(d.lambda().size());
    for (const auto& [k, w] : d.lambda()) raw_v.push_back(edge_budget * w / k);
    const auto counts_v = largest_remainder(raw_v, n);
    std::vector<int> var_degree;
    var_degree.reserve(n);
    std::size_t sockets = 0;
    for (std::size_t i = 0; i < counts_v.size(); ++i) {
        const int k = d.lambda()[i].first;
        var_degree.insert(var_degree.end(), counts_v[i], k);
        sockets += counts_v[i] * k;
    }

    // check node counts at the realized socket total
    const double node_total = sockets * d.int_rho();
    const auto m = static_cast<std::size_t>(std::llround(node_total));
    if (m == 0) throw InfeasibleDegrees("no check nodes at this block length");
    std::vector<double> raw_c;
    raw_c.reserve(d.rho().size());
    for (const auto& [k, w] : d.rho()) raw_c.push_back(sockets * w / k);
    const auto counts_c = largest_remainder(raw_c, m);
    std::vector<int> chk_degree;
    chk_degree.reserve(m);
    std::size_t chk_sockets = 0;
    for (std::size_t i = 0; i < counts_c.size(); ++i) {
        const int k = d.rho()[i].first;
        chk_degree.insert(chk_degree.end(), counts_c[i], k);
        chk_sockets += counts_c[i] * k;
    }

    // Absorb the residual imbalance by resizing highest-degree check nodes,
    // never letting one drop below degree 2.
    std::sort(chk_degree.begin(), chk_degree.end());
    std::size_t idx = chk_degree.size();
    while (chk_sockets > sockets) {
        if (idx == 0) idx = chk_degree.size();
        --idx;
        if (chk_degree[idx] <= 2) throw InfeasibleDegrees("cannot balance check sockets");
        chk_degree[idx] -= 1;
        --chk_sockets;
    }
    idx = chk_degree.size();
    while (chk_sockets < sockets) {
        if (idx == 0) idx = chk_degree.size();
        --idx;
        chk_degree[idx] += 1;
        ++chk_sockets;
    }

    return sample_graph_from_degrees(var_degree, chk_degree, seed);
}

gf2::GF2Matrix parity_matrix(const BipartiteGraph& g) {
    gf2::GF2Matrix a(g.m, g.n);
    for (std::size_t e = 0; e < g.edges(); ++e) a.flip(g.edge_chk[e], g.edge_var[e]);
    return a;
}

}  // namespace asymde::ensemble
