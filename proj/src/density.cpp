#include "asymde/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <tuple>

#include "asymde/kernels.hpp"

namespace asymde::density {

GridSpec::GridSpec(double lo, double hi, int nbins) : llr_min(lo), llr_max(hi), bins(nbins) {
    if (!(llr_min < 0.0 && 0.0 < llr_max)) throw std::invalid_argument("grid must straddle zero");
    if (bins < 8) throw std::invalid_argument("grid needs at least 8 bins");
    zero_bin_ = quantize(0.0);
}

int GridSpec::quantize(double v) const {
    if (v <= llr_min) return 0;
    if (v >= llr_max) return bins - 1;
    const double x = (v - llr_min) / width();
    int lo = static_cast<int>(std::floor(x));
    if (lo >= bins - 1) return bins - 1;
    const double dlo = x - lo;
    if (dlo < 0.5) return lo;
    if (dlo > 0.5) return lo + 1;
    // tie: keep the bin whose center is closer to zero
    return std::abs(center(lo)) <= std::abs(center(lo + 1)) ? lo : lo + 1;
}

double QuantizedDensity::total() const {
    return kernels::active().sum(mass.data(), mass.size()) + at_neg_inf + at_pos_inf;
}

QuantizedDensity QuantizedDensity::point(const GridSpec& g, double llr, double p) {
    QuantizedDensity d(g);
    d.mass[static_cast<std::size_t>(g.quantize(llr))] = p;
    return d;
}

QuantizedDensity QuantizedDensity::point_pos_inf(const GridSpec& g, double p) {
    QuantizedDensity d(g);
    d.at_pos_inf = p;
    return d;
}

QuantizedDensity QuantizedDensity::point_neg_inf(const GridSpec& g, double p) {
    QuantizedDensity d(g);
    d.at_neg_inf = p;
    return d;
}

namespace {

void require_same_grid(const QuantizedDensity& p, const QuantizedDensity& q) {
    if (!(p.grid == q.grid)) throw GridMismatch("densities on different grids");
}

// Per-grid caches: the check-node bin-combination table, the reflection
// index map, and the e^{-m/2} weights.
struct GridTables {
    std::vector<std::uint16_t> combine;  // bins x bins -> output bin
    std::vector<int> reflect;            // bin -> bin of -center
    std::vector<double> half_exp;        // e^{-center/2}
};

const GridTables& tables_for(const GridSpec& g) {
    static std::mutex mu;
    static std::map<std::tuple<double, double, int>, std::unique_ptr<GridTables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(g.llr_min, g.llr_max, g.bins);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto t = std::make_unique<GridTables>();
    const int b = g.bins;
    t->combine.resize(static_cast<std::size_t>(b) * b);
    std::vector<double> th(b);
    for (int i = 0; i < b; ++i) th[i] = std::tanh(g.center(i) / 2.0);
    for (int i = 0; i < b; ++i) {
        for (int j = 0; j < b; ++j) {
            const double r = 2.0 * std::atanh(th[i] * th[j]);
            t->combine[static_cast<std::size_t>(i) * b + j] =
                static_cast<std::uint16_t>(g.quantize(r));
        }
    }
    t->reflect.resize(b);
    for (int i = 0; i < b; ++i) t->reflect[i] = g.quantize(-g.center(i));
    t->half_exp.resize(b);
    for (int i = 0; i < b; ++i) t->half_exp[i] = std::exp(-g.center(i) / 2.0);
    auto& ref = *t;
    cache.emplace(key, std::move(t));
    return ref;
}

}  // namespace

QuantizedDensity reflect(const QuantizedDensity& p) {
    const auto& t = tables_for(p.grid);
    QuantizedDensity out(p.grid);
    for (int i = 0; i < p.grid.bins; ++i)
        out.mass[static_cast<std::size_t>(t.reflect[i])] += p.mass[static_cast<std::size_t>(i)];
    out.at_neg_inf = p.at_pos_inf;
    out.at_pos_inf = p.at_neg_inf;
    return out;
}

QuantizedDensity convolve(const QuantizedDensity& p, const QuantizedDensity& q) {
    require_same_grid(p, q);
    const auto& k = kernels::active();
    const int b = p.grid.bins;
    const int z = p.grid.zero_bin();
    QuantizedDensity out(p.grid);

    // prefix[j] = sum of q.mass[0..j-1]
    std::vector<double> prefix(static_cast<std::size_t>(b) + 1, 0.0);
    for (int j = 0; j < b; ++j) prefix[j + 1] = prefix[j] + q.mass[static_cast<std::size_t>(j)];
    const double q_fin = prefix[static_cast<std::size_t>(b)];
    const double p_fin = k.sum(p.mass.data(), p.mass.size());

    for (int i = 0; i < b; ++i) {
        const double pm = p.mass[static_cast<std::size_t>(i)];
        if (pm == 0.0) continue;
        // out bin = i + j - z; in-range j interval:
        const int j0 = std::max(0, z - i);
        const int j1 = std::min(b - 1, z - i + b - 1);
        if (j0 > 0) out.mass[0] += pm * prefix[static_cast<std::size_t>(j0)];
        if (j1 < b - 1)
            out.mass[static_cast<std::size_t>(b) - 1] +=
                pm * (q_fin - prefix[static_cast<std::size_t>(j1) + 1]);
        if (j0 <= j1)
            k.axpy(pm, q.mass.data() + j0, out.mass.data() + (i + j0 - z),
                   static_cast<std::size_t>(j1 - j0 + 1));
    }

    out.at_pos_inf = p.at_pos_inf * (q_fin + q.at_pos_inf) + q.at_pos_inf * p_fin;
    out.at_neg_inf = p.at_neg_inf * (q_fin + q.at_neg_inf) + q.at_neg_inf * p_fin;
    // opposite certainties cancel into the erasure bin
    out.mass[static_cast<std::size_t>(z)] +=
        p.at_pos_inf * q.at_neg_inf + p.at_neg_inf * q.at_pos_inf;
    return out;
}

QuantizedDensity check_combine(const QuantizedDensity& p, const QuantizedDensity& q) {
    require_same_grid(p, q);
    const auto& t = tables_for(p.grid);
    const int b = p.grid.bins;
    QuantizedDensity out(p.grid);

    for (int i = 0; i < b; ++i) {
        const double pm = p.mass[static_cast<std::size_t>(i)];
        if (pm == 0.0) continue;
        const std::uint16_t* row = t.combine.data() + static_cast<std::size_t>(i) * b;
        for (int j = 0; j < b; ++j) out.mass[row[j]] += pm * q.mass[static_cast<std::size_t>(j)];
    }
    // R(+inf, b) = b and R(-inf, b) = -b; two infinities multiply signs.
    for (int j = 0; j < b; ++j) {
        const double qm = q.mass[static_cast<std::size_t>(j)];
        out.mass[static_cast<std::size_t>(j)] += p.at_pos_inf * qm;
        out.mass[static_cast<std::size_t>(t.reflect[j])] += p.at_neg_inf * qm;
    }
    for (int i = 0; i < b; ++i) {
        const double pm = p.mass[static_cast<std::size_t>(i)];
        out.mass[static_cast<std::size_t>(i)] += q.at_pos_inf * pm;
        out.mass[static_cast<std::size_t>(t.reflect[i])] += q.at_neg_inf * pm;
    }
    out.at_pos_inf = p.at_pos_inf * q.at_pos_inf + p.at_neg_inf * q.at_neg_inf;
    out.at_neg_inf = p.at_pos_inf * q.at_neg_inf + p.at_neg_inf * q.at_pos_inf;
    return out;
}

QuantizedDensity add(const QuantizedDensity& p, const QuantizedDensity& q, double wp, double wq) {
    require_same_grid(p, q);
    QuantizedDensity out(p.grid);
    kernels::active().lincomb(wp, p.mass.data(), wq, q.mass.data(), out.mass.data(),
                              out.mass.size());
    out.at_neg_inf = wp * p.at_neg_inf + wq * q.at_neg_inf;
    out.at_pos_inf = wp * p.at_pos_inf + wq * q.at_pos_inf;
    return out;
}

void normalize(QuantizedDensity& p) {
    const double t = p.total();
    if (t <= 0.0) return;
    const double s = 1.0 / t;
    for (auto& m : p.mass) m *= s;
    p.at_neg_inf *= s;
    p.at_pos_inf *= s;
}

namespace {

template <typename Combine>
QuantizedDensity poly_apply(const std::vector<std::pair<int, double>>& coeffs,
                            const QuantizedDensity& base, Combine combine) {
    QuantizedDensity acc(base.grid);
    QuantizedDensity power = base;  // base^(1)
    int have = 1;
    for (const auto& [k, w] : coeffs) {
        const int want = k - 1;
        if (want < 1) throw std::invalid_argument("degree below 2 in distribution");
        while (have < want) {
            power = combine(power, base);
            ++have;
        }
        acc = add(acc, power, 1.0, w);
    }
    return acc;
}

}  // namespace

QuantizedDensity lambda_apply(const std::vector<std::pair<int, double>>& lambda,
                              const QuantizedDensity& q) {
    return poly_apply(lambda, q, [](const QuantizedDensity& a, const QuantizedDensity& b) {
        return convolve(a, b);
    });
}

QuantizedDensity rho_apply(const std::vector<std::pair<int, double>>& rho,
                           const QuantizedDensity& s) {
    return poly_apply(rho, s, [](const QuantizedDensity& a, const QuantizedDensity& b) {
        return check_combine(a, b);
    });
}

DensityPair rho_apply_pair(const std::vector<std::pair<int, double>>& rho,
                           const DensityPair& pair) {
    require_same_grid(pair.p0, pair.p1);
    const QuantizedDensity s_plus = add(pair.p0, pair.p1, 0.5, 0.5);
    const QuantizedDensity s_minus = add(pair.p0, pair.p1, 0.5, -0.5);
    const QuantizedDensity rp = rho_apply(rho, s_plus);
    const QuantizedDensity rm = rho_apply(rho, s_minus);
    DensityPair out;
    out.p0 = add(rp, rm, 1.0, 1.0);
    out.p1 = add(rp, rm, 1.0, -1.0);
    return out;
}

double error_prob(const QuantizedDensity& p) {
    const int z = p.grid.zero_bin();
    double below = p.at_neg_inf;
    for (int i = 0; i < z; ++i) below += p.mass[static_cast<std::size_t>(i)];
    below += 0.5 * p.mass[static_cast<std::size_t>(z)];
    return below;
}

double error_prob(const DensityPair& pair) {
    return 0.5 * (error_prob(pair.p0) + error_prob(pair.p1));
}

double chernoff(const QuantizedDensity& p) {
    if (p.at_neg_inf > 0.0) throw Overflow("chernoff: positive mass at -inf");
    const auto& t = tables_for(p.grid);
    return kernels::active().dot(p.mass.data(), t.half_exp.data(), p.mass.size());
}

double chernoff(const DensityPair& pair) {
    return 0.5 * (chernoff(pair.p0) + chernoff(pair.p1));
}

double exp_moment(const QuantizedDensity& p, double s) {
    double acc = 0.0;
    for (int i = 0; i < p.grid.bins; ++i)
        acc += p.mass[static_cast<std::size_t>(i)] * std::exp(-s * p.grid.center(i));
    if (s > 0.0 && p.at_neg_inf > 0.0) throw Overflow("exp_moment: positive mass at -inf");
    if (s < 0.0 && p.at_pos_inf > 0.0) throw Overflow("exp_moment: positive mass at +inf");
    return acc;
}

double tv_distance(const QuantizedDensity& p, const QuantizedDensity& q) {
    require_same_grid(p, q);
    double acc = std::abs(p.at_neg_inf - q.at_neg_inf) + std::abs(p.at_pos_inf - q.at_pos_inf);
    for (std::size_t i = 0; i < p.mass.size(); ++i) acc += std::abs(p.mass[i] - q.mass[i]);
    return 0.5 * acc;
}

std::string to_csv(const QuantizedDensity& p) {
    std::string out = "llr,mass\n";
    char buf[64];
    if (p.at_neg_inf != 0.0) {
        std::snprintf(buf, sizeof buf, "-INF,%.12g\n", p.at_neg_inf);
        out += buf;
    }
    for (int i = 0; i < p.grid.bins; ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", p.grid.center(i),
                      p.mass[static_cast<std::size_t>(i)]);
        out += buf;
    }
    if (p.at_pos_inf != 0.0) {
        std::snprintf(buf, sizeof buf, "+INF,%.12g\n", p.at_pos_inf);
        out += buf;
    }
    return out;
}

}  // namespace asymde::density
