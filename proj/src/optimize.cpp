#include "asymde/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace asymde::optimize {

namespace {

// weights indexed by node degree dmin..dmax
struct Side {
    int dmin = 2;
    std::vector<double> w;

    int dmax() const { return dmin + static_cast<int>(w.size()) - 1; }
    void normalize() {
        double s = 0.0;
        for (const double v : w) s += v;
        for (double& v : w) v /= s;
    }
    double integral() const {  // sum w_k / k after normalization
        double s = 0.0, t = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            s += w[i];
            t += w[i] / static_cast<double>(dmin + static_cast<int>(i));
        }
        return t / s;
    }
    std::vector<std::pair<int, double>> terms() const {
        std::vector<std::pair<int, double>> out;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] > 1e-12) out.emplace_back(dmin + static_cast<int>(i), w[i]);
        double s = 0.0;
        for (const auto& [k, v] : out) s += v;
        for (auto& [k, v] : out) v /= s;
        return out;
    }
};

// Tilt w_k <- w_k exp(alpha/k) and renormalize so that sum w_k/k hits
// target; the map alpha -> integral is strictly increasing.
bool tilt_to_integral(Side& side, double target) {
    const double lo_attain = 1.0 / side.dmax();
    const double hi_attain = 1.0 / side.dmin;
    const double slack = 1e-9;
    if (target < lo_attain - slack || target > hi_attain + slack) return false;
    if (side.w.size() == 1) return std::fabs(target - hi_attain) <= slack;
    if (target <= lo_attain + 1e-12) {
        std::fill(side.w.begin(), side.w.end(), 0.0);
        side.w.back() = 1.0;
        return true;
    }
    if (target >= hi_attain - 1e-12) {
        std::fill(side.w.begin(), side.w.end(), 0.0);
        side.w.front() = 1.0;
        return true;
    }
    for (double& v : side.w) v = std::max(v, 1e-12);
    auto integral_at = [&](double alpha) {
        double m = -1e300;
        for (std::size_t i = 0; i < side.w.size(); ++i)
            m = std::max(m, alpha / (side.dmin + static_cast<int>(i)));
        double s = 0.0, t = 0.0;
        for (std::size_t i = 0; i < side.w.size(); ++i) {
            const int k = side.dmin + static_cast<int>(i);
            const double v = side.w[i] * std::exp(alpha / k - m);
            s += v;
            t += v / k;
        }
        return t / s;
    };
    double lo = -1e5, hi = 1e5;
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (integral_at(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    const double alpha = 0.5 * (lo + hi);
    double m = -1e300;
    for (std::size_t i = 0; i < side.w.size(); ++i)
        m = std::max(m, alpha / (side.dmin + static_cast<int>(i)));
    for (std::size_t i = 0; i < side.w.size(); ++i)
        side.w[i] *= std::exp(alpha / (side.dmin + static_cast<int>(i)) - m);
    side.normalize();
    return std::fabs(side.integral() - target) < 1e-9;
}

}  // namespace

OptResult optimize_degrees(const channels::ChannelFamily& fam, const OptConstraints& c,
                           std::uint64_t seed) {
    if (c.max_dv < 3 || c.max_dc < 3) throw Infeasible("degree caps below 3");
    if (!(c.target_rate > 0.0 && c.target_rate < 1.0)) throw Infeasible("rate outside (0,1)");
    const int lam_min = c.forbid_lambda2 ? 3 : 2;
    const double one_minus_r = 1.0 - c.target_rate;

    // feasible iff some rho integral in [1/max_dc, 1/2] maps into the
    // attainable lambda integral range under int_lambda = int_rho/(1-R)
    const double lam_lo = 1.0 / c.max_dv, lam_hi = 1.0 / lam_min;
    const double t_lo = std::max(1.0 / c.max_dc, lam_lo * one_minus_r);
    const double t_hi = std::min(0.5, lam_hi * one_minus_r);
    if (t_lo > t_hi + 1e-12)
        throw Infeasible("no degree distribution meets the rate under the degree caps");

    std::mt19937_64 rng(seed);
    auto urand = [&] { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); };

    Side lam{lam_min, std::vector<double>(static_cast<std::size_t>(c.max_dv - lam_min + 1), 1.0)};
    Side rho{2, std::vector<double>(static_cast<std::size_t>(c.max_dc - 2 + 1), 0.0)};
    {
        // start from the rho integral closest to a point mass at max_dc
        const double t0 = std::clamp(1.0 / c.max_dc, t_lo, t_hi);
        std::fill(rho.w.begin(), rho.w.end(), 1e-12);
        rho.w.back() = 1.0;
        if (!tilt_to_integral(rho, t0)) throw Infeasible("cannot realize initial check side");
        if (!tilt_to_integral(lam, t0 / one_minus_r))
            throw Infeasible("cannot realize initial variable side");
    }

    auto build = [&](const Side& l, const Side& r) {
        return ensemble::DegreeDistribution(l.terms(), r.terms());
    };
    auto score = [&](const ensemble::DegreeDistribution& d, double precision, bool stall) {
        try {
            return de::threshold_search(fam, d, c.grid, c.max_iter, precision,
                                        de::Variant::CodewordAveraged, stall);
        } catch (const de::NoBracket&) {
            return fam.lo;
        }
    };

    // coarse enough to keep DE cheap, fine enough that single-step
    // improvements beat the bisection resolution
    const double coarse = 2e-3;
    OptResult res{build(lam, rho), 0.0, {}};
    double best_score = score(res.best, coarse, true);
    res.eval_log.push_back({1, best_score, best_score});
    Side best_lam = lam, best_rho = rho;

    double step = 0.2;
    int rejects = 0;
    for (int eval = 2; eval <= c.budget; ++eval) {
        Side cl = best_lam, cr = best_rho;
        bool ok = false;
        for (int attempt = 0; attempt < 50 && !ok; ++attempt) {
            cl = best_lam;
            cr = best_rho;
            Side& side = urand() < 0.5 ? cl : cr;
            if (side.w.size() >= 2) {
                std::size_t a = rng() % side.w.size();
                std::size_t b = rng() % (side.w.size() - 1);
                if (b >= a) ++b;
                const double delta = urand() * step * std::max(side.w[a], 0.05);
                side.w[a] = std::max(0.0, side.w[a] - delta);
                side.w[b] += delta;
                side.normalize();
            }
            const double t_rho = std::clamp(cr.integral(), t_lo, t_hi);
            ok = tilt_to_integral(cr, t_rho) && tilt_to_integral(cl, t_rho / one_minus_r);
        }
        if (!ok) {
            res.eval_log.push_back({eval, best_score, best_score});
            continue;
        }
        const auto cand = build(cl, cr);
        const double s = score(cand, coarse, true);
        if (s > best_score) {
            best_score = s;
            best_lam = cl;
            best_rho = cr;
            res.best = cand;
            step = std::min(0.5, step * 1.5);
            rejects = 0;
        } else if (++rejects >= 20) {
            step = std::max(0.01, step * 0.5);
            rejects = 0;
        }
        res.eval_log.push_back({eval, s, best_score});
    }

    res.threshold = score(res.best, 1e-4, false);
    return res;
}

}  // namespace asymde::optimize
