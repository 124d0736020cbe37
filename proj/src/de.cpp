#include "asymde/de.hpp"

#include <cmath>

namespace asymde::de {

using density::DensityPair;
using density::QuantizedDensity;

DensityPair cw_avg_de_step(const DensityPair& pair, const DensityPair& init,
                           const ensemble::DegreeDistribution& d, DensityPair* q_out) {
    DensityPair q = density::rho_apply_pair(d.rho(), pair);
    if (q_out) *q_out = q;
    DensityPair out;
    out.p0 = density::convolve(init.p0, density::lambda_apply(d.lambda(), q.p0));
    out.p1 = density::convolve(init.p1, density::lambda_apply(d.lambda(), q.p1));
    return out;
}

DensityPair cw_avg_de_step(const DensityPair& pair, const DensityPair& init,
                           const ensemble::DegreeDistribution& d) {
    return cw_avg_de_step(pair, init, d, nullptr);
}

QuantizedDensity coset_de_step(const QuantizedDensity& p, const QuantizedDensity& init_avg,
                               const ensemble::DegreeDistribution& d) {
    return density::convolve(init_avg,
                             density::lambda_apply(d.lambda(), density::rho_apply(d.rho(), p)));
}

StabilityReport stability(const ensemble::DegreeDistribution& d, double r) {
    StabilityReport rep;
    rep.r = r;
    const double rho1 = d.rho_prime_1();
    rep.lambda2_rho1_r = d.lambda2() * rho1 * r;
    rep.sufficient_ok = rep.lambda2_rho1_r < 1.0;
    rep.necessary_violated = rep.lambda2_rho1_r > 1.0;

    const double denom = d.lambda_eval(rho1) * r - rep.lambda2_rho1_r;
    if (denom > 0.0)
        rep.epsilon_star_lower_bound = std::max(0.0, (1.0 - rep.lambda2_rho1_r) / denom);

    if (r <= 0.0) return rep;  // trivially stable, no root to find

    // smallest strictly positive root of g(eps) = lambda(rho'(1) eps) r - eps
    auto g = [&](double eps) { return d.lambda_eval(rho1 * eps) * r - eps; };
    const int steps = 20000;
    double prev_eps = r * 1e-9;
    double prev_g = g(prev_eps);
    for (int i = 1; i <= steps; ++i) {
        const double eps = r * i / steps;
        const double cur = g(eps);
        if ((prev_g <= 0.0 && cur >= 0.0) || (prev_g >= 0.0 && cur <= 0.0)) {
            double lo = prev_eps, hi = eps, glo = prev_g;
            for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g(mid);
                if ((glo <= 0.0) == (gm <= 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            rep.epsilon_star = 0.5 * (lo + hi);
            break;
        }
        prev_eps = eps;
        prev_g = cur;
    }
    return rep;
}

namespace {

constexpr double kHardFloor = 1e-10;

bool stop_target(const StabilityReport& rep, double cbp) {
    if (rep.epsilon_star) return cbp < *rep.epsilon_star;
    // No root in (0, r] with lambda2 rho'(1) r < 1 means the fixed-point
    // map contracts on all of (0, r]; the initial Chernoff value r is
    // already inside the stability region.
    if (rep.sufficient_ok) return true;
    return cbp < kHardFloor;
}

}  // namespace

DETrace run_de(const channels::ChannelModel& ch, const ensemble::DegreeDistribution& d,
               const density::GridSpec& grid, const RunOptions& opt) {
    DETrace trace;
    DensityPair init = channels::initial_density_pair(ch, grid);
    const double r = density::chernoff(init);
    const StabilityReport rep = stability(d, r);

    DensityPair cur = init;
    QuantizedDensity coset_cur;
    QuantizedDensity coset_init;
    if (opt.variant == Variant::Coset) {
        coset_init = density::add(init.p0, init.p1, 0.5, 0.5);
        coset_cur = coset_init;
    }

    auto record = [&](int l) {
        const double pe = opt.variant == Variant::Coset
                              ? density::error_prob(coset_cur)
                              : density::error_prob(cur);
        const double cbp = opt.variant == Variant::Coset
                               ? density::chernoff(coset_cur)
                               : density::chernoff(cur);
        trace.records.push_back({l, pe, cbp});
        return cbp;
    };

    double cbp = record(0);
    if (rep.necessary_violated) {
        // open-density region: cannot reach the stability target
        trace.verdict = Verdict::MaxIterations;
        return trace;
    }
    if (stop_target(rep, cbp)) {
        trace.verdict = Verdict::ConvergedToStability;
        return trace;
    }

    double stall_ref = cbp;
    for (int l = 1; l <= opt.max_iter; ++l) {
        if (opt.variant == Variant::Coset) {
            coset_cur = coset_de_step(coset_cur, coset_init, d);
            density::normalize(coset_cur);
        } else if (opt.q_distance) {
            DensityPair q;
            cur = cw_avg_de_step(cur, init, d, &q);
            opt.q_distance->push_back(density::tv_distance(q.p0, q.p1));
            density::normalize(cur.p0);
            density::normalize(cur.p1);
        } else {
            cur = cw_avg_de_step(cur, init, d);
            density::normalize(cur.p0);
            density::normalize(cur.p1);
        }
        cbp = record(l);
        trace.iterations_used = l;
        if (stop_target(rep, cbp)) {
            trace.verdict = Verdict::ConvergedToStability;
            return trace;
        }
        if (opt.stall_detect && l % 10 == 0) {
            const double target = rep.epsilon_star ? *rep.epsilon_star : kHardFloor;
            if (cbp > 10.0 * target && stall_ref - cbp < 1e-4 * stall_ref) break;
            stall_ref = cbp;
        }
    }
    trace.verdict = Verdict::MaxIterations;
    return trace;
}

bool decodable(const channels::ChannelModel& ch, const ensemble::DegreeDistribution& d,
               const density::GridSpec& grid, const RunOptions& opt) {
    return run_de(ch, d, grid, opt).verdict == Verdict::ConvergedToStability;
}

double threshold_search(const channels::ChannelFamily& fam,
                        const ensemble::DegreeDistribution& d, const density::GridSpec& grid,
                        int max_iter, double precision, Variant variant, bool stall_detect) {
    RunOptions opt;
    opt.max_iter = max_iter;
    opt.variant = variant;
    opt.stall_detect = stall_detect;
    double lo = fam.lo, hi = fam.hi;
    const bool lo_ok = decodable(fam.make(lo), d, grid, opt);
    const bool hi_ok = decodable(fam.make(hi), d, grid, opt);
    if (lo_ok == hi_ok)
        throw NoBracket("family bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                        "] does not straddle the threshold");
    while (hi - lo > precision) {
        const double mid = 0.5 * (lo + hi);
        if (decodable(fam.make(mid), d, grid, opt))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

TypicalityResult typicality_compare(const ensemble::DegreeDistribution& d,
                                    const channels::ChannelFamily& fam,
                                    const density::GridSpec& grid, int max_iter,
                                    double probe_param, double precision) {
    TypicalityResult res;
    res.linear_threshold =
        threshold_search(fam, d, grid, max_iter, precision, Variant::CodewordAveraged);
    res.coset_threshold = threshold_search(fam, d, grid, max_iter, precision, Variant::Coset);

    const channels::ChannelModel probe = fam.make(probe_param);
    RunOptions lin;
    lin.max_iter = max_iter;
    lin.q_distance = &res.q_distance;
    res.linear_trace = run_de(probe, d, grid, lin);
    RunOptions cos;
    cos.max_iter = max_iter;
    cos.variant = Variant::Coset;
    res.coset_trace = run_de(probe, d, grid, cos);
    return res;
}

}  // namespace asymde::de
