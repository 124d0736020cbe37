#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asymde/de.hpp"

using namespace asymde;
using density::GridSpec;

namespace {

// Exact erasure-probability recursion for the erasure channel; the grid
// evolution must reproduce it because every mass atom stays on the three
// exactly representable states (0, +inf aligned, nothing below zero).
std::vector<double> bec_recursion(double eps, const ensemble::DegreeDistribution& d, int iters) {
    std::vector<double> xs{eps};
    double x = eps;
    for (int l = 0; l < iters; ++l) {
        x = eps * d.lambda_eval(1.0 - d.rho_eval(1.0 - x));
        xs.push_back(x);
    }
    return xs;
}

}  // namespace

TEST_CASE("erasure evolution reproduces the scalar recursion exactly on the grid") {
    const auto d = ensemble::DegreeDistribution::regular(3, 6);
    const GridSpec grid;
    for (const double eps : {0.3, 0.5}) {
        // decodable runs stop early once the Chernoff value enters the
        // stability region, so only compare the recorded prefix
        const auto trace = de::run_de(channels::BEC{eps}, d, grid, 20);
        const auto xs = bec_recursion(eps, d, 20);
        REQUIRE(trace.records.size() >= 4);
        if (eps == 0.5) REQUIRE(trace.records.size() == 21);
        for (int l = 0; l < int(trace.records.size()); ++l) {
            // erased messages sit in the zero bin, counted half
            CHECK(trace.records[size_t(l)].p_e == doctest::Approx(xs[size_t(l)] / 2).epsilon(1e-10));
            CHECK(trace.records[size_t(l)].cbp == doctest::Approx(xs[size_t(l)]).epsilon(1e-10));
        }
    }
}

TEST_CASE("coset variant on the erasure channel matches the same recursion") {
    const auto d = ensemble::DegreeDistribution::regular(3, 6);
    de::RunOptions opt;
    opt.max_iter = 20;
    opt.variant = de::Variant::Coset;
    const auto trace = de::run_de(channels::BEC{0.42}, d, GridSpec{}, opt);
    const auto xs = bec_recursion(0.42, d, 20);
    for (int l = 0; l <= 20; ++l)
        CHECK(trace.records[size_t(l)].cbp == doctest::Approx(xs[size_t(l)]).epsilon(1e-10));
}

TEST_CASE("verdicts on the two sides of the erasure threshold") {
    const auto d = ensemble::DegreeDistribution::regular(3, 6);
    de::RunOptions opt;
    opt.max_iter = 200;
    const auto good = de::run_de(channels::BEC{0.30}, d, GridSpec{}, opt);
    CHECK(good.verdict == de::Verdict::ConvergedToStability);
    const auto bad = de::run_de(channels::BEC{0.50}, d, GridSpec{}, opt);
    CHECK(bad.verdict == de::Verdict::MaxIterations);
    CHECK(bad.records[0].l == 0);
    CHECK(bad.iterations_used == 200);
    // undecodable run stalls at a strictly positive error fixed point
    CHECK(bad.records.back().p_e > 0.1);
}

TEST_CASE("stability report closed forms") {
    // lambda(x) = x^2, rho(x) = x^6: fixed point equation lambda2=0 case,
    // lambda(5 eps) r = eps has root eps = 1/(25 r)
    const auto d = ensemble::DegreeDistribution::regular(3, 6);
    const auto rep = de::stability(d, 0.3);
    REQUIRE(rep.epsilon_star.has_value());
    CHECK(*rep.epsilon_star == doctest::Approx(1.0 / (25.0 * 0.3)).epsilon(1e-6));
    CHECK(rep.sufficient_ok);       // lambda2 = 0
    CHECK(!rep.necessary_violated);
    CHECK(rep.lambda2_rho1_r == 0.0);
    // for lambda(x) = x^2 the lower bound is tight, so allow root-scan slack
    CHECK(*rep.epsilon_star >= rep.epsilon_star_lower_bound - 1e-6);

    // degenerate noiseless channel
    const auto rep0 = de::stability(d, 0.0);
    CHECK(rep0.r == 0.0);
    CHECK(rep0.sufficient_ok);

    // all edges degree two: lambda2 rho'(1) r = 5 r
    const auto d2 = ensemble::DegreeDistribution({{2, 1.0}}, {{6, 1.0}});
    const auto repv = de::stability(d2, 0.5);
    CHECK(repv.lambda2_rho1_r == doctest::Approx(2.5));
    CHECK(repv.necessary_violated);
    CHECK(!repv.sufficient_ok);
}

TEST_CASE("threshold search brackets the exact erasure threshold") {
    const auto d = ensemble::DegreeDistribution::regular(3, 6);
    const auto fam = channels::family_by_name("bec");
    const double t = de::threshold_search(fam, d, GridSpec{}, 100, 1e-3);
    // 100-iteration truncation of the exact recursion stops at 0.4286
    CHECK(t == doctest::Approx(0.4286).epsilon(5e-3));

    channels::ChannelFamily bad = fam;
    bad.lo = 0.01;
    bad.hi = 0.02;  // both endpoints decodable: nothing to bisect
    CHECK_THROWS_AS((void)de::threshold_search(bad, d, GridSpec{}, 50, 1e-3), de::NoBracket);
}

TEST_CASE("paired step collapses to the single-density step on symmetric input") {
    // For the erasure channel the aligned pair has p0 == p1, so the paired
    // update and the coset update must coincide.
    const auto d = ensemble::DegreeDistribution::regular(3, 6);
    const GridSpec grid;
    const auto init = channels::initial_density_pair(channels::BEC{0.4}, grid);
    const auto avg = density::add(init.p0, init.p1, 0.5, 0.5);
    auto pair = init;
    auto single = avg;
    for (int l = 0; l < 5; ++l) {
        pair = de::cw_avg_de_step(pair, init, d);
        single = de::coset_de_step(single, avg, d);
        const auto mean = density::add(pair.p0, pair.p1, 0.5, 0.5);
        CHECK(density::tv_distance(mean, single) < 1e-11);
        CHECK(density::tv_distance(pair.p0, pair.p1) < 1e-11);
    }
}

TEST_CASE("typicality probe returns thresholds and per-iteration distances") {
    const auto d = ensemble::DegreeDistribution::regular(3, 6);
    auto fam = channels::family_by_name("z");
    const auto r = de::typicality_compare(d, fam, GridSpec{}, 50, 0.20, 1e-3);
    CHECK(r.linear_threshold == doctest::Approx(0.230).epsilon(2e-2));
    CHECK(r.coset_threshold == doctest::Approx(0.230).epsilon(2e-2));
    CHECK(r.linear_threshold >= r.coset_threshold - 2e-3);
    CHECK(r.q_distance.size() == size_t(r.linear_trace.iterations_used));
    for (const double v : r.q_distance) CHECK(v >= 0.0);
    // distances shrink as the run converges on a decodable parameter
    CHECK(r.q_distance.back() < r.q_distance.front() + 1e-12);
}
