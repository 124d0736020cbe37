#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asymde/optimize.hpp"

using namespace asymde;

TEST_CASE("fully pinned constraint set returns the unique feasible pair") {
    // max degrees (3,6) at rate 1/2 with degree-2 forbidden admit exactly
    // one distribution: all variable edges degree 3, all check edges 6
    optimize::OptConstraints c;
    c.max_dv = 3;
    c.max_dc = 6;
    c.forbid_lambda2 = true;
    c.budget = 8;
    const auto r = optimize::optimize_degrees(channels::family_by_name("z"), c, 42);
    REQUIRE(r.best.lambda().size() == 1);
    REQUIRE(r.best.rho().size() == 1);
    CHECK(r.best.lambda()[0].first == 3);
    CHECK(r.best.lambda()[0].second == doctest::Approx(1.0));
    CHECK(r.best.rho()[0].first == 6);
    CHECK(r.best.rho()[0].second == doctest::Approx(1.0));
    CHECK(r.best.design_rate() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.threshold == doctest::Approx(0.2302).epsilon(5e-3));
}

TEST_CASE("search respects the constraint set and logs monotone progress") {
    optimize::OptConstraints c;
    c.max_dv = 8;
    c.max_dc = 8;
    c.forbid_lambda2 = true;
    c.budget = 25;
    const auto r = optimize::optimize_degrees(channels::family_by_name("bec"), c, 7);

    CHECK(r.best.design_rate() == doctest::Approx(0.5).epsilon(1e-6));
    for (const auto& [k, w] : r.best.lambda()) {
        CHECK(k >= 3);  // degree 2 excluded
        CHECK(k <= 8);
        CHECK(w >= 0.0);
    }
    for (const auto& [k, w] : r.best.rho()) CHECK(k <= 8);

    REQUIRE(!r.eval_log.empty());
    CHECK(r.eval_log.size() <= 25);
    double best = 0.0;
    int prev_eval = 0;
    for (const auto& rec : r.eval_log) {
        CHECK(rec.eval > prev_eval);
        prev_eval = rec.eval;
        CHECK(rec.best_so_far >= best - 1e-15);
        best = rec.best_so_far;
        CHECK(rec.score <= rec.best_so_far + 1e-15);
    }
    // refined threshold tracks the coarse winner
    CHECK(r.threshold == doctest::Approx(best).epsilon(2e-2));
    // a short run must still land in the neighborhood of good rate-1/2
    // erasure codes
    CHECK(r.threshold >= 0.35);
}

TEST_CASE("deterministic in the seed") {
    optimize::OptConstraints c;
    c.max_dv = 4;
    c.max_dc = 7;
    c.budget = 6;
    const auto a = optimize::optimize_degrees(channels::family_by_name("bec"), c, 3);
    const auto b = optimize::optimize_degrees(channels::family_by_name("bec"), c, 3);
    CHECK(a.threshold == b.threshold);
    CHECK(a.best.lambda() == b.best.lambda());
    CHECK(a.best.rho() == b.best.rho());
}

TEST_CASE("impossible rate targets are rejected") {
    optimize::OptConstraints c;
    c.max_dv = 3;
    c.max_dc = 4;
    c.target_rate = 0.9;  // would need check-edge integral below 1/max_dc
    CHECK_THROWS_AS((void)optimize::optimize_degrees(channels::family_by_name("bec"), c, 1),
                    optimize::Infeasible);
}
