#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "asymde/bpsim.hpp"
#include "fixtures.hpp"

using namespace asymde;

namespace {

std::vector<double> as_outputs(const gf2::BitVec& word, std::size_t n) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = gf2::bv_get(word, i) ? 1.0 : 0.0;
    return y;
}

}  // namespace

TEST_CASE("encoding XORs the selected basis rows") {
    const auto a = ensemble::parity_matrix(testfix::small_multigraph());
    const auto basis = gf2::null_space_basis(a);
    REQUIRE(basis.size() == 3);

    const auto zero = bpsim::encode(basis, gf2::make_bitvec(3));
    CHECK(gf2::bv_is_zero(zero));

    for (std::size_t k = 0; k < 3; ++k) {
        auto msg = gf2::make_bitvec(3);
        gf2::bv_set(msg, k, true);
        CHECK(bpsim::encode(basis, msg) == basis.rows[k]);
    }

    std::mt19937_64 rng(4);
    for (int t = 0; t < 8; ++t) {
        auto msg = gf2::make_bitvec(3);
        for (std::size_t k = 0; k < 3; ++k) gf2::bv_set(msg, k, rng() & 1);
        CHECK(gf2::bv_is_zero(a.multiply(bpsim::encode(basis, msg))));
    }

    CHECK_THROWS_AS((void)bpsim::encode(basis, gf2::make_bitvec(130)), bpsim::LengthMismatch);
}

TEST_CASE("noiseless decoding returns the transmitted codeword immediately") {
    const auto d = ensemble::DegreeDistribution::regular(3, 6);
    const auto g = ensemble::sample_graph(d, 120, 17);
    const auto basis = gf2::null_space_basis(ensemble::parity_matrix(g));
    std::mt19937_64 rng(5);
    auto msg = gf2::make_bitvec(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) gf2::bv_set(msg, k, rng() & 1);
    const auto cw = bpsim::encode(basis, msg);

    const auto res = bpsim::bp_decode(g, channels::BSC{0.0}, as_outputs(cw, g.n), 3);
    REQUIRE(res.hard.size() == 3);
    for (const auto& round : res.hard)
        for (std::size_t i = 0; i < g.n; ++i)
            CHECK(int(round[i]) == int(gf2::bv_get(cw, i)));

    CHECK_THROWS_AS((void)bpsim::bp_decode(g, channels::BSC{0.0}, std::vector<double>(7),
                                           2),
                    bpsim::LengthMismatch);
}

TEST_CASE("fully erased input yields ties forever") {
    const auto g = testfix::small_multigraph();
    const std::vector<double> y(g.n, channels::kErasure);
    const auto res = bpsim::bp_decode(g, channels::BEC{0.5}, y, 4);
    for (const auto& round : res.hard)
        for (const auto h : round) CHECK(int(h) == -1);
}

TEST_CASE("one-round decision equals depth-one tree MAP on the fixture") {
    // variable 0 sees checks {0,3}; the induced depth-one tree covers
    // variables {0,1,2,4,5} with constraints x0+x1+x2 = 0 and x0+x4+x5 = 0.
    const auto g = testfix::small_multigraph();
    const double eps = 0.21;
    for (int ybits = 0; ybits < 64; ++ybits) {
        std::vector<double> y(6);
        for (int i = 0; i < 6; ++i) y[i] = (ybits >> i) & 1;
        const auto res = bpsim::bp_decode(g, channels::BSC{eps}, y, 1);

        double post[2] = {0.0, 0.0};
        for (int x = 0; x < 32; ++x) {
            const int xb[5] = {x & 1, (x >> 1) & 1, (x >> 2) & 1, (x >> 3) & 1, (x >> 4) & 1};
            if ((xb[0] ^ xb[1] ^ xb[2]) || (xb[0] ^ xb[3] ^ xb[4])) continue;
            const int vars[5] = {0, 1, 2, 4, 5};
            double w = 1.0;
            for (int k = 0; k < 5; ++k)
                w *= (int(y[size_t(vars[k])]) == xb[k]) ? (1.0 - eps) : eps;
            post[xb[0]] += w;
        }
        const double tol = 1e-9 * (post[0] + post[1]);
        if (post[0] > post[1] + tol)
            CHECK(int(res.hard[0][0]) == 0);
        else if (post[1] > post[0] + tol)
            CHECK(int(res.hard[0][0]) == 1);
        else
            CHECK(int(res.hard[0][0]) == -1);
    }
}

TEST_CASE("noiseless simulation has zero error rates") {
    bpsim::SimConfig cfg;
    cfg.n = 600;
    cfg.num_codewords = 20;
    cfg.bp_iters = 5;
    cfg.channel = channels::BSC{0.0};
    cfg.per_iteration_ber = true;
    const auto r = bpsim::run_sim(cfg);
    CHECK(r.ber == 0.0);
    CHECK(r.bler == 0.0);
    CHECK(r.bits_total == 600u * 20u);
    CHECK(r.blocks_total == 20u);
    CHECK(r.iter_ber.size() == 5);
    CHECK(r.iter_ber.back() == 0.0);
}

TEST_CASE("results do not depend on the worker count") {
    bpsim::SimConfig cfg;
    cfg.n = 300;
    cfg.num_codewords = 30;
    cfg.bp_iters = 10;
    cfg.channel = channels::BSC{0.12};  // above threshold, errors guaranteed
    cfg.master_seed = 9;

    setenv("ASYMDE_THREADS", "1", 1);
    const auto r1 = bpsim::run_sim(cfg);
    setenv("ASYMDE_THREADS", "3", 1);
    const auto r3 = bpsim::run_sim(cfg);
    unsetenv("ASYMDE_THREADS");

    CHECK(r1.bit_errors == r3.bit_errors);
    CHECK(r1.block_errors == r3.block_errors);
    CHECK(r1.ber == r3.ber);
    CHECK(r1.ber > 0.0);

    // same seed reproduces, a different seed does not
    setenv("ASYMDE_THREADS", "2", 1);
    const auto again = bpsim::run_sim(cfg);
    CHECK(again.bit_errors == r1.bit_errors);
    cfg.master_seed = 10;
    const auto other = bpsim::run_sim(cfg);
    CHECK(other.bit_errors != r1.bit_errors);
    unsetenv("ASYMDE_THREADS");
}

TEST_CASE("asymmetric noise concentrates errors on the noisy symbol") {
    const auto d = ensemble::DegreeDistribution::regular(3, 6);
    const auto g = ensemble::sample_graph(d, 300, 23);
    const auto basis = gf2::null_space_basis(ensemble::parity_matrix(g));
    const channels::ChannelModel ch = channels::ZChannel{0.3};  // above threshold

    std::mt19937_64 rng(6);
    std::size_t sent[2] = {0, 0};
    double wrong[2] = {0.0, 0.0};
    for (int trial = 0; trial < 40; ++trial) {
        auto msg = gf2::make_bitvec(basis.size());
        for (std::size_t k = 0; k < basis.size(); ++k) gf2::bv_set(msg, k, rng() & 1);
        const auto cw = bpsim::encode(basis, msg);
        std::vector<double> y(g.n);
        for (std::size_t i = 0; i < g.n; ++i)
            y[i] = channels::sample_output(ch, gf2::bv_get(cw, i) ? 1 : 0, rng);
        const auto res = bpsim::bp_decode(g, ch, y, 10);
        const auto& hard = res.hard.back();
        for (std::size_t i = 0; i < g.n; ++i) {
            const int x = gf2::bv_get(cw, i) ? 1 : 0;
            ++sent[x];
            if (int(hard[i]) == -1)
                wrong[x] += 0.5;
            else if (int(hard[i]) != x)
                wrong[x] += 1.0;
        }
    }
    const double r0 = wrong[0] / double(sent[0]);
    const double r1 = wrong[1] / double(sent[1]);
    CHECK(r1 > 0.0);
    CHECK(r1 > 2.0 * r0);
}
