#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "asymde/kernels.hpp"

using namespace asymde;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar kernels match straightforward loops") {
    std::mt19937_64 rng(1);
    const auto x = random_vec(37, rng);
    const auto z = random_vec(37, rng);
    auto y = random_vec(37, rng);
    auto y2 = y;

    kernels::scalar().axpy(0.7, x.data(), y.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y2[i] += 0.7 * x[i];
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == doctest::Approx(y2[i]).epsilon(1e-15));

    double dref = 0.0, sref = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dref += x[i] * z[i];
        sref += x[i];
    }
    CHECK(kernels::scalar().dot(x.data(), z.data(), x.size()) == doctest::Approx(dref));
    CHECK(kernels::scalar().sum(x.data(), x.size()) == doctest::Approx(sref));

    std::vector<double> out(x.size());
    kernels::scalar().lincomb(0.3, x.data(), -1.2, z.data(), out.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(out[i] == doctest::Approx(0.3 * x[i] - 1.2 * z[i]));
}

#if defined(__x86_64__)
TEST_CASE("avx2 kernels agree with scalar within rounding") {
    if (!kernels::avx2_available()) return;
    std::mt19937_64 rng(2);
    // sizes exercise full vector blocks plus every tail length
    for (const std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 64u, 255u, 256u, 1000u}) {
        const auto x = random_vec(n, rng);
        const auto z = random_vec(n, rng);

        auto ys = random_vec(n, rng);
        auto yv = ys;
        kernels::scalar().axpy(1.7, x.data(), ys.data(), n);
        kernels::avx2().axpy(1.7, x.data(), yv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(ys[i] == doctest::Approx(yv[i]).epsilon(1e-14));

        CHECK(kernels::scalar().dot(x.data(), z.data(), n) ==
              doctest::Approx(kernels::avx2().dot(x.data(), z.data(), n)).epsilon(1e-13));
        CHECK(kernels::scalar().sum(x.data(), n) ==
              doctest::Approx(kernels::avx2().sum(x.data(), n)).epsilon(1e-13));

        std::vector<double> os(n), ov(n);
        kernels::scalar().lincomb(0.25, x.data(), 0.75, z.data(), os.data(), n);
        kernels::avx2().lincomb(0.25, x.data(), 0.75, z.data(), ov.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(os[i] == doctest::Approx(ov[i]).epsilon(1e-14));
    }
}

TEST_CASE("xor_words identical across implementations") {
    if (!kernels::avx2_available()) return;
    std::mt19937_64 rng(3);
    for (const std::size_t nw : {1u, 2u, 3u, 4u, 5u, 9u, 33u}) {
        std::vector<std::uint64_t> a(nw), b(nw);
        for (auto& w : a) w = rng();
        for (auto& w : b) w = rng();
        auto as = a, av = a;
        kernels::scalar().xor_words(as.data(), b.data(), nw);
        kernels::avx2().xor_words(av.data(), b.data(), nw);
        CHECK(as == av);
    }
}
#endif

TEST_CASE("force selects the named implementation") {
    kernels::force("scalar");
    CHECK(kernels::active().name == "scalar");
#if defined(__x86_64__)
    if (kernels::avx2_available()) {
        kernels::force("avx2");
        CHECK(kernels::active().name == "avx2");
    }
#endif
    CHECK_THROWS(kernels::force("no-such-backend"));
    // restore the default selection for any later cases
#if defined(__x86_64__)
    kernels::force(kernels::avx2_available() ? "avx2" : "scalar");
#else
    kernels::force("scalar");
#endif
}
