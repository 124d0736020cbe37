#include "asymde/kernels.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

namespace asymde::kernels {

namespace {

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vx = _mm256_loadu_pd(x + i);
        vy = _mm256_fmadd_pd(va, vx, vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swap = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double r = hsum(acc);
    for (; i < n; ++i) r += x[i] * y[i];
    return r;
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double r = hsum(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

void lincomb_avx2(double a, const double* x, double b, const double* z,
                  double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        t = _mm256_fmadd_pd(vb, _mm256_loadu_pd(z + i), t);
        _mm256_storeu_pd(y + i, t);
    }
    for (; i < n; ++i) y[i] = a * x[i] + b * z[i];
}

void xor_words_avx2(std::uint64_t* a, const std::uint64_t* b, std::size_t nwords) {
    std::size_t i = 0;
    for (; i + 4 <= nwords; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(a + i),
                            _mm256_xor_si256(va, vb));
    }
    for (; i < nwords; ++i) a[i] ^= b[i];
}

}  // namespace

const Ops& avx2() {
    static const Ops ops{axpy_avx2, dot_avx2, sum_avx2, lincomb_avx2,
                         xor_words_avx2, "avx2"};
    return ops;
}

bool avx2_available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace asymde::kernels

#endif  // __x86_64__
