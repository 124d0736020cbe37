#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace asymde::kernels {

// Hot inner loops of the density algebra and the GF(2) elimination.
// Scalar versions are the reference; the AVX2 versions must match them
// bit-exactly (same operation order within each lane group is not
// guaranteed, so floating-point results may differ by rounding; the
// equivalence tests bound the difference at a few ulps).
struct Ops {
    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // sum_i x[i] * y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum_i x[i]
    double (*sum)(const double* x, std::size_t n);
    // y[i] = a * x[i] + b * z[i]
    void (*lincomb)(double a, const double* x, double b, const double* z,
                    double* y, std::size_t n);
    // a[i] ^= b[i] over packed 64-bit words
    void (*xor_words)(std::uint64_t* a, const std::uint64_t* b, std::size_t nwords);

    std::string_view name;
};

const Ops& scalar();
#if defined(__x86_64__)
const Ops& avx2();
bool avx2_available();
#endif

// Best implementation for the running CPU, chosen once.
const Ops& active();

// Test hook: force a specific implementation ("scalar" or "avx2").
void force(std::string_view name);

}  // namespace asymde::kernels
