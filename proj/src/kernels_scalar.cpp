#include "asymde/kernels.hpp"

namespace asymde::kernels {

namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

void lincomb_scalar(double a, const double* x, double b, const double* z,
                    double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * z[i];
}

void xor_words_scalar(std::uint64_t* a, const std::uint64_t* b, std::size_t nwords) {
    for (std::size_t i = 0; i < nwords; ++i) a[i] ^= b[i];
}

}  // namespace

const Ops& scalar() {
    static const Ops ops{axpy_scalar, dot_scalar, sum_scalar, lincomb_scalar,
                         xor_words_scalar, "scalar"};
    return ops;
}

}  // namespace asymde::kernels
