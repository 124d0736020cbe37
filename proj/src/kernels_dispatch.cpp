#include "asymde/kernels.hpp"

#include <stdexcept>
#include <string>

namespace asymde::kernels {

namespace {

const Ops* select_default() {
#if defined(__x86_64__)
    if (avx2_available()) return &avx2();
#endif
    return &scalar();
}

const Ops*& current() {
    static const Ops* ops = select_default();
    return ops;
}

}  // namespace

const Ops& active() { return *current(); }

void force(std::string_view name) {
    if (name == "scalar") {
        current() = &scalar();
        return;
    }
#if defined(__x86_64__)
    if (name == "avx2") {
        if (!avx2_available()) throw std::runtime_error("avx2 not available on this CPU");
        current() = &avx2();
        return;
    }
#endif
    throw std::invalid_argument("unknown kernel implementation: " + std::string(name));
}

}  // namespace asymde::kernels
