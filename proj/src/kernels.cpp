#include "mbg/kernels.hpp"

#include <atomic>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <limits>

namespace mbg::kernels {

namespace scalar {

std::size_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < words; ++i) total += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    return total;
}

std::size_t and3_popcount(const std::uint64_t* a, const std::uint64_t* b, const std::uint64_t* c,
                          std::size_t words) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < words; ++i)
        total += static_cast<std::size_t>(std::popcount(a[i] & b[i] & c[i]));
    return total;
}

std::size_t andnot_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < words; ++i) total += static_cast<std::size_t>(std::popcount(a[i] & ~b[i]));
    return total;
}

ArgMax weighted_argmax(const double* counts, std::size_t stride, const double* weights,
                       std::size_t rows, const std::uint8_t* eligible, std::size_t n) {
    ArgMax best{ArgMax::npos, -std::numeric_limits<double>::infinity()};
    for (std::size_t z = 0; z < n; ++z) {
        if (eligible[z] == 0) continue;
        double s = 0.0;
        for (std::size_t k = 0; k < rows; ++k) s = s + weights[k] * counts[k * stride + z];
        if (s > best.value) best = {z, s};
    }
    return best;
}

}  // namespace scalar

namespace {

Isa detect() {
    if (const char* force = std::getenv("MBG_FORCE_SCALAR"); force != nullptr && std::strcmp(force, "0") != 0)
        return Isa::Scalar;
#if defined(MBG_WITH_AVX2)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt")) return Isa::Avx2;
#endif
    return Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    if (isa == Isa::Scalar) return true;
#if defined(MBG_WITH_AVX2)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
    return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) { current().store(isa_available(isa) ? isa : Isa::Scalar, std::memory_order_relaxed); }

std::size_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
#if defined(MBG_WITH_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::and_popcount(a.data(), b.data(), a.size());
#endif
    return scalar::and_popcount(a.data(), b.data(), a.size());
}

std::size_t and3_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                          std::span<const std::uint64_t> c) {
#if defined(MBG_WITH_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::and3_popcount(a.data(), b.data(), c.data(), a.size());
#endif
    return scalar::and3_popcount(a.data(), b.data(), c.data(), a.size());
}

std::size_t andnot_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
#if defined(MBG_WITH_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::andnot_popcount(a.data(), b.data(), a.size());
#endif
    return scalar::andnot_popcount(a.data(), b.data(), a.size());
}

ArgMax weighted_argmax(std::span<const double> counts, std::size_t stride, std::span<const double> weights,
                       std::span<const std::uint8_t> eligible) {
#if defined(MBG_WITH_AVX2)
    if (active_isa() == Isa::Avx2)
        return avx2::weighted_argmax(counts.data(), stride, weights.data(), weights.size(), eligible.data(),
                                     eligible.size());
#endif
    return scalar::weighted_argmax(counts.data(), stride, weights.data(), weights.size(), eligible.data(),
                                   eligible.size());
}

}  // namespace mbg::kernels
