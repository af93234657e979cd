#pragma once
// Data-parallel inner loops used by the game engine and the graph toolkit.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2
// variant. The active variant is chosen once at startup from CPUID; setting
// MBG_FORCE_SCALAR=1 in the environment pins the scalar path. Vector and
// scalar variants are required to produce identical results (the potential
// kernel is bit-identical because both paths evaluate the same sequence of
// IEEE multiplies and adds).

#include <cstddef>
#include <cstdint>
#include <span>

namespace mbg::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);

/// ISA picked by the dispatcher.
Isa active_isa();

/// Override the dispatcher (tests use this to compare variants). Requesting
/// an ISA the CPU lacks falls back to Scalar.
void set_isa(Isa isa);

/// True when this binary carries a vector variant and the CPU supports it.
bool isa_available(Isa isa);

/// popcount(a & b) over `a.size()` words. `b` must be at least as long.
std::size_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// popcount(a & b & c).
std::size_t and3_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                          std::span<const std::uint64_t> c);

/// popcount(a & ~b).
std::size_t andnot_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// Result of a masked argmax scan.
struct ArgMax {
    std::size_t index;  ///< npos when nothing is eligible
    double value;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Scores element z as sum_k weights[k] * counts[k * stride + z] (k ascending)
/// and returns the eligible element with the largest score; ties go to the
/// lowest index. `eligible[z] != 0` marks candidates.
///
/// `counts` is a structure-of-arrays table: row k holds, for every element,
/// the number of live hyperedges through it with k elements still missing.
ArgMax weighted_argmax(std::span<const double> counts, std::size_t stride,
                       std::span<const double> weights, std::span<const std::uint8_t> eligible);

namespace scalar {
std::size_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
std::size_t and3_popcount(const std::uint64_t* a, const std::uint64_t* b, const std::uint64_t* c,
                          std::size_t words);
std::size_t andnot_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
ArgMax weighted_argmax(const double* counts, std::size_t stride, const double* weights,
                       std::size_t rows, const std::uint8_t* eligible, std::size_t n);
}  // namespace scalar

namespace avx2 {
std::size_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
std::size_t and3_popcount(const std::uint64_t* a, const std::uint64_t* b, const std::uint64_t* c,
                          std::size_t words);
std::size_t andnot_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
ArgMax weighted_argmax(const double* counts, std::size_t stride, const double* weights,
                       std::size_t rows, const std::uint8_t* eligible, std::size_t n);
}  // namespace avx2

}  // namespace mbg::kernels
