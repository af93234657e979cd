// AVX2 variants. Compiled with -mavx2 -mpopcnt; only reached after the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <limits>

#include "mbg/kernels.hpp"

namespace mbg::kernels::avx2 {

namespace {

// Nibble-lookup popcount (Mula): per-byte counts summed with SAD into four
// 64-bit lanes.
inline __m256i popcount_bytes(__m256i v) {
    const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                            0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

inline std::size_t horizontal_sum(__m256i acc) {
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    return static_cast<std::size_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
}

inline __m256i load(const std::uint64_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }

}  // namespace

std::size_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) acc = _mm256_add_epi64(acc, popcount_bytes(_mm256_and_si256(load(a + i), load(b + i))));
    std::size_t total = horizontal_sum(acc);
    for (; i < words; ++i) total += static_cast<std::size_t>(_mm_popcnt_u64(a[i] & b[i]));
    return total;
}

std::size_t and3_popcount(const std::uint64_t* a, const std::uint64_t* b, const std::uint64_t* c,
                          std::size_t words) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        const __m256i v = _mm256_and_si256(_mm256_and_si256(load(a + i), load(b + i)), load(c + i));
        acc = _mm256_add_epi64(acc, popcount_bytes(v));
    }
    std::size_t total = horizontal_sum(acc);
    for (; i < words; ++i) total += static_cast<std::size_t>(_mm_popcnt_u64(a[i] & b[i] & c[i]));
    return total;
}

std::size_t andnot_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    // _mm256_andnot_si256(x, y) computes ~x & y.
    for (; i + 4 <= words; i += 4) acc = _mm256_add_epi64(acc, popcount_bytes(_mm256_andnot_si256(load(b + i), load(a + i))));
    std::size_t total = horizontal_sum(acc);
    for (; i < words; ++i) total += static_cast<std::size_t>(_mm_popcnt_u64(a[i] & ~b[i]));
    return total;
}

ArgMax weighted_argmax(const double* counts, std::size_t stride, const double* weights, std::size_t rows,
                       const std::uint8_t* eligible, std::size_t n) {
    const double neg_inf = -std::numeric_limits<double>::infinity();
    __m256d best = _mm256_set1_pd(neg_inf);
    __m256i best_idx = _mm256_set1_epi64x(-1);
    __m256i idx = _mm256_setr_epi64x(0, 1, 2, 3);
    const __m256i step = _mm256_set1_epi64x(4);
    const __m256d neg_inf_v = _mm256_set1_pd(neg_inf);

    std::size_t z = 0;
    for (; z + 4 <= n; z += 4) {
        std::int32_t mask_bytes;
        __builtin_memcpy(&mask_bytes, eligible + z, sizeof(mask_bytes));
        if (mask_bytes == 0) {
            idx = _mm256_add_epi64(idx, step);
            continue;
        }
        __m256d s = _mm256_setzero_pd();
        for (std::size_t k = 0; k < rows; ++k) {
            const __m256d c = _mm256_loadu_pd(counts + k * stride + z);
            s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_set1_pd(weights[k]), c));
        }
        const __m256i m64 = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(mask_bytes));
        const __m256d live = _mm256_castsi256_pd(_mm256_cmpgt_epi64(m64, _mm256_setzero_si256()));
        s = _mm256_blendv_pd(neg_inf_v, s, live);
        const __m256d gt = _mm256_cmp_pd(s, best, _CMP_GT_OQ);
        best = _mm256_blendv_pd(best, s, gt);
        best_idx = _mm256_castpd_si256(
            _mm256_blendv_pd(_mm256_castsi256_pd(best_idx), _mm256_castsi256_pd(idx), gt));
        idx = _mm256_add_epi64(idx, step);
    }

    alignas(32) double vals[4];
    alignas(32) std::int64_t ids[4];
    _mm256_store_pd(vals, best);
    _mm256_store_si256(reinterpret_cast<__m256i*>(ids), best_idx);

    ArgMax out{ArgMax::npos, neg_inf};
    for (int lane = 0; lane < 4; ++lane) {
        if (ids[lane] < 0) continue;
        const auto id = static_cast<std::size_t>(ids[lane]);
        if (vals[lane] > out.value || (vals[lane] == out.value && id < out.index)) out = {id, vals[lane]};
    }
    for (; z < n; ++z) {
        if (eligible[z] == 0) continue;
        double s = 0.0;
        for (std::size_t k = 0; k < rows; ++k) s = s + weights[k] * counts[k * stride + z];
        if (s > out.value) out = {z, s};
    }
    return out;
}

}  // namespace mbg::kernels::avx2
