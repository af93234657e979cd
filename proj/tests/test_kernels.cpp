#include <doctest.h>

#include <vector>

#include "mbg/kernels.hpp"
#include "mbg/rng.hpp"

using namespace mbg;

TEST_SUITE("kernels") {

TEST_CASE("popcount kernels agree between scalar and avx2") {
    if (!kernels::isa_available(kernels::Isa::Avx2)) return;
    Rng rng(11);
    for (std::size_t words : {0, 1, 3, 4, 5, 8, 17, 64, 129}) {
        std::vector<std::uint64_t> a(words), b(words), c(words);
        for (std::size_t i = 0; i < words; ++i) {
            a[i] = rng.next();
            b[i] = rng.next();
            c[i] = rng.next() & rng.next();
        }
        CHECK(kernels::scalar::and_popcount(a.data(), b.data(), words) ==
              kernels::avx2::and_popcount(a.data(), b.data(), words));
        CHECK(kernels::scalar::and3_popcount(a.data(), b.data(), c.data(), words) ==
              kernels::avx2::and3_popcount(a.data(), b.data(), c.data(), words));
        CHECK(kernels::scalar::andnot_popcount(a.data(), b.data(), words) ==
              kernels::avx2::andnot_popcount(a.data(), b.data(), words));
    }
}

TEST_CASE("popcount kernel matches a bit-by-bit count") {
    Rng rng(12);
    std::vector<std::uint64_t> a(7), b(7);
    for (auto& x : a) x = rng.next();
    for (auto& x : b) x = rng.next();
    std::size_t want = 0;
    for (std::size_t i = 0; i < 7; ++i)
        for (int bit = 0; bit < 64; ++bit)
            if (((a[i] & b[i]) >> bit) & 1U) ++want;
    CHECK(kernels::and_popcount(a, b) == want);
}

TEST_CASE("weighted argmax agrees bit for bit and breaks ties low") {
    Rng rng(13);
    for (std::size_t n : {1, 3, 4, 7, 16, 33, 250}) {
        for (std::size_t rows : {1, 2, 5}) {
            std::vector<double> counts(rows * n), weights(rows);
            std::vector<std::uint8_t> el(n);
            for (auto& c : counts) c = static_cast<double>(rng.below(4));
            for (std::size_t k = 0; k < rows; ++k) weights[k] = 1.0 / static_cast<double>(1 + k * 3);
            for (auto& e : el) e = rng.bernoulli(0.7) ? 1 : 0;
            const auto s = kernels::scalar::weighted_argmax(counts.data(), n, weights.data(), rows, el.data(), n);
            // independent reference
            std::size_t best = kernels::ArgMax::npos;
            double bv = 0;
            for (std::size_t z = 0; z < n; ++z) {
                if (!el[z]) continue;
                double v = 0;
                for (std::size_t k = 0; k < rows; ++k) v += weights[k] * counts[k * n + z];
                if (best == kernels::ArgMax::npos || v > bv) {
                    best = z;
                    bv = v;
                }
            }
            CHECK(s.index == best);
            if (best != kernels::ArgMax::npos) CHECK(s.value == bv);
            if (kernels::isa_available(kernels::Isa::Avx2)) {
                const auto v = kernels::avx2::weighted_argmax(counts.data(), n, weights.data(), rows, el.data(), n);
                CHECK(v.index == s.index);
                CHECK(v.value == s.value);
            }
        }
    }
}

TEST_CASE("argmax with nothing eligible") {
    std::vector<double> counts{1, 2, 3};
    std::vector<double> w{1};
    std::vector<std::uint8_t> el{0, 0, 0};
    CHECK(kernels::weighted_argmax(counts, 3, w, el).index == kernels::ArgMax::npos);
}

TEST_CASE("dispatcher can be pinned") {
    const auto before = kernels::active_isa();
    kernels::set_isa(kernels::Isa::Scalar);
    CHECK(kernels::active_isa() == kernels::Isa::Scalar);
    kernels::set_isa(before);
    CHECK(kernels::active_isa() == before);
}

}
