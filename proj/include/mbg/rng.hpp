#pragma once
// Fixed pseudo-random generator so transcripts are bit-exact across
// platforms: xoshiro256** seeded through SplitMix64. Standard-library
// distributions are implementation-defined, so sampling helpers live here.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mbg {

std::uint64_t splitmix64(std::uint64_t& state);

/// Stateless mix of one value (a single SplitMix64 step).
std::uint64_t mix64(std::uint64_t x);

/// Seed for sub-stream `a`/`b` of `base` (cells, games, strategy roles).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0);

    std::uint64_t next();
    std::uint64_t operator()() { return next(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

    /// Uniform integer in [0, bound). bound must be > 0. Lemire's method with rejection.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// `k` distinct values from [0, n) in random order.
    std::vector<std::uint32_t> sample(std::uint32_t n, std::uint32_t k);

private:
    std::array<std::uint64_t, 4> s_{};
};

}  // namespace mbg
