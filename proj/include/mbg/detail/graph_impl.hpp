#pragma once

namespace mbg::detail {

// Candidate sets live in one scratch buffer, one row of `words` per depth.
template <typename F>
bool clique_recurse(const Graph& g, std::uint64_t* cand, std::size_t words, std::uint32_t k, std::vector<Vertex>& cur,
                    F& f) {
    if (k == 0) return f(static_cast<const std::vector<Vertex>&>(cur));
    std::size_t have = 0;
    for (std::size_t w = 0; w < words; ++w) have += static_cast<std::size_t>(__builtin_popcountll(cand[w]));
    if (have < k) return true;
    std::uint64_t* next = cand + words;
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t bits = cand[w];
        while (bits != 0) {
            const auto v = static_cast<Vertex>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
            bits &= bits - 1;
            if (k == 1) {
                cur.push_back(v);
                const bool go_on = f(static_cast<const std::vector<Vertex>&>(cur));
                cur.pop_back();
                if (!go_on) return false;
                continue;
            }
            // only larger vertices, so every clique is produced once in increasing order
            const auto nb = g.neighbors(v).words();
            for (std::size_t x = 0; x < w; ++x) next[x] = 0;
            next[w] = bits & nb[w];
            for (std::size_t x = w + 1; x < words; ++x) next[x] = cand[x] & nb[x];
            cur.push_back(v);
            const bool go_on = clique_recurse(g, next, words, k - 1, cur, f);
            cur.pop_back();
            if (!go_on) return false;
        }
    }
    return true;
}

}  // namespace mbg::detail

namespace mbg {

template <typename F>
void for_each_clique(const Graph& g, const VertexSet& candidates, std::uint32_t k, F&& f) {
    std::vector<Vertex> cur;
    cur.reserve(k);
    const std::size_t words = candidates.word_count();
    std::vector<std::uint64_t> scratch(words * (static_cast<std::size_t>(k) + 1));
    const auto src = candidates.words();
    std::copy(src.begin(), src.end(), scratch.begin());
    detail::clique_recurse(g, scratch.data(), words, k, cur, f);
}

}  // namespace mbg
