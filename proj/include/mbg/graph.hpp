#pragma once
// Small simple graphs with bitset adjacency, plus the unordered-pair
// encoding used for the edges of K_n.

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mbg {

using Vertex = std::uint32_t;
using ElementId = std::uint32_t;

/// Number of unordered pairs on n vertices.
constexpr std::uint64_t pair_count(std::uint64_t n) { return n * (n - 1) / 2; }

/// id = u*n - u(u+1)/2 + (v-u-1) for u < v. Arguments may come in any order.
ElementId encode_pair(Vertex u, Vertex v, std::uint32_t n);

/// Inverse of encode_pair; returns (u, v) with u < v.
std::pair<Vertex, Vertex> decode_pair(ElementId id, std::uint32_t n);

/// Fixed-size set of vertices stored as 64-bit words.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::uint32_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::uint32_t universe() const { return n_; }
    std::size_t word_count() const { return words_.size(); }
    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    bool contains(Vertex v) const { return (words_[v >> 6] >> (v & 63)) & 1U; }
    void insert(Vertex v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
    void erase(Vertex v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
    std::size_t size() const;
    bool empty() const;

    VertexSet& operator&=(const VertexSet& o);
    VertexSet& operator|=(const VertexSet& o);
    VertexSet& subtract(const VertexSet& o);
    /// Removes every member < v.
    void clear_below(Vertex v);

    /// Smallest member >= from, or universe() if none.
    Vertex next(Vertex from) const;
    std::vector<Vertex> to_vector() const;

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                const int b = __builtin_ctzll(bits);
                f(static_cast<Vertex>(w * 64 + static_cast<std::size_t>(b)));
                bits &= bits - 1;
            }
        }
    }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;

private:
    std::uint32_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

VertexSet operator&(VertexSet a, const VertexSet& b);

/// Simple undirected graph on vertices 0..n-1.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::uint32_t n);

    static Graph complete(std::uint32_t n);
    static Graph from_edges(std::uint32_t n, std::span<const std::pair<Vertex, Vertex>> edges);

    std::uint32_t vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_; }

    bool has_edge(Vertex u, Vertex v) const { return adj_[u].contains(v); }
    void add_edge(Vertex u, Vertex v);
    void remove_edge(Vertex u, Vertex v);

    const VertexSet& neighbors(Vertex v) const { return adj_[v]; }
    std::size_t degree(Vertex v) const { return adj_[v].size(); }

    /// Edges (u < v) in lexicographic order.
    std::vector<std::pair<Vertex, Vertex>> edges() const;

    /// Subgraph induced on `keep`, relabelled 0..|keep|-1 in increasing order.
    Graph induced(std::span<const Vertex> keep) const;

    bool is_clique(std::span<const Vertex> vs) const;

    friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.adj_ == b.adj_; }

private:
    std::uint32_t n_ = 0;
    std::size_t edges_ = 0;
    std::vector<VertexSet> adj_;
};

/// Plain-text edge list: first line "k m", then m lines "u v" (0-based).
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

/// Erdos-Renyi G(n, p) from the fixed generator.
class Rng;
Graph random_graph(std::uint32_t n, double p, Rng& rng);

/// Finds a clique of size k inside `candidates` (all members pairwise adjacent).
/// Returns the clique in increasing vertex order.
std::optional<std::vector<Vertex>> find_clique(const Graph& g, const VertexSet& candidates, std::uint32_t k);

/// Calls f(clique) for every k-clique inside `candidates` (vertices increasing).
/// f returns false to stop early.
template <typename F>
void for_each_clique(const Graph& g, const VertexSet& candidates, std::uint32_t k, F&& f);

}  // namespace mbg

#include "mbg/detail/graph_impl.hpp"
