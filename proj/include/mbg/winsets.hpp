#pragma once
// Winning-set families over a board: copies of a fixed pattern graph H in
// K_n, t-clusters of H-copies, simple t-fans of H-bar graphs, and the
// 2-density m2(H) that governs H-game thresholds.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mbg/graph.hpp"

namespace mbg {

/// A small pattern graph with a canonical sorted edge list.
class PatternGraph {
public:
    PatternGraph() = default;
    PatternGraph(std::uint32_t k, std::vector<std::pair<Vertex, Vertex>> edges, std::string name = {});
    explicit PatternGraph(const Graph& g, std::string name = {});

    static PatternGraph clique(std::uint32_t k);
    /// K_{r+1} minus one edge.
    static PatternGraph clique_minus(std::uint32_t r);
    static PatternGraph path(std::uint32_t k);
    static PatternGraph cycle(std::uint32_t k);

    std::uint32_t vertex_count() const { return k_; }
    std::size_t edge_count() const { return edges_.size(); }
    std::span<const std::pair<Vertex, Vertex>> edges() const { return edges_; }
    const std::string& name() const { return name_; }
    Graph graph() const;

    bool is_complete() const { return edges_.size() == pair_count(k_); }
    bool has_cycle() const;
    /// Number of vertices with degree > 0.
    std::uint32_t non_isolated_count() const;
    /// Same graph with isolated vertices dropped (vertices relabelled in order).
    PatternGraph without_isolated() const;

    friend bool operator==(const PatternGraph& a, const PatternGraph& b) {
        return a.k_ == b.k_ && a.edges_ == b.edges_;
    }

private:
    std::uint32_t k_ = 0;
    std::vector<std::pair<Vertex, Vertex>> edges_;
    std::string name_;
};

/// Names: K3..K9, K5minus, Kr-minus(r) (= K_{r+1} minus an edge), P<k>, C<k>,
/// or "file:<path>" for an edge-list file.
PatternGraph parse_pattern(const std::string& spec);

/// Adjacency bitmask over the C(k,2) pairs of {0..k-1}; bit index = encode_pair(u, v, k).
std::uint64_t pattern_mask(std::uint32_t k, std::span<const std::pair<Vertex, Vertex>> edges);

/// Canonical form of a graph on k <= 8 vertices under vertex permutation:
/// the smallest pair mask over all relabellings.
std::uint64_t canonical_mask(std::uint32_t k, std::uint64_t mask);
bool isomorphic(const PatternGraph& a, const PatternGraph& b);

/// Automorphisms as permutation vectors (perm[i] = image of i). k <= 8.
std::vector<std::vector<Vertex>> automorphisms(const PatternGraph& h);

/// Exact non-negative rational.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    static Rational make(std::int64_t n, std::int64_t d);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
};

std::string to_string(const Rational& r);

struct Density {
    Rational value;
    /// Vertex set of a maximising subgraph (induced), preferring the most vertices.
    std::vector<Vertex> maximizer;
    /// True when H itself attains the maximum.
    bool h_is_maximal = false;
};

/// m2(H) = max (e(H')-1)/(v(H')-2) over subgraphs with v(H') >= 3.
/// Throws UndefinedDensity when no subgraph has >= 3 vertices and >= 2 edges.
Density m2_density(const PatternGraph& h);

/// A graph F with a distinguished non-adjacent pair (v, w) such that F + vw is H.
struct HbarGraph {
    PatternGraph f;
    Vertex v;
    Vertex w;
};

/// One representative per isomorphism class of (F, {v, w}).
std::vector<HbarGraph> hbar_graphs(const PatternGraph& h);

/// Size budget for materialised families.
struct FamilyLimits {
    std::size_t max_hyperedges = 4'000'000;
    std::size_t max_incidences = 24'000'000;
};

/// Immutable family of hyperedges (sets of element ids) with an element index.
class WinningFamily {
public:
    WinningFamily() = default;
    /// Sorts each set; rejects out-of-range ids and empty sets. Does not deduplicate.
    WinningFamily(std::uint32_t universe, const std::vector<std::vector<ElementId>>& sets);

    std::uint32_t universe() const { return universe_; }
    std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    bool empty() const { return size() == 0; }
    std::span<const ElementId> hyperedge(std::size_t i) const {
        return {elements_.data() + offsets_[i], elements_.data() + offsets_[i + 1]};
    }
    std::size_t max_edge_size() const { return max_size_; }
    std::size_t incidence_count() const { return elements_.size(); }

    /// Hyperedges containing element e.
    std::span<const std::uint32_t> containing(ElementId e) const {
        return {index_.data() + index_offsets_[e], index_.data() + index_offsets_[e + 1]};
    }

    /// Human-readable description of how the family was built.
    const std::string& label() const { return label_; }
    void set_label(std::string l) { label_ = std::move(l); }

private:
    friend class FamilyBuilder;
    void build_index();

    std::uint32_t universe_ = 0;
    std::vector<std::uint32_t> offsets_;
    std::vector<ElementId> elements_;
    std::vector<std::uint32_t> index_offsets_;
    std::vector<std::uint32_t> index_;
    std::size_t max_size_ = 0;
    std::string label_;
};

using FamilyPtr = std::shared_ptr<const WinningFamily>;

/// Streams every copy of H in K_n as a sorted list of edge ids, exactly once
/// per distinct edge set. f returns false to stop.
void for_each_h_copy(std::uint32_t n, const PatternGraph& h,
                     const std::function<bool(std::span<const ElementId>, std::span<const Vertex>)>& f);

WinningFamily enumerate_h_copies(std::uint32_t n, const PatternGraph& h, const FamilyLimits& limits = {});

/// Union edge sets of t distinct H-copies whose vertex sets share >= 3 common vertices.
WinningFamily enumerate_clusters(std::uint32_t n, const PatternGraph& h, std::uint32_t t,
                                 const FamilyLimits& limits = {});

/// A concrete H-bar graph in K_n: its edge ids (sorted), vertex set (sorted) and open pair.
struct HbarInstance {
    std::vector<ElementId> edges;
    std::vector<Vertex> vertices;
    Vertex v;
    Vertex w;
};

/// Every H-bar graph in K_n, deduplicated by (edge set, pair).
std::vector<HbarInstance> enumerate_hbar_instances(std::uint32_t n, const PatternGraph& h,
                                                   const FamilyLimits& limits = {});

/// Union edge sets of simple t-fans: t distinct H-bar graphs whose vertex sets
/// intersect in exactly two vertices. For t = 1 every H-bar graph is a member.
WinningFamily enumerate_simple_fans(std::uint32_t n, const PatternGraph& h, std::uint32_t t,
                                    const FamilyLimits& limits = {});

/// Process-wide cache of immutable families keyed by a description string.
/// A build that failed with CapacityError is remembered and rethrown.
FamilyPtr cached_family(const std::string& key, const std::function<WinningFamily()>& build);

}  // namespace mbg
