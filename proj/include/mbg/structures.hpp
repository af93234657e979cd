#pragma once
// Exact combinatorial certificates: K_r-factors, cliques at a vertex,
// (r, l)-chains, vertex covers and disjoint hyperedge systems, dangerous
// H-bar structures in Maker's graph, and sampled checks for neat graphs.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mbg/graph.hpp"
#include "mbg/rng.hpp"
#include "mbg/winsets.hpp"

namespace mbg {

struct FactorCertificate {
    std::vector<std::vector<Vertex>> blocks;
};

enum class FactorStatus { Found, None, Divisibility, Budget };
std::string_view to_string(FactorStatus s);

struct FactorResult {
    FactorStatus status = FactorStatus::None;
    std::optional<FactorCertificate> certificate;
    std::uint64_t nodes = 0;
    bool exists() const { return status == FactorStatus::Found; }
};

/// Exact cover search over K_r copies, branching on the uncovered vertex
/// with the fewest K_r completions. node_budget = 0 means unlimited.
FactorResult has_kr_factor(const Graph& g, std::uint32_t r, std::uint64_t node_budget = 0);

/// Same, restricted to partitioning `vertices`.
FactorResult has_kr_factor_on(const Graph& g, std::span<const Vertex> vertices, std::uint32_t r,
                              std::uint64_t node_budget = 0);

/// Checks that `cert` partitions exactly `vertices` into r-cliques of g.
/// Returns a reason on failure.
std::optional<std::string> verify_factor(const Graph& g, std::span<const Vertex> vertices, std::uint32_t r,
                                         const FactorCertificate& cert);
std::optional<std::string> verify_factor(const Graph& g, std::uint32_t r, const FactorCertificate& cert);

/// A K_r containing v (sorted), if any.
std::optional<std::vector<Vertex>> kr_at_vertex(const Graph& g, Vertex v, std::uint32_t r);

/// Copies of K_{r+1}^- glued along link vertices. Block i is
/// {links[i], r-1 clique vertices, links[i+1]} with links[i] links[i+1] the
/// only missing pair.
struct Chain {
    std::uint32_t r = 0;
    std::uint32_t ell = 0;
    std::vector<Vertex> links;
    std::vector<std::vector<Vertex>> cliques;

    std::size_t vertex_count() const { return ell == 0 ? 1 : static_cast<std::size_t>(r) * ell + 1; }
    std::vector<Vertex> vertices() const;
    /// R(C): the link vertices.
    const std::vector<Vertex>& removable() const { return links; }
    std::vector<Vertex> block(std::uint32_t i) const;
    /// K_r-factor of the chain with u in R(C) removed. Throws PreconditionFault otherwise.
    FactorCertificate factor_after_removal(Vertex u) const;
};

/// Canonical (r, ell)-chain on vertices 0..r*ell, link i at id i*r.
Chain build_chain(std::uint32_t r, std::uint32_t ell);
/// The chain as a graph on its own vertex ids.
Graph chain_graph(const Chain& c);

/// Link index of the removed vertex in the worked (5, 4) example.
inline constexpr std::uint32_t kWorkedExampleLink = 3;

struct ChainSearch {
    std::optional<Chain> chain;
    bool budget_exhausted = false;
    std::uint64_t nodes = 0;
};

/// Greedy block-by-block embedding with backtracking; sound, not complete.
/// Vertices in `avoid` are never used.
ChainSearch find_chain_in(const Graph& g, std::uint32_t r, std::uint32_t ell, std::uint64_t node_budget = 1'000'000,
                          const VertexSet* avoid = nullptr);

/// Checks that c is a subgraph of g: blocks are K_{r+1}^- (allowing extra edges).
std::optional<std::string> verify_chain_in(const Graph& g, const Chain& c);

/// Factor of the union of the chains: the clique K plus each chain's factor
/// after removing its K-vertex. K must be an r-clique of g with exactly one
/// vertex in each R(C_i).
FactorCertificate canonical_factor(const Graph& g, std::span<const Chain> chains, std::span<const Vertex> clique);

struct Hypergraph {
    std::uint32_t vertex_count = 0;
    std::vector<std::vector<Vertex>> edges;
};

struct CoverResult {
    std::size_t tau = 0;
    std::vector<Vertex> cover;
};

/// Exact minimum vertex cover by branch and bound (vertex_count <= 64).
CoverResult tau(const Hypergraph& h, std::uint64_t node_budget = 50'000'000);

/// True iff tau(h) >= k; stops as soon as the answer is known.
bool tau_at_least(const Hypergraph& h, std::size_t k, std::uint64_t node_budget = 50'000'000);

struct HaxellResult {
    bool criterion_holds = false;
    /// True when the criterion was checked on sampled index sets only.
    bool sampled = false;
    std::vector<std::size_t> violating_set;
    std::size_t violating_tau = 0;
    /// chosen[i] indexes an edge of H_i; the chosen edges are pairwise disjoint.
    std::vector<std::size_t> chosen;
};

/// Verifies tau(U_{i in I} H_i) >= 2r|I| for every I (all I for t <= 16,
/// `samples` random I beyond) and then finds disjoint representatives.
/// A missing system under a holding criterion raises InvariantViolation.
HaxellResult haxell_select(std::span<const Hypergraph> hs, std::uint32_t r, Rng* rng = nullptr,
                           std::size_t samples = 4096);

/// An H-bar graph found in Maker's graph.
struct DangerousInstance {
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<Vertex> vertices;
    Vertex v;
    Vertex w;
};

/// Maximal group of instances whose vertex sets all contain `core`.
struct DangerousGroup {
    std::vector<Vertex> core;
    std::vector<std::size_t> members;
    /// Common intersection has exactly two vertices.
    bool simple = false;
};

struct DangerousReport {
    std::vector<DangerousInstance> instances;
    std::vector<DangerousGroup> fans;
    std::vector<DangerousGroup> flowers;
    bool truncated = false;
};

/// Calls f(mapping) for each injective map of pattern vertices into `host`
/// preserving pattern edges. `fixed[i] >= 0` pins pattern vertex i.
void for_each_embedding(const Graph& host, const PatternGraph& pattern, std::span<const int> fixed,
                        const std::function<bool(std::span<const Vertex>)>& f);

/// Dangerous H-bar instances whose F uses the Maker edge (a, b).
/// Calls f(instance) once per distinct (edge set, pair).
void for_each_dangerous_through(const Graph& maker, const Graph& breaker, const std::vector<HbarGraph>& hbars, Vertex a,
                                Vertex b, const std::function<void(const DangerousInstance&)>& f);

DangerousReport dangerous_structures(const Graph& maker, const Graph& breaker, const PatternGraph& h,
                                     std::uint32_t t_max = 64);

struct NeatParams {
    double alpha = 0.1;
    double beta = 0.1;
    double p = 0.5;
    std::uint32_t r = 4;
    std::uint32_t trials = 100;
};

enum class CheckStatus { Pass, Fail, NoCounterexample, Vacuous };
std::string_view to_string(CheckStatus s);

struct PropertyReport {
    CheckStatus status = CheckStatus::Vacuous;
    std::string detail;
};

struct NeatReport {
    PropertyReport p1_degree;
    PropertyReport p1_expansion;
    PropertyReport p2;
    PropertyReport p3;
    std::vector<std::string> warnings;
};

NeatReport neat_check(const Graph& g, const NeatParams& params, Rng& rng);

}  // namespace mbg
