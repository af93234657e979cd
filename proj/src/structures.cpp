#include "mbg/structures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "mbg/errors.hpp"

namespace mbg {

std::string_view to_string(FactorStatus s) {
    switch (s) {
        case FactorStatus::Found: return "found";
        case FactorStatus::None: return "none";
        case FactorStatus::Divisibility: return "impossible: divisibility";
        case FactorStatus::Budget: return "unknown: node budget exhausted";
    }
    return "?";
}

std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::NoCounterexample: return "no counterexample found";
        case CheckStatus::Vacuous: return "vacuous";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// K_r-factors

namespace {

struct BudgetExhausted {};

class FactorSearch {
public:
    FactorSearch(const Graph& g, std::uint32_t r, std::uint64_t budget) : g_(g), r_(r), budget_(budget) {}

    bool solve(VertexSet& uncovered) {
        if (uncovered.empty()) return true;
        if (++nodes_ > budget_ && budget_ != 0) throw BudgetExhausted{};

        // Branch on the vertex with the fewest completions inside the uncovered set.
        Vertex best_v = uncovered.universe();
        std::size_t best_count = ~std::size_t{0};
        for (Vertex u = uncovered.next(0); u < uncovered.universe(); u = uncovered.next(u + 1)) {
            scratch_ = uncovered;
            scratch_ &= g_.neighbors(u);
            const VertexSet& cand = scratch_;
            if (cand.size() + 1 < r_) return false;
            std::size_t count = 0;
            for_each_clique(g_, cand, r_ - 1, [&](const std::vector<Vertex>&) { return ++count < best_count; });
            if (count == 0) return false;
            if (count < best_count) {
                best_count = count;
                best_v = u;
                if (count == 1) break;
            }
        }

        VertexSet cand = uncovered & g_.neighbors(best_v);
        std::vector<std::vector<Vertex>> options;
        for_each_clique(g_, cand, r_ - 1, [&](const std::vector<Vertex>& c) {
            options.push_back(c);
            return true;
        });
        for (auto& c : options) {
            uncovered.erase(best_v);
            for (auto x : c) uncovered.erase(x);
            c.push_back(best_v);
            blocks_.push_back(c);
            if (solve(uncovered)) return true;
            blocks_.pop_back();
            for (auto x : c) uncovered.insert(x);
        }
        return false;
    }

    std::vector<std::vector<Vertex>> blocks_;
    std::uint64_t nodes_ = 0;

private:
    const Graph& g_;
    std::uint32_t r_;
    std::uint64_t budget_;
    VertexSet scratch_;
};

}  // namespace

FactorResult has_kr_factor_on(const Graph& g, std::span<const Vertex> vertices, std::uint32_t r,
                              std::uint64_t node_budget) {
    if (r == 0) throw PreconditionFault("factor size r must be >= 1");
    FactorResult out;
    if (vertices.size() % r != 0) {
        out.status = FactorStatus::Divisibility;
        return out;
    }
    VertexSet uncovered(g.vertex_count());
    for (auto v : vertices) uncovered.insert(v);
    FactorSearch search(g, r, node_budget);
    try {
        const bool found = search.solve(uncovered);
        out.status = found ? FactorStatus::Found : FactorStatus::None;
    } catch (const BudgetExhausted&) {
        out.status = FactorStatus::Budget;
    }
    out.nodes = search.nodes_;
    if (out.status == FactorStatus::Found) {
        FactorCertificate cert;
        for (auto& b : search.blocks_) {
            std::sort(b.begin(), b.end());
            cert.blocks.push_back(b);
        }
        std::sort(cert.blocks.begin(), cert.blocks.end());
        if (auto err = verify_factor(g, vertices, r, cert)) throw InvariantViolation("factor search produced a bad certificate: " + *err);
        out.certificate = std::move(cert);
    }
    return out;
}

FactorResult has_kr_factor(const Graph& g, std::uint32_t r, std::uint64_t node_budget) {
    std::vector<Vertex> all(g.vertex_count());
    std::iota(all.begin(), all.end(), 0);
    return has_kr_factor_on(g, all, r, node_budget);
}

std::optional<std::string> verify_factor(const Graph& g, std::span<const Vertex> vertices, std::uint32_t r,
                                         const FactorCertificate& cert) {
    std::vector<int> seen(g.vertex_count(), 0);
    for (const auto& b : cert.blocks) {
        if (b.size() != r) return "block of size " + std::to_string(b.size()) + ", expected " + std::to_string(r);
        for (auto v : b) {
            if (v >= g.vertex_count()) return "vertex " + std::to_string(v) + " out of range";
            if (seen[v]++) return "vertex " + std::to_string(v) + " used twice";
        }
        if (!g.is_clique(b)) return "block is not a clique";
    }
    std::size_t covered = 0;
    for (auto v : vertices) {
        if (v >= g.vertex_count() || !seen[v]) return "vertex " + std::to_string(v) + " not covered";
        ++covered;
    }
    if (covered != cert.blocks.size() * r) return "certificate covers vertices outside the target set";
    return std::nullopt;
}

std::optional<std::string> verify_factor(const Graph& g, std::uint32_t r, const FactorCertificate& cert) {
    std::vector<Vertex> all(g.vertex_count());
    std::iota(all.begin(), all.end(), 0);
    return verify_factor(g, all, r, cert);
}

std::optional<std::vector<Vertex>> kr_at_vertex(const Graph& g, Vertex v, std::uint32_t r) {
    if (r == 0) return std::nullopt;
    if (v >= g.vertex_count()) throw InvalidBoard("kr_at_vertex: vertex out of range");
    auto c = find_clique(g, g.neighbors(v), r - 1);
    if (!c) return std::nullopt;
    c->push_back(v);
    std::sort(c->begin(), c->end());
    if (!g.is_clique(*c)) throw InvariantViolation("kr_at_vertex: witness is not a clique");
    return c;
}

// ---------------------------------------------------------------------------
// Chains

std::vector<Vertex> Chain::vertices() const {
    std::vector<Vertex> out(links.begin(), links.end());
    for (const auto& c : cliques) out.insert(out.end(), c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Vertex> Chain::block(std::uint32_t i) const {
    std::vector<Vertex> out{links.at(i)};
    out.insert(out.end(), cliques.at(i).begin(), cliques.at(i).end());
    out.push_back(links.at(i + 1));
    return out;
}

FactorCertificate Chain::factor_after_removal(Vertex u) const {
    const auto it = std::find(links.begin(), links.end(), u);
    if (it == links.end()) throw PreconditionFault("vertex " + std::to_string(u) + " is not removable from the chain");
    const auto j = static_cast<std::uint32_t>(it - links.begin());
    FactorCertificate cert;
    for (std::uint32_t i = 0; i < ell; ++i) {
        std::vector<Vertex> b = cliques[i];
        // Blocks left of the removed link keep their left link, the others their right one.
        b.push_back(i < j ? links[i] : links[i + 1]);
        std::sort(b.begin(), b.end());
        cert.blocks.push_back(std::move(b));
    }
    return cert;
}

Chain build_chain(std::uint32_t r, std::uint32_t ell) {
    if (r < 2) throw PreconditionFault("chains need r >= 2");
    Chain c;
    c.r = r;
    c.ell = ell;
    c.links.push_back(0);
    for (std::uint32_t i = 0; i < ell; ++i) {
        std::vector<Vertex> clique;
        for (std::uint32_t k = 1; k < r; ++k) clique.push_back(i * r + k);
        c.cliques.push_back(std::move(clique));
        c.links.push_back((i + 1) * r);
    }
    return c;
}

Graph chain_graph(const Chain& c) {
    const auto verts = c.vertices();
    const Vertex n = verts.empty() ? 0 : verts.back() + 1;
    Graph g(n);
    for (std::uint32_t i = 0; i < c.ell; ++i) {
        const auto b = c.block(i);
        for (std::size_t x = 0; x < b.size(); ++x)
            for (std::size_t y = x + 1; y < b.size(); ++y)
                if (!(x == 0 && y + 1 == b.size())) g.add_edge(b[x], b[y]);
    }
    return g;
}

std::optional<std::string> verify_chain_in(const Graph& g, const Chain& c) {
    if (c.links.size() != static_cast<std::size_t>(c.ell) + 1 || c.cliques.size() != c.ell) return "malformed chain";
    const auto verts = c.vertices();
    if (std::adjacent_find(verts.begin(), verts.end()) != verts.end()) return "chain reuses a vertex";
    if (verts.size() != c.vertex_count()) return "chain has the wrong vertex count";
    for (std::uint32_t i = 0; i < c.ell; ++i) {
        if (c.cliques[i].size() + 1 != c.r) return "block clique has the wrong size";
        const auto b = c.block(i);
        for (std::size_t x = 0; x < b.size(); ++x)
            for (std::size_t y = x + 1; y < b.size(); ++y)
                if (!(x == 0 && y + 1 == b.size()) && !g.has_edge(b[x], b[y]))
                    return "block " + std::to_string(i) + " misses an edge";
    }
    return std::nullopt;
}

namespace {

class ChainEmbedder {
public:
    ChainEmbedder(const Graph& g, std::uint32_t r, std::uint32_t ell, std::uint64_t budget)
        : g_(g), r_(r), ell_(ell), budget_(budget), used_(g.vertex_count()) {}

    bool from_link(Vertex f) {
        if (chain_.cliques.size() == ell_) return true;
        if (++nodes_ > budget_) throw BudgetExhausted{};
        VertexSet cand = g_.neighbors(f);
        cand.subtract(used_);
        bool done = false;
        for_each_clique(g_, cand, r_ - 1, [&](const std::vector<Vertex>& clique) {
            if (++nodes_ > budget_) throw BudgetExhausted{};
            VertexSet links(g_.vertex_count());
            // The next link only has to see the clique, not f.
            for (Vertex y = 0; y < g_.vertex_count(); ++y) links.insert(y);
            links.subtract(used_);
            links.erase(f);
            for (auto x : clique) {
                links &= g_.neighbors(x);
                links.erase(x);
            }
            if (links.empty()) return true;
            for (auto x : clique) used_.insert(x);
            chain_.cliques.push_back(clique);
            for (Vertex y = links.next(0); y < links.universe(); y = links.next(y + 1)) {
                used_.insert(y);
                chain_.links.push_back(y);
                if (from_link(y)) {
                    done = true;
                    return false;
                }
                chain_.links.pop_back();
                used_.erase(y);
            }
            chain_.cliques.pop_back();
            for (auto x : clique) used_.erase(x);
            return true;
        });
        return done;
    }

    bool run(const VertexSet* avoid) {
        if (avoid) used_ |= *avoid;
        for (Vertex f = 0; f < g_.vertex_count(); ++f) {
            if (used_.contains(f)) continue;
            used_.insert(f);
            chain_.links = {f};
            chain_.cliques.clear();
            if (from_link(f)) return true;
            used_.erase(f);
        }
        return false;
    }

    Chain chain_;
    std::uint64_t nodes_ = 0;

private:
    const Graph& g_;
    std::uint32_t r_;
    std::uint32_t ell_;
    std::uint64_t budget_;
    VertexSet used_;
};

}  // namespace

ChainSearch find_chain_in(const Graph& g, std::uint32_t r, std::uint32_t ell, std::uint64_t node_budget,
                          const VertexSet* avoid) {
    if (r < 2) throw PreconditionFault("chains need r >= 2");
    ChainSearch out;
    ChainEmbedder emb(g, r, ell, node_budget);
    emb.chain_.r = r;
    emb.chain_.ell = ell;
    try {
        if (emb.run(avoid)) out.chain = emb.chain_;
    } catch (const BudgetExhausted&) {
        out.budget_exhausted = true;
    }
    out.nodes = emb.nodes_;
    if (out.chain) {
        out.chain->r = r;
        out.chain->ell = ell;
        if (auto err = verify_chain_in(g, *out.chain)) throw InvariantViolation("find_chain_in: " + *err);
    }
    return out;
}

FactorCertificate canonical_factor(const Graph& g, std::span<const Chain> chains, std::span<const Vertex> clique) {
    if (chains.size() != clique.size()) throw PreconditionFault("need exactly one clique vertex per chain");
    if (!g.is_clique(clique)) throw PreconditionFault("K is not a clique of the graph");
    std::vector<Vertex> all;
    FactorCertificate cert;
    cert.blocks.emplace_back(clique.begin(), clique.end());
    std::sort(cert.blocks[0].begin(), cert.blocks[0].end());
    for (const auto& c : chains) {
        if (auto err = verify_chain_in(g, c)) throw PreconditionFault("chain is not in the graph: " + *err);
        std::vector<Vertex> hits;
        for (auto k : clique)
            if (std::find(c.links.begin(), c.links.end(), k) != c.links.end()) hits.push_back(k);
        if (hits.size() != 1) throw PreconditionFault("K must meet each R(C_i) in exactly one vertex");
        const auto part = c.factor_after_removal(hits[0]);
        cert.blocks.insert(cert.blocks.end(), part.blocks.begin(), part.blocks.end());
        const auto vs = c.vertices();
        all.insert(all.end(), vs.begin(), vs.end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) throw PreconditionFault("chains are not vertex-disjoint");
    const auto r = static_cast<std::uint32_t>(clique.size());
    if (auto err = verify_factor(g, all, r, cert)) throw InvariantViolation("canonical_factor: " + *err);
    return cert;
}

// ---------------------------------------------------------------------------
// Vertex covers and Haxell systems

namespace {

std::vector<std::uint64_t> edge_masks(const Hypergraph& h) {
    if (h.vertex_count > 64) throw CapacityError("vertex cover: at most 64 vertices supported");
    std::vector<std::uint64_t> masks;
    masks.reserve(h.edges.size());
    for (const auto& e : h.edges) {
        std::uint64_t m = 0;
        for (auto v : e) {
            if (v >= h.vertex_count) throw InvalidBoard("hyperedge vertex out of range");
            m |= std::uint64_t{1} << v;
        }
        if (m == 0) throw InvalidBoard("empty hyperedge has no cover");
        masks.push_back(m);
    }
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    return masks;
}

class CoverSearch {
public:
    CoverSearch(std::vector<std::uint64_t> edges, std::uint64_t budget) : edges_(std::move(edges)), budget_(budget) {}

    /// Looks for covers strictly smaller than `best`.
    void run(std::size_t best, std::uint64_t best_mask) {
        best_ = best;
        best_mask_ = best_mask;
        rec(0, 0, 0);
    }

    std::size_t best_ = 0;
    std::uint64_t best_mask_ = 0;
    bool stop_on_improve_ = false;
    std::uint64_t nodes_ = 0;

private:
    std::size_t packing_bound(std::uint64_t chosen, std::uint64_t& pick_edge) const {
        std::size_t bound = 0;
        std::uint64_t used = 0;
        int best_size = 65;
        pick_edge = 0;
        for (auto e : edges_) {
            if (e & chosen) continue;
            const int sz = std::popcount(e);
            if (sz < best_size) {
                best_size = sz;
                pick_edge = e;
            }
            if ((e & used) == 0) {
                used |= e;
                ++bound;
            }
        }
        return bound;
    }

    bool rec(std::uint64_t chosen, std::uint64_t forbidden, std::size_t count) {
        if (++nodes_ > budget_) throw CapacityError("vertex cover search exceeded its node budget");
        std::uint64_t edge = 0;
        const std::size_t bound = packing_bound(chosen, edge);
        if (edge == 0) {
            if (count < best_) {
                best_ = count;
                best_mask_ = chosen;
                if (stop_on_improve_) return true;
            }
            return false;
        }
        if (count + bound >= best_) return false;
        std::uint64_t options = edge & ~forbidden;
        std::uint64_t tried = 0;
        while (options) {
            const std::uint64_t bit = options & (~options + 1);
            options &= options - 1;
            if (rec(chosen | bit, forbidden | tried, count + 1)) return true;
            tried |= bit;
        }
        return false;
    }

    std::vector<std::uint64_t> edges_;
    std::uint64_t budget_;
};

std::vector<Vertex> mask_vertices(std::uint64_t m) {
    std::vector<Vertex> out;
    while (m) {
        out.push_back(static_cast<Vertex>(std::countr_zero(m)));
        m &= m - 1;
    }
    return out;
}

}  // namespace

CoverResult tau(const Hypergraph& h, std::uint64_t node_budget) {
    auto masks = edge_masks(h);
    // Greedy upper bound: take every vertex of a maximal packing.
    std::uint64_t greedy = 0;
    for (auto e : masks)
        if ((e & greedy) == 0) greedy |= e;
    CoverSearch search(std::move(masks), node_budget);
    search.run(static_cast<std::size_t>(std::popcount(greedy)) + 1, greedy);
    return {search.best_, mask_vertices(search.best_mask_)};
}

bool tau_at_least(const Hypergraph& h, std::size_t k, std::uint64_t node_budget) {
    if (k == 0) return true;
    auto masks = edge_masks(h);
    std::uint64_t used = 0;
    std::size_t packing = 0;
    for (auto e : masks)
        if ((e & used) == 0) {
            used |= e;
            ++packing;
        }
    if (packing >= k) return true;
    CoverSearch search(std::move(masks), node_budget);
    search.stop_on_improve_ = true;
    search.run(k, 0);
    return search.best_ >= k;
}

namespace {

bool find_system(const std::vector<std::vector<std::uint64_t>>& edges, const std::vector<std::size_t>& order,
                 std::size_t depth, std::uint64_t used, std::vector<std::size_t>& chosen) {
    if (depth == order.size()) return true;
    const auto i = order[depth];
    for (std::size_t k = 0; k < edges[i].size(); ++k) {
        if (edges[i][k] & used) continue;
        chosen[i] = k;
        if (find_system(edges, order, depth + 1, used | edges[i][k], chosen)) return true;
    }
    return false;
}

}  // namespace

HaxellResult haxell_select(std::span<const Hypergraph> hs, std::uint32_t r, Rng* rng, std::size_t samples) {
    HaxellResult out;
    const std::size_t t = hs.size();
    if (t == 0) {
        out.criterion_holds = true;
        return out;
    }
    std::uint32_t nv = 0;
    for (const auto& h : hs) nv = std::max(nv, h.vertex_count);
    auto union_of = [&](const std::vector<std::size_t>& idx) {
        Hypergraph u{nv, {}};
        for (auto i : idx) u.edges.insert(u.edges.end(), hs[i].edges.begin(), hs[i].edges.end());
        return u;
    };
    auto check = [&](const std::vector<std::size_t>& idx) {
        const auto u = union_of(idx);
        const std::size_t need = 2ULL * r * idx.size();
        if (u.edges.empty() || !tau_at_least(u, need)) {
            out.violating_set = idx;
            out.violating_tau = u.edges.empty() ? 0 : tau(u).tau;
            return false;
        }
        return true;
    };
    if (t <= 16) {
        for (std::uint32_t mask = 1; mask < (1U << t); ++mask) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < t; ++i)
                if ((mask >> i) & 1U) idx.push_back(i);
            if (!check(idx)) return out;
        }
    } else {
        if (!rng) throw PreconditionFault("haxell_select: sampling needs a generator");
        out.sampled = true;
        for (std::size_t s = 0; s < samples; ++s) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < t; ++i)
                if (rng->bernoulli(0.5)) idx.push_back(i);
            if (idx.empty()) continue;
            if (!check(idx)) return out;
        }
    }
    out.criterion_holds = true;

    std::vector<std::vector<std::uint64_t>> edges(t);
    for (std::size_t i = 0; i < t; ++i) {
        for (const auto& e : hs[i].edges) {
            std::uint64_t m = 0;
            for (auto v : e) m |= std::uint64_t{1} << v;
            edges[i].push_back(m);
        }
    }
    std::vector<std::size_t> order(t);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return edges[a].size() < edges[b].size(); });
    std::vector<std::size_t> chosen(t, 0);
    if (!find_system(edges, order, 0, 0, chosen))
        throw InvariantViolation("Haxell criterion holds but no disjoint system was found");
    out.chosen = std::move(chosen);
    return out;
}

// ---------------------------------------------------------------------------
// Embeddings and dangerous structures

namespace {

bool embed_rec(const Graph& host, const Graph& pat, const std::vector<Vertex>& order, std::size_t depth,
               std::vector<Vertex>& map, VertexSet& used, const std::function<bool(std::span<const Vertex>)>& f) {
    if (depth == order.size()) return f(map);
    const Vertex x = order[depth];
    VertexSet cand(host.vertex_count());
    bool constrained = false;
    for (std::size_t d = 0; d < depth; ++d) {
        const Vertex y = order[d];
        if (!pat.has_edge(x, y)) continue;
        if (!constrained) {
            cand = host.neighbors(map[y]);
            constrained = true;
        } else {
            cand &= host.neighbors(map[y]);
        }
    }
    if (!constrained)
        for (Vertex v = 0; v < host.vertex_count(); ++v) cand.insert(v);
    cand.subtract(used);
    for (Vertex v = cand.next(0); v < cand.universe(); v = cand.next(v + 1)) {
        map[x] = v;
        used.insert(v);
        const bool go = embed_rec(host, pat, order, depth + 1, map, used, f);
        used.erase(v);
        if (!go) return false;
    }
    return true;
}

}  // namespace

void for_each_embedding(const Graph& host, const PatternGraph& pattern, std::span<const int> fixed,
                        const std::function<bool(std::span<const Vertex>)>& f) {
    const std::uint32_t k = pattern.vertex_count();
    if (fixed.size() != k) throw PreconditionFault("for_each_embedding: fixed map has the wrong size");
    const Graph pat = pattern.graph();
    std::vector<Vertex> map(k, 0);
    VertexSet used(host.vertex_count());
    std::vector<Vertex> order;
    std::vector<bool> placed(k, false);
    for (Vertex i = 0; i < k; ++i) {
        if (fixed[i] < 0) continue;
        const auto v = static_cast<Vertex>(fixed[i]);
        if (v >= host.vertex_count() || used.contains(v)) return;
        map[i] = v;
        used.insert(v);
        placed[i] = true;
    }
    for (Vertex i = 0; i < k; ++i)
        for (Vertex j = i + 1; j < k; ++j)
            if (placed[i] && placed[j] && pat.has_edge(i, j) && !host.has_edge(map[i], map[j])) return;
    // Order the free vertices so each one is adjacent to something placed when possible.
    std::vector<Vertex> free_order;
    std::vector<bool> in = placed;
    while (free_order.size() + static_cast<std::size_t>(std::count(placed.begin(), placed.end(), true)) < k) {
        int pick = -1, best = -1;
        for (Vertex i = 0; i < k; ++i) {
            if (in[i]) continue;
            int links = 0;
            for (Vertex j = 0; j < k; ++j)
                if (in[j] && pat.has_edge(i, j)) ++links;
            if (links > best) {
                best = links;
                pick = static_cast<int>(i);
            }
        }
        in[static_cast<std::size_t>(pick)] = true;
        free_order.push_back(static_cast<Vertex>(pick));
    }
    // embed_rec checks adjacency against earlier entries of `order`, so fixed vertices go first.
    for (Vertex i = 0; i < k; ++i)
        if (placed[i]) order.push_back(i);
    const std::size_t start = order.size();
    order.insert(order.end(), free_order.begin(), free_order.end());
    if (start == order.size()) {
        f(map);
        return;
    }
    // Recurse from depth `start`; embed_rec only reads map entries of earlier order positions.
    embed_rec(host, pat, order, start, map, used, f);
}

namespace {

using InstanceKey = std::pair<std::vector<std::pair<Vertex, Vertex>>, std::pair<Vertex, Vertex>>;

DangerousInstance make_instance(const HbarGraph& hb, std::span<const Vertex> map) {
    DangerousInstance inst;
    for (auto [a, b] : hb.f.edges()) {
        auto x = map[a], y = map[b];
        if (x > y) std::swap(x, y);
        inst.edges.emplace_back(x, y);
    }
    std::sort(inst.edges.begin(), inst.edges.end());
    for (auto [a, b] : hb.f.edges()) {
        inst.vertices.push_back(map[a]);
        inst.vertices.push_back(map[b]);
    }
    inst.vertices.push_back(map[hb.v]);
    inst.vertices.push_back(map[hb.w]);
    std::sort(inst.vertices.begin(), inst.vertices.end());
    inst.vertices.erase(std::unique(inst.vertices.begin(), inst.vertices.end()), inst.vertices.end());
    inst.v = std::min(map[hb.v], map[hb.w]);
    inst.w = std::max(map[hb.v], map[hb.w]);
    return inst;
}

}  // namespace

void for_each_dangerous_through(const Graph& maker, const Graph& breaker, const std::vector<HbarGraph>& hbars, Vertex a,
                                Vertex b, const std::function<void(const DangerousInstance&)>& f) {
    std::set<InstanceKey> seen;
    for (const auto& hb : hbars) {
        const std::uint32_t k = hb.f.vertex_count();
        for (auto [x, y] : hb.f.edges()) {
            for (int flip = 0; flip < 2; ++flip) {
                std::vector<int> fixed(k, -1);
                fixed[x] = static_cast<int>(flip ? b : a);
                fixed[y] = static_cast<int>(flip ? a : b);
                for_each_embedding(maker, hb.f, fixed, [&](std::span<const Vertex> map) {
                    const Vertex pv = map[hb.v], pw = map[hb.w];
                    if (breaker.has_edge(pv, pw)) return true;
                    auto inst = make_instance(hb, map);
                    if (seen.emplace(inst.edges, std::make_pair(inst.v, inst.w)).second) f(inst);
                    return true;
                });
            }
        }
    }
}

namespace {

std::vector<DangerousGroup> maximal_groups(const std::vector<DangerousInstance>& inst, std::size_t core_size,
                                           std::uint32_t t_max, bool& truncated) {
    std::map<std::vector<Vertex>, std::vector<std::size_t>> by_core;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const auto& vs = inst[i].vertices;
        if (vs.size() < core_size) continue;
        std::vector<std::size_t> pick(core_size);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            std::vector<Vertex> core;
            for (auto p : pick) core.push_back(vs[p]);
            by_core[core].push_back(i);
            int j = static_cast<int>(core_size) - 1;
            while (j >= 0 && pick[static_cast<std::size_t>(j)] == vs.size() - core_size + static_cast<std::size_t>(j)) --j;
            if (j < 0) break;
            ++pick[static_cast<std::size_t>(j)];
            for (auto q = static_cast<std::size_t>(j) + 1; q < core_size; ++q) pick[q] = pick[q - 1] + 1;
        }
    }
    // Collapse identical member sets, then drop member sets strictly inside another.
    std::map<std::vector<std::size_t>, std::vector<Vertex>> by_members;
    for (auto& [core, members] : by_core) by_members.emplace(members, core);
    std::vector<std::pair<std::vector<std::size_t>, std::vector<Vertex>>> groups(by_members.begin(), by_members.end());
    std::sort(groups.begin(), groups.end(), [](const auto& x, const auto& y) { return x.first.size() > y.first.size(); });
    std::vector<DangerousGroup> out;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        bool inside = false;
        if (groups.size() <= 4000) {
            for (std::size_t j = 0; j < i && !inside; ++j)
                if (groups[j].first.size() > groups[i].first.size() &&
                    std::includes(groups[j].first.begin(), groups[j].first.end(), groups[i].first.begin(),
                                  groups[i].first.end()))
                    inside = true;
        }
        if (inside) continue;
        DangerousGroup g;
        g.core = groups[i].second;
        g.members = groups[i].first;
        std::vector<Vertex> common = inst[g.members[0]].vertices;
        for (std::size_t m = 1; m < g.members.size(); ++m) {
            std::vector<Vertex> next;
            const auto& vs = inst[g.members[m]].vertices;
            std::set_intersection(common.begin(), common.end(), vs.begin(), vs.end(), std::back_inserter(next));
            common.swap(next);
        }
        g.simple = common.size() == 2;
        if (g.members.size() > t_max) {
            g.members.resize(t_max);
            truncated = true;
        }
        out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.core < y.core; });
    return out;
}

}  // namespace

DangerousReport dangerous_structures(const Graph& maker, const Graph& breaker, const PatternGraph& h,
                                     std::uint32_t t_max) {
    DangerousReport rep;
    const auto core = h.without_isolated();
    std::set<InstanceKey> seen;
    for (const auto& hb : hbar_graphs(core)) {
        std::vector<int> fixed(hb.f.vertex_count(), -1);
        for_each_embedding(maker, hb.f, fixed, [&](std::span<const Vertex> map) {
            if (breaker.has_edge(map[hb.v], map[hb.w])) return true;
            auto inst = make_instance(hb, map);
            if (seen.emplace(inst.edges, std::make_pair(inst.v, inst.w)).second) rep.instances.push_back(std::move(inst));
            return true;
        });
    }
    std::sort(rep.instances.begin(), rep.instances.end(), [](const auto& a, const auto& b) {
        return std::tie(a.v, a.w, a.edges) < std::tie(b.v, b.w, b.edges);
    });
    rep.fans = maximal_groups(rep.instances, 2, t_max, rep.truncated);
    rep.flowers = maximal_groups(rep.instances, 3, t_max, rep.truncated);
    return rep;
}

// ---------------------------------------------------------------------------
// Neat-graph checks

namespace {

bool transversal_clique_minus(const Graph& g, const std::vector<std::vector<Vertex>>& parts, std::size_t depth,
                              std::vector<Vertex>& chosen, int missing, std::uint64_t& nodes, std::uint64_t budget) {
    if (depth == parts.size()) return true;
    if (++nodes > budget) throw BudgetExhausted{};
    for (auto x : parts[depth]) {
        int miss = missing;
        for (auto y : chosen)
            if (!g.has_edge(x, y)) ++miss;
        if (miss > 1) continue;
        chosen.push_back(x);
        if (transversal_clique_minus(g, parts, depth + 1, chosen, miss, nodes, budget)) return true;
        chosen.pop_back();
    }
    return false;
}

}  // namespace

NeatReport neat_check(const Graph& g, const NeatParams& prm, Rng& rng) {
    NeatReport rep;
    const std::uint32_t n = g.vertex_count();
    if (n == 0) throw PreconditionFault("neat_check on an empty vertex set");
    const double nd = static_cast<double>(n);

    // P1, degree part: exact.
    const double need_deg = nd * prm.p / 2.0;
    std::size_t bad = 0;
    Vertex first_bad = 0;
    for (Vertex v = 0; v < n; ++v)
        if (static_cast<double>(g.degree(v)) < need_deg) {
            if (bad++ == 0) first_bad = v;
        }
    rep.p1_degree.status = bad == 0 ? CheckStatus::Pass : CheckStatus::Fail;
    rep.p1_degree.detail = bad == 0 ? "every degree >= np/2"
                                    : std::to_string(bad) + " vertices below np/2, first " + std::to_string(first_bad);

    // P1, expansion part: sampled.
    const auto x_size = static_cast<std::uint32_t>(std::ceil(std::log(nd) / prm.p));
    const auto y_size = static_cast<std::uint32_t>(std::ceil(prm.alpha * nd));
    if (x_size + y_size > n || x_size == 0 || y_size == 0) {
        rep.p1_expansion = {CheckStatus::Vacuous, "|X| + |Y| exceeds n"};
        rep.warnings.push_back("P1 expansion thresholds are vacuous for these parameters");
    } else {
        rep.p1_expansion = {CheckStatus::NoCounterexample, "no counterexample in " + std::to_string(prm.trials) + " trials"};
        for (std::uint32_t t = 0; t < prm.trials; ++t) {
            const auto pick = rng.sample(n, x_size + y_size);
            VertexSet y(n);
            for (std::uint32_t i = x_size; i < pick.size(); ++i) y.insert(pick[i]);
            bool ok = false;
            for (std::uint32_t i = 0; i < x_size && !ok; ++i)
                ok = static_cast<double>((g.neighbors(pick[i]) & y).size()) >= y_size * prm.p / 2.0;
            if (!ok) {
                rep.p1_expansion = {CheckStatus::Fail, "trial " + std::to_string(t) + ": no vertex of X has |Y|p/2 neighbours in Y"};
                break;
            }
        }
    }

    // P2: K_{r-1} inside large subsets of neighbourhoods.
    const auto nb_size = static_cast<std::uint32_t>(std::ceil(prm.alpha * nd * prm.p));
    std::vector<Vertex> hosts;
    for (Vertex v = 0; v < n; ++v)
        if (g.degree(v) >= nb_size) hosts.push_back(v);
    if (nb_size > n || nb_size < prm.r - 1 || hosts.empty()) {
        rep.p2 = {CheckStatus::Vacuous, "no neighbourhood has alpha*n*p vertices"};
        rep.warnings.push_back("P2 threshold is vacuous for these parameters");
    } else {
        rep.p2 = {CheckStatus::NoCounterexample, "no counterexample in " + std::to_string(prm.trials) + " trials"};
        for (std::uint32_t t = 0; t < prm.trials; ++t) {
            const Vertex v = hosts[rng.below(hosts.size())];
            const auto nb = g.neighbors(v).to_vector();
            const auto pick = rng.sample(static_cast<std::uint32_t>(nb.size()), nb_size);
            VertexSet x(n);
            for (auto i : pick) x.insert(nb[i]);
            if (!find_clique(g, x, prm.r - 1)) {
                rep.p2 = {CheckStatus::Fail, "trial " + std::to_string(t) + ": subset of N(" + std::to_string(v) + ") has no K_" +
                                                 std::to_string(prm.r - 1)};
                break;
            }
        }
    }

    // P3: a K_{r+1}^- across r+1 disjoint large sets.
    const auto part = static_cast<std::uint32_t>(std::ceil(std::pow(nd, 1.0 - prm.beta)));
    if (static_cast<std::uint64_t>(part) * (prm.r + 1) > n) {
        rep.p3 = {CheckStatus::Vacuous, "(r+1) n^(1-beta) exceeds n"};
        rep.warnings.push_back("P3 threshold is vacuous for these parameters");
    } else {
        rep.p3 = {CheckStatus::NoCounterexample, "no counterexample in " + std::to_string(prm.trials) + " trials"};
        std::uint32_t undecided = 0;
        for (std::uint32_t t = 0; t < prm.trials; ++t) {
            const auto pick = rng.sample(n, part * (prm.r + 1));
            std::vector<std::vector<Vertex>> parts(prm.r + 1);
            for (std::size_t i = 0; i < pick.size(); ++i) parts[i / part].push_back(pick[i]);
            std::vector<Vertex> chosen;
            std::uint64_t nodes = 0;
            try {
                if (!transversal_clique_minus(g, parts, 0, chosen, 0, nodes, 200'000)) {
                    rep.p3 = {CheckStatus::Fail, "trial " + std::to_string(t) + ": no transversal K_{r+1}^-"};
                    break;
                }
            } catch (const BudgetExhausted&) {
                ++undecided;
            }
        }
        if (undecided > 0 && rep.p3.status != CheckStatus::Fail)
            rep.p3.detail += " (" + std::to_string(undecided) + " trials hit the search budget)";
    }
    return rep;
}

}  // namespace mbg
