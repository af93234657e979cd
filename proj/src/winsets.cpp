#include "mbg/winsets.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <regex>
#include <set>
#include <unordered_map>

#include "mbg/errors.hpp"

namespace mbg {

// ---------------------------------------------------------------------------
// PatternGraph

PatternGraph::PatternGraph(std::uint32_t k, std::vector<std::pair<Vertex, Vertex>> edges, std::string name)
    : k_(k), name_(std::move(name)) {
    for (auto& [u, v] : edges) {
        if (u == v || u >= k || v >= k) throw ParseError("pattern: invalid edge");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
}

PatternGraph::PatternGraph(const Graph& g, std::string name)
    : PatternGraph(g.vertex_count(), g.edges(), std::move(name)) {}

PatternGraph PatternGraph::clique(std::uint32_t k) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex u = 0; u < k; ++u)
        for (Vertex v = u + 1; v < k; ++v) e.emplace_back(u, v);
    return {k, std::move(e), "K" + std::to_string(k)};
}

PatternGraph PatternGraph::clique_minus(std::uint32_t r) {
    const std::uint32_t k = r + 1;
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex u = 0; u < k; ++u)
        for (Vertex v = u + 1; v < k; ++v)
            if (!(u == k - 2 && v == k - 1)) e.emplace_back(u, v);
    return {k, std::move(e), "K" + std::to_string(k) + "minus"};
}

PatternGraph PatternGraph::path(std::uint32_t k) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex u = 0; u + 1 < k; ++u) e.emplace_back(u, u + 1);
    return {k, std::move(e), "P" + std::to_string(k)};
}

PatternGraph PatternGraph::cycle(std::uint32_t k) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex u = 0; u < k; ++u) e.emplace_back(u, (u + 1) % k);
    return {k, std::move(e), "C" + std::to_string(k)};
}

Graph PatternGraph::graph() const { return Graph::from_edges(k_, edges_); }

bool PatternGraph::has_cycle() const {
    std::vector<Vertex> parent(k_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Vertex x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [u, v] : edges_) {
        const Vertex a = find(u), b = find(v);
        if (a == b) return true;
        parent[a] = b;
    }
    return false;
}

std::uint32_t PatternGraph::non_isolated_count() const {
    std::vector<bool> seen(k_, false);
    for (auto [u, v] : edges_) seen[u] = seen[v] = true;
    return static_cast<std::uint32_t>(std::count(seen.begin(), seen.end(), true));
}

PatternGraph PatternGraph::without_isolated() const {
    std::vector<int> relabel(k_, -1);
    for (auto [u, v] : edges_) relabel[u] = relabel[v] = 0;
    std::uint32_t next = 0;
    for (auto& r : relabel)
        if (r == 0) r = static_cast<int>(next++);
    std::vector<std::pair<Vertex, Vertex>> e;
    for (auto [u, v] : edges_) e.emplace_back(static_cast<Vertex>(relabel[u]), static_cast<Vertex>(relabel[v]));
    return {next, std::move(e), name_};
}

PatternGraph parse_pattern(const std::string& spec) {
    if (spec.rfind("file:", 0) == 0) return PatternGraph(read_edge_list_file(spec.substr(5)), spec);

    static const std::regex clique_re(R"(K(\d+))");
    static const std::regex minus_re(R"(K(\d+)minus)");
    static const std::regex r_minus_re(R"(Kr-minus\((\d+)\))");
    static const std::regex path_re(R"(P(\d+))");
    static const std::regex cycle_re(R"(C(\d+))");
    std::smatch m;
    auto num = [&] { return static_cast<std::uint32_t>(std::stoul(m[1].str())); };
    std::optional<PatternGraph> out;
    if (std::regex_match(spec, m, clique_re) && num() >= 2 && num() <= 9) out = PatternGraph::clique(num());
    else if (std::regex_match(spec, m, minus_re) && num() >= 3 && num() <= 9) out = PatternGraph::clique_minus(num() - 1);
    else if (std::regex_match(spec, m, r_minus_re) && num() >= 2 && num() <= 8) out = PatternGraph::clique_minus(num());
    else if (std::regex_match(spec, m, path_re) && num() >= 2 && num() <= 9) out = PatternGraph::path(num());
    else if (std::regex_match(spec, m, cycle_re) && num() >= 3 && num() <= 9) out = PatternGraph::cycle(num());
    if (!out) throw ParseError("unknown pattern \"" + spec + "\"");
    return *out;
}

// ---------------------------------------------------------------------------
// Small-graph canonical forms (k <= 8, masks over C(k,2) <= 28 pair bits)

std::uint64_t pattern_mask(std::uint32_t k, std::span<const std::pair<Vertex, Vertex>> edges) {
    std::uint64_t mask = 0;
    for (auto [u, v] : edges) mask |= std::uint64_t{1} << encode_pair(u, v, k);
    return mask;
}

namespace {

constexpr std::uint32_t kMaxPatternVertices = 8;

void require_small(std::uint32_t k) {
    if (k > kMaxPatternVertices) throw Unsupported("pattern graphs are limited to 8 vertices");
}

std::uint64_t permute_mask(std::uint32_t k, std::uint64_t mask, std::span<const Vertex> perm) {
    std::uint64_t out = 0;
    for (Vertex u = 0; u < k; ++u)
        for (Vertex v = u + 1; v < k; ++v)
            if ((mask >> encode_pair(u, v, k)) & 1U) out |= std::uint64_t{1} << encode_pair(perm[u], perm[v], k);
    return out;
}

template <typename F>
void for_each_permutation(std::uint32_t k, F&& f) {
    std::vector<Vertex> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        f(std::span<const Vertex>(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
}

/// Distinct relabellings of a (mask, pair) placement on {0..k-1}.
/// pair_bit == 64 means no distinguished pair.
std::vector<std::pair<std::uint64_t, unsigned>> distinct_placements(std::uint32_t k, std::uint64_t mask,
                                                                     std::optional<std::pair<Vertex, Vertex>> pair) {
    std::set<std::pair<std::uint64_t, unsigned>> seen;
    for_each_permutation(k, [&](std::span<const Vertex> perm) {
        const unsigned pb = pair ? encode_pair(perm[pair->first], perm[pair->second], k) : 64U;
        seen.emplace(permute_mask(k, mask, perm), pb);
    });
    return {seen.begin(), seen.end()};
}

/// Calls f(subset) for each k-subset of [0, n) in lexicographic order.
template <typename F>
bool for_each_subset(std::uint32_t n, std::uint32_t k, F&& f) {
    if (k > n) return true;
    std::vector<Vertex> s(k);
    std::iota(s.begin(), s.end(), 0);
    while (true) {
        if (!f(std::span<const Vertex>(s))) return false;
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && s[static_cast<std::size_t>(i)] == n - k + static_cast<std::uint32_t>(i)) --i;
        if (i < 0) return true;
        ++s[static_cast<std::size_t>(i)];
        for (auto j = static_cast<std::size_t>(i) + 1; j < k; ++j) s[j] = s[j - 1] + 1;
    }
}

}  // namespace

std::uint64_t canonical_mask(std::uint32_t k, std::uint64_t mask) {
    require_small(k);
    std::uint64_t best = ~std::uint64_t{0};
    for_each_permutation(k, [&](std::span<const Vertex> perm) { best = std::min(best, permute_mask(k, mask, perm)); });
    return best;
}

bool isomorphic(const PatternGraph& a, const PatternGraph& b) {
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
    return canonical_mask(a.vertex_count(), pattern_mask(a.vertex_count(), a.edges())) ==
           canonical_mask(b.vertex_count(), pattern_mask(b.vertex_count(), b.edges()));
}

std::vector<std::vector<Vertex>> automorphisms(const PatternGraph& h) {
    require_small(h.vertex_count());
    const auto mask = pattern_mask(h.vertex_count(), h.edges());
    std::vector<std::vector<Vertex>> out;
    for_each_permutation(h.vertex_count(), [&](std::span<const Vertex> perm) {
        if (permute_mask(h.vertex_count(), mask, perm) == mask) out.emplace_back(perm.begin(), perm.end());
    });
    return out;
}

// ---------------------------------------------------------------------------
// Densities

Rational Rational::make(std::int64_t n, std::int64_t d) {
    if (d == 0) throw UndefinedDensity("zero denominator");
    if (d < 0) n = -n, d = -d;
    const auto g = std::gcd(n < 0 ? -n : n, d);
    return {n / (g == 0 ? 1 : g), d / (g == 0 ? 1 : g)};
}

std::string to_string(const Rational& r) {
    return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

Density m2_density(const PatternGraph& h) {
    const std::uint32_t k = h.vertex_count();
    if (k < 3) throw UndefinedDensity("m2 needs a pattern with at least 3 vertices");
    if (k > 20) throw Unsupported("m2_density: pattern too large");
    const Graph g = h.graph();
    std::optional<Density> best;
    for (std::uint32_t size = 3; size <= k; ++size) {
        for_each_subset(k, size, [&](std::span<const Vertex> s) {
            std::int64_t e = 0;
            for (std::size_t i = 0; i < s.size(); ++i)
                for (std::size_t j = i + 1; j < s.size(); ++j) e += g.has_edge(s[i], s[j]) ? 1 : 0;
            if (e < 2) return true;
            const Rational d = Rational::make(e - 1, static_cast<std::int64_t>(size) - 2);
            // Later (larger) subsets win ties, so the maximiser has the most vertices.
            if (!best || best->value < d || best->value == d) {
                if (best && best->value == d && best->maximizer.size() == size) return true;
                best = Density{d, {s.begin(), s.end()}, false};
            }
            return true;
        });
    }
    if (!best) throw UndefinedDensity("pattern has no subgraph with >= 3 vertices and >= 2 edges");
    // H attains the maximum iff the full vertex set does.
    const auto full_e = static_cast<std::int64_t>(h.edge_count());
    best->h_is_maximal = full_e >= 2 && Rational::make(full_e - 1, static_cast<std::int64_t>(k) - 2) == best->value;
    return *best;
}

std::vector<HbarGraph> hbar_graphs(const PatternGraph& h) {
    require_small(h.vertex_count());
    const std::uint32_t k = h.vertex_count();
    const auto auts = automorphisms(h);
    std::vector<HbarGraph> out;
    std::vector<bool> done(h.edge_count(), false);
    const auto edges = h.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (done[i]) continue;
        // Mark the whole edge orbit under Aut(H).
        for (const auto& perm : auts) {
            auto a = perm[edges[i].first], b = perm[edges[i].second];
            if (a > b) std::swap(a, b);
            const auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(a, b));
            done[static_cast<std::size_t>(it - edges.begin())] = true;
        }
        std::vector<std::pair<Vertex, Vertex>> rest;
        for (std::size_t j = 0; j < edges.size(); ++j)
            if (j != i) rest.push_back(edges[j]);
        out.push_back({PatternGraph(k, std::move(rest), h.name() + "-bar"), edges[i].first, edges[i].second});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Families

WinningFamily::WinningFamily(std::uint32_t universe, const std::vector<std::vector<ElementId>>& sets)
    : universe_(universe) {
    offsets_.push_back(0);
    for (const auto& s : sets) {
        if (s.empty()) throw InvalidBoard("winning family: empty hyperedge");
        std::vector<ElementId> sorted = s;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InvalidBoard("winning family: repeated element in a hyperedge");
        if (sorted.back() >= universe) throw InvalidBoard("winning family: element outside the universe");
        elements_.insert(elements_.end(), sorted.begin(), sorted.end());
        offsets_.push_back(static_cast<std::uint32_t>(elements_.size()));
        max_size_ = std::max(max_size_, sorted.size());
    }
    build_index();
}

void WinningFamily::build_index() {
    index_offsets_.assign(static_cast<std::size_t>(universe_) + 1, 0);
    for (auto e : elements_) ++index_offsets_[e + 1];
    std::partial_sum(index_offsets_.begin(), index_offsets_.end(), index_offsets_.begin());
    index_.resize(elements_.size());
    std::vector<std::uint32_t> cursor(index_offsets_.begin(), index_offsets_.end() - 1);
    for (std::uint32_t h = 0; h + 1 < offsets_.size(); ++h)
        for (auto i = offsets_[h]; i < offsets_[h + 1]; ++i) index_[cursor[elements_[i]]++] = h;
}

/// Accumulates sorted hyperedges under a size budget and finalises them into
/// a deduplicated family.
class FamilyBuilder {
public:
    FamilyBuilder(std::uint32_t universe, const FamilyLimits& limits, std::string label)
        : limits_(limits), label_(std::move(label)) {
        fam_.universe_ = universe;
        fam_.offsets_.push_back(0);
    }

    void add(std::span<const ElementId> sorted) {
        if (fam_.offsets_.size() > limits_.max_hyperedges ||
            fam_.elements_.size() + sorted.size() > limits_.max_incidences)
            throw CapacityError("family " + label_ + " exceeds the configured capacity (" +
                                std::to_string(limits_.max_hyperedges) + " hyperedges / " +
                                std::to_string(limits_.max_incidences) + " incidences)");
        fam_.elements_.insert(fam_.elements_.end(), sorted.begin(), sorted.end());
        fam_.offsets_.push_back(static_cast<std::uint32_t>(fam_.elements_.size()));
        fam_.max_size_ = std::max(fam_.max_size_, sorted.size());
    }

    WinningFamily finish(bool dedupe) && {
        if (dedupe) deduplicate();
        fam_.build_index();
        fam_.label_ = label_;
        return std::move(fam_);
    }

private:
    void deduplicate() {
        const std::size_t count = fam_.offsets_.size() - 1;
        auto edge = [&](std::size_t i) {
            return std::span<const ElementId>(fam_.elements_.data() + fam_.offsets_[i],
                                              fam_.elements_.data() + fam_.offsets_[i + 1]);
        };
        std::vector<std::uint32_t> order(count);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            const auto ea = edge(a), eb = edge(b);
            if (ea.size() != eb.size()) return ea.size() < eb.size();
            const auto c = std::lexicographical_compare_three_way(ea.begin(), ea.end(), eb.begin(), eb.end());
            return c < 0 || (c == 0 && a < b);
        });
        std::vector<bool> keep(count, true);
        for (std::size_t i = 1; i < count; ++i) {
            const auto a = edge(order[i - 1]), b = edge(order[i]);
            if (std::equal(a.begin(), a.end(), b.begin(), b.end())) keep[order[i]] = false;
        }
        if (std::all_of(keep.begin(), keep.end(), [](bool k) { return k; })) return;
        std::vector<std::uint32_t> offsets{0};
        std::vector<ElementId> elements;
        for (std::size_t i = 0; i < count; ++i) {
            if (!keep[i]) continue;
            const auto e = edge(i);
            elements.insert(elements.end(), e.begin(), e.end());
            offsets.push_back(static_cast<std::uint32_t>(elements.size()));
        }
        fam_.offsets_ = std::move(offsets);
        fam_.elements_ = std::move(elements);
    }

    FamilyLimits limits_;
    std::string label_;
    WinningFamily fam_;
};

namespace {

/// Maps a local pair mask over {0..k-1} onto sorted K_n edge ids via `verts`.
void mask_to_edges(std::uint32_t k, std::uint64_t mask, std::span<const Vertex> verts, std::uint32_t n,
                   std::vector<ElementId>& out) {
    out.clear();
    for (Vertex u = 0; u < k; ++u)
        for (Vertex v = u + 1; v < k; ++v)
            if ((mask >> encode_pair(u, v, k)) & 1U) out.push_back(encode_pair(verts[u], verts[v], n));
    std::sort(out.begin(), out.end());
}

std::uint64_t key3(Vertex a, Vertex b, Vertex c) {
    return (static_cast<std::uint64_t>(a) << 42) | (static_cast<std::uint64_t>(b) << 21) | c;
}

std::uint64_t key2(Vertex a, Vertex b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

/// Calls f(chosen) for every t-combination of `pool` (indices into pool, increasing).
template <typename F>
void for_each_combination(std::size_t pool, std::uint32_t t, F&& f) {
    if (t == 0 || t > pool) return;
    std::vector<std::size_t> c(t);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        f(std::span<const std::size_t>(c));
        int i = static_cast<int>(t) - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == pool - t + static_cast<std::size_t>(i)) --i;
        if (i < 0) return;
        ++c[static_cast<std::size_t>(i)];
        for (auto j = static_cast<std::size_t>(i) + 1; j < t; ++j) c[j] = c[j - 1] + 1;
    }
}

std::vector<Vertex> intersect_sorted(std::span<const Vertex> a, std::span<const Vertex> b) {
    std::vector<Vertex> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

void for_each_h_copy(std::uint32_t n, const PatternGraph& h,
                     const std::function<bool(std::span<const ElementId>, std::span<const Vertex>)>& f) {
    const PatternGraph core = h.without_isolated();
    if (core.edge_count() == 0 || h.vertex_count() > n) return;
    const std::uint32_t k = core.vertex_count();
    require_small(k);
    const auto placements = distinct_placements(k, pattern_mask(k, core.edges()), std::nullopt);
    std::vector<ElementId> edges;
    for_each_subset(n, k, [&](std::span<const Vertex> s) {
        for (const auto& [mask, unused] : placements) {
            mask_to_edges(k, mask, s, n, edges);
            if (!f(edges, s)) return false;
        }
        return true;
    });
}

WinningFamily enumerate_h_copies(std::uint32_t n, const PatternGraph& h, const FamilyLimits& limits) {
    FamilyBuilder b(static_cast<std::uint32_t>(pair_count(n)), limits, "copies of " + h.name());
    for_each_h_copy(n, h, [&](std::span<const ElementId> e, std::span<const Vertex>) {
        b.add(e);
        return true;
    });
    return std::move(b).finish(false);
}

WinningFamily enumerate_clusters(std::uint32_t n, const PatternGraph& h, std::uint32_t t, const FamilyLimits& limits) {
    if (t == 0) throw PreconditionFault("cluster multiplicity t must be >= 1");
    FamilyBuilder b(static_cast<std::uint32_t>(pair_count(n)), limits,
                    std::to_string(t) + "-clusters of " + h.name());
    if (t == 1) {
        for_each_h_copy(n, h, [&](std::span<const ElementId> e, std::span<const Vertex> vs) {
            if (vs.size() >= 3) b.add(e);
            return true;
        });
        return std::move(b).finish(false);
    }
    struct Copy {
        std::vector<ElementId> edges;
        std::vector<Vertex> verts;
    };
    std::vector<Copy> copies;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_triple;
    for_each_h_copy(n, h, [&](std::span<const ElementId> e, std::span<const Vertex> vs) {
        if (vs.size() < 3) return false;
        if (copies.size() >= limits.max_hyperedges) throw CapacityError("too many H-copies for cluster enumeration");
        const auto id = static_cast<std::uint32_t>(copies.size());
        copies.push_back({{e.begin(), e.end()}, {vs.begin(), vs.end()}});
        for (std::size_t a = 0; a < vs.size(); ++a)
            for (std::size_t c = a + 1; c < vs.size(); ++c)
                for (std::size_t d = c + 1; d < vs.size(); ++d) by_triple[key3(vs[a], vs[c], vs[d])].push_back(id);
        return true;
    });
    std::vector<std::uint64_t> keys;
    keys.reserve(by_triple.size());
    for (const auto& [key, ids] : by_triple) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    std::vector<ElementId> uni;
    for (auto key : keys) {
        const auto& ids = by_triple[key];
        for_each_combination(ids.size(), t, [&](std::span<const std::size_t> pick) {
            std::vector<Vertex> common = copies[ids[pick[0]]].verts;
            for (std::size_t i = 1; i < pick.size(); ++i) common = intersect_sorted(common, copies[ids[pick[i]]].verts);
            // Emit each cluster only from the smallest triple of its common core.
            if (key3(common[0], common[1], common[2]) != key) return;
            uni.clear();
            for (auto i : pick) uni.insert(uni.end(), copies[ids[i]].edges.begin(), copies[ids[i]].edges.end());
            std::sort(uni.begin(), uni.end());
            uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
            b.add(uni);
        });
    }
    return std::move(b).finish(true);
}

namespace {

template <typename F>
void for_each_hbar_instance(std::uint32_t n, const PatternGraph& h, F&& f) {
    const PatternGraph core = h.without_isolated();
    if (core.edge_count() == 0 || h.vertex_count() > n) return;
    const std::uint32_t k = core.vertex_count();
    require_small(k);
    struct Placement {
        std::uint64_t mask;
        unsigned pair_bit;
    };
    std::vector<Placement> placements;
    for (const auto& cls : hbar_graphs(core)) {
        for (auto [mask, pb] : distinct_placements(k, pattern_mask(k, cls.f.edges()), std::make_pair(cls.v, cls.w)))
            placements.push_back({mask, pb});
    }
    HbarInstance inst;
    for_each_subset(n, k, [&](std::span<const Vertex> s) {
        for (const auto& p : placements) {
            mask_to_edges(k, p.mask, s, n, inst.edges);
            inst.vertices.assign(s.begin(), s.end());
            const auto [lv, lw] = decode_pair(p.pair_bit, k);
            inst.v = s[lv];
            inst.w = s[lw];
            if (!f(static_cast<const HbarInstance&>(inst))) return false;
        }
        return true;
    });
}

}  // namespace

std::vector<HbarInstance> enumerate_hbar_instances(std::uint32_t n, const PatternGraph& h, const FamilyLimits& limits) {
    std::vector<HbarInstance> out;
    for_each_hbar_instance(n, h, [&](const HbarInstance& inst) {
        if (out.size() >= limits.max_hyperedges) throw CapacityError("too many H-bar instances");
        out.push_back(inst);
        return true;
    });
    return out;
}

WinningFamily enumerate_simple_fans(std::uint32_t n, const PatternGraph& h, std::uint32_t t, const FamilyLimits& limits) {
    if (t == 0) throw PreconditionFault("fan size t must be >= 1");
    FamilyBuilder b(static_cast<std::uint32_t>(pair_count(n)), limits,
                    "simple " + std::to_string(t) + "-fans of " + h.name());
    if (t == 1) {
        for_each_hbar_instance(n, h, [&](const HbarInstance& inst) {
            b.add(inst.edges);
            return true;
        });
        return std::move(b).finish(true);
    }
    const auto instances = enumerate_hbar_instances(n, h, limits);
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_pair;
    for (std::uint32_t i = 0; i < instances.size(); ++i) {
        const auto& vs = instances[i].vertices;
        for (std::size_t a = 0; a < vs.size(); ++a)
            for (std::size_t c = a + 1; c < vs.size(); ++c) by_pair[key2(vs[a], vs[c])].push_back(i);
    }
    std::vector<std::uint64_t> keys;
    for (const auto& [key, ids] : by_pair) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    std::vector<ElementId> uni;
    for (auto key : keys) {
        const auto& ids = by_pair[key];
        for_each_combination(ids.size(), t, [&](std::span<const std::size_t> pick) {
            std::vector<Vertex> common = instances[ids[pick[0]]].vertices;
            for (std::size_t i = 1; i < pick.size() && common.size() > 2; ++i)
                common = intersect_sorted(common, instances[ids[pick[i]]].vertices);
            if (common.size() != 2) return;
            uni.clear();
            for (auto i : pick) uni.insert(uni.end(), instances[ids[i]].edges.begin(), instances[ids[i]].edges.end());
            std::sort(uni.begin(), uni.end());
            uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
            b.add(uni);
        });
    }
    return std::move(b).finish(true);
}

FamilyPtr cached_family(const std::string& key, const std::function<WinningFamily()>& build) {
    struct Entry {
        FamilyPtr family;
        std::string error;
    };
    static std::mutex mu;
    static std::map<std::string, Entry> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) {
            if (!it->second.family) throw CapacityError(it->second.error);
            return it->second.family;
        }
    }
    Entry entry;
    try {
        entry.family = std::make_shared<const WinningFamily>(build());
    } catch (const CapacityError& e) {
        entry.error = e.what();
    }
    std::lock_guard lock(mu);
    auto [it, inserted] = cache.emplace(key, entry);
    if (!it->second.family) throw CapacityError(it->second.error);
    return it->second.family;
}

}  // namespace mbg
