#include <doctest.h>

#include <algorithm>
#include <set>

#include "mbg/errors.hpp"
#include "mbg/structures.hpp"
#include "oracle.hpp"

using namespace mbg;

namespace {

Graph graph_from_mask(std::uint32_t n, std::uint32_t mask) {
    Graph g(n);
    std::uint32_t bit = 0;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v, ++bit)
            if ((mask >> bit) & 1U) g.add_edge(u, v);
    return g;
}

Hypergraph random_hypergraph(Rng& rng, std::uint32_t nv, std::uint32_t k, std::size_t m) {
    Hypergraph h{nv, {}};
    for (std::size_t i = 0; i < m; ++i) {
        auto s = rng.sample(nv, k);
        std::vector<Vertex> e(s.begin(), s.end());
        std::sort(e.begin(), e.end());
        h.edges.push_back(e);
    }
    return h;
}

}  // namespace

TEST_SUITE("structures") {

TEST_CASE("factor examples") {
    const auto k4 = has_kr_factor(Graph::complete(4), 4);
    REQUIRE(k4.exists());
    CHECK(k4.certificate->blocks.size() == 1);

    const auto two = Graph::from_edges(6, std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    const auto t = has_kr_factor(two, 3);
    REQUIRE(t.exists());
    CHECK_FALSE(verify_factor(two, 3, *t.certificate));

    // octahedron: K6 minus a perfect matching
    auto oct = Graph::complete(6);
    oct.remove_edge(0, 1);
    oct.remove_edge(2, 3);
    oct.remove_edge(4, 5);
    CHECK(has_kr_factor(oct, 3).exists());

    CHECK(has_kr_factor(Graph::complete(7), 3).status == FactorStatus::Divisibility);
    CHECK(has_kr_factor(Graph(6), 3).status == FactorStatus::None);
}

TEST_CASE("factor search agrees with partition enumeration") {
    Rng rng(31);
    for (int i = 0; i < 400; ++i) {
        const auto g = graph_from_mask(6, static_cast<std::uint32_t>(rng.below(1u << 15)));
        const auto res = has_kr_factor(g, 3);
        CHECK(res.exists() == oracle::has_factor(g, 3));
        if (res.exists()) CHECK_FALSE(verify_factor(g, 3, *res.certificate));
    }
    for (int i = 0; i < 60; ++i) {
        const auto g = random_graph(8, 0.75, rng);
        CHECK(has_kr_factor(g, 4).exists() == oracle::has_factor(g, 4));
    }
}

TEST_CASE("factor verifier rejects bad certificates") {
    const auto g = Graph::complete(6);
    CHECK(verify_factor(g, 3, FactorCertificate{{{0, 1, 2}, {3, 4, 5}}}) == std::nullopt);
    CHECK(verify_factor(g, 3, FactorCertificate{{{0, 1, 2}, {2, 4, 5}}}));
    CHECK(verify_factor(g, 3, FactorCertificate{{{0, 1, 2}}}));
    auto h = g;
    h.remove_edge(0, 1);
    CHECK(verify_factor(h, 3, FactorCertificate{{{0, 1, 2}, {3, 4, 5}}}));
}

TEST_CASE("factor search respects its budget") {
    Rng rng(2);
    const auto g = random_graph(24, 0.5, rng);
    const auto res = has_kr_factor(g, 4, 3);
    CHECK((res.status == FactorStatus::Budget || res.status == FactorStatus::None || res.exists()));
}

TEST_CASE("clique at a vertex") {
    Graph g(5);
    CHECK_FALSE(kr_at_vertex(g, 0, 3));
    Rng rng(8);
    for (int i = 0; i < 30; ++i) {
        const auto h = random_graph(12, 0.5, rng);
        for (Vertex v : {0u, 5u}) {
            bool want = false;
            for (Vertex a = 0; a < 12 && !want; ++a)
                for (Vertex b = a + 1; b < 12 && !want; ++b)
                    for (Vertex c = b + 1; c < 12 && !want; ++c) {
                        if (a == v || b == v || c == v) continue;
                        want = h.is_clique(std::vector<Vertex>{v, a, b, c});
                    }
            const auto got = kr_at_vertex(h, v, 4);
            CHECK(got.has_value() == want);
            if (got) {
                CHECK(h.is_clique(*got));
                CHECK(std::find(got->begin(), got->end(), v) != got->end());
            }
        }
    }
}

TEST_CASE("chains") {
    const auto c0 = build_chain(4, 0);
    CHECK(c0.vertex_count() == 1);
    CHECK(c0.removable().size() == 1);
    const auto c = build_chain(4, 3);
    CHECK(c.vertex_count() == 13);
    CHECK(c.removable().size() == 4);
    const auto c54 = build_chain(5, 4);
    CHECK(c54.vertex_count() == 21);
    const auto f54 = c54.factor_after_removal(c54.links[kWorkedExampleLink]);
    CHECK(f54.blocks.size() == 4);
    std::vector<Vertex> rest54;
    for (Vertex x = 0; x < 21; ++x)
        if (x != c54.links[kWorkedExampleLink]) rest54.push_back(x);
    CHECK_FALSE(verify_factor(chain_graph(c54), rest54, 5, f54));
    for (std::uint32_t r : {3u, 4u, 5u})
        for (std::uint32_t ell = 1; ell <= 4; ++ell) {
            const auto ch = build_chain(r, ell);
            const auto g = chain_graph(ch);
            CHECK(g.vertex_count() == r * ell + 1);
            CHECK_FALSE(verify_chain_in(g, ch));
            for (auto u : ch.removable()) {
                std::vector<Vertex> rest;
                for (Vertex x = 0; x < g.vertex_count(); ++x)
                    if (x != u) rest.push_back(x);
                CHECK_FALSE(verify_factor(g, rest, r, ch.factor_after_removal(u)));
            }
            // a non-link vertex does not leave a factor behind
            const Vertex inner = ch.cliques[0][0];
            std::vector<Vertex> rest;
            for (Vertex x = 0; x < g.vertex_count(); ++x)
                if (x != inner) rest.push_back(x);
            CHECK_FALSE(has_kr_factor(g.induced(rest), r).exists());
            CHECK_THROWS_AS(ch.factor_after_removal(inner), PreconditionFault);
        }
}

TEST_CASE("chain embedding") {
    const auto c = build_chain(4, 3);
    const auto g = chain_graph(c);
    const auto found = find_chain_in(g, 4, 3);
    REQUIRE(found.chain);
    CHECK_FALSE(verify_chain_in(g, *found.chain));
    const auto k = find_chain_in(Graph::complete(14), 4, 3);
    REQUIRE(k.chain);
    CHECK_FALSE(verify_chain_in(Graph::complete(14), *k.chain));
    CHECK_FALSE(find_chain_in(Graph::complete(12), 4, 3).chain);
    Rng rng(77);
    int ok = 0;
    for (int i = 0; i < 20; ++i) {
        const auto h = random_graph(30, 0.8, rng);
        const auto res = find_chain_in(h, 4, 3);
        if (res.chain) {
            ++ok;
            CHECK_FALSE(verify_chain_in(h, *res.chain));
        }
    }
    CHECK(ok >= 19);
}

TEST_CASE("canonical factor of glued chains") {
    // four (4,1)-chains on disjoint vertex ranges, a K4 through one link of each
    const std::uint32_t r = 4;
    std::vector<Chain> chains;
    Graph g(20);
    for (std::uint32_t i = 0; i < r; ++i) {
        auto c = build_chain(r, 1);
        for (auto& x : c.links) x += 5 * i;
        for (auto& cl : c.cliques)
            for (auto& x : cl) x += 5 * i;
        const auto cg = chain_graph(build_chain(r, 1));
        for (auto [a, b] : cg.edges()) g.add_edge(a + 5 * i, b + 5 * i);
        chains.push_back(c);
    }
    std::vector<Vertex> clique{chains[0].links[0], chains[1].links[1], chains[2].links[0], chains[3].links[1]};
    for (std::size_t a = 0; a < clique.size(); ++a)
        for (std::size_t b = a + 1; b < clique.size(); ++b) g.add_edge(clique[a], clique[b]);
    const auto cert = canonical_factor(g, chains, clique);
    CHECK(cert.blocks.size() == 5);
    CHECK_FALSE(verify_factor(g, r, cert));

    std::vector<Chain> singles;
    Graph k(4);
    for (Vertex i = 0; i < 4; ++i) {
        auto c = build_chain(r, 0);
        c.links = {i};
        singles.push_back(c);
    }
    k = Graph::complete(4);
    const auto one = canonical_factor(k, singles, std::vector<Vertex>{0, 1, 2, 3});
    CHECK(one.blocks.size() == 1);
    CHECK_THROWS(canonical_factor(g, chains, std::vector<Vertex>{chains[0].links[0], chains[0].links[1],
                                                                 chains[2].links[0], chains[3].links[1]}));
}

TEST_CASE("vertex cover number") {
    CHECK(tau(Hypergraph{3, {{0, 1, 2}}}).tau == 1);
    CHECK(tau(Hypergraph{6, {{0, 1, 2}, {3, 4, 5}}}).tau == 2);
    Rng rng(4);
    for (int i = 0; i < 150; ++i) {
        const auto nv = static_cast<std::uint32_t>(4 + rng.below(9));
        const auto k = static_cast<std::uint32_t>(1 + rng.below(3));
        const auto h = random_hypergraph(rng, nv, std::min(k, nv), 1 + rng.below(10));
        const auto got = tau(h);
        CHECK(got.tau == oracle::tau(nv, h.edges));
        CHECK(got.cover.size() == got.tau);
        for (const auto& e : h.edges)
            CHECK(std::any_of(e.begin(), e.end(), [&](Vertex v) {
                return std::find(got.cover.begin(), got.cover.end(), v) != got.cover.end();
            }));
        CHECK(tau_at_least(h, got.tau));
        CHECK_FALSE(tau_at_least(h, got.tau + 1));
        // subadditivity
        const auto h2 = random_hypergraph(rng, nv, std::min(k, nv), 1 + rng.below(6));
        Hypergraph u = h;
        u.edges.insert(u.edges.end(), h2.edges.begin(), h2.edges.end());
        CHECK(tau(u).tau <= got.tau + tau(h2).tau);
    }
}

TEST_CASE("disjoint systems") {
    // one hypergraph of many disjoint pairs
    Hypergraph h1{12, {}};
    for (Vertex i = 0; i < 12; i += 2) h1.edges.push_back({i, i + 1});
    const auto one = haxell_select(std::vector<Hypergraph>{h1}, 2);
    CHECK(one.criterion_holds);
    CHECK(one.chosen.size() == 1);

    Hypergraph small{4, {{0, 1}}};
    const auto bad = haxell_select(std::vector<Hypergraph>{small}, 2);
    CHECK_FALSE(bad.criterion_holds);
    CHECK(bad.violating_tau == 1);

    Rng rng(9);
    int holds = 0;
    for (int i = 0; i < 80; ++i) {
        const auto t = 1 + rng.below(3);
        std::vector<Hypergraph> hs;
        for (std::uint64_t j = 0; j < t; ++j) hs.push_back(random_hypergraph(rng, 24, 2, 10 + rng.below(20)));
        const auto res = haxell_select(hs, 2);
        if (!res.criterion_holds) continue;
        ++holds;
        REQUIRE(res.chosen.size() == hs.size());
        std::set<Vertex> used;
        for (std::size_t j = 0; j < hs.size(); ++j)
            for (auto v : hs[j].edges[res.chosen[j]]) CHECK(used.insert(v).second);
    }
    CHECK(holds > 0);
}

TEST_CASE("dangerous structures") {
    Graph maker(6), breaker(6);
    maker.add_edge(0, 2);
    maker.add_edge(2, 1);
    const auto k3 = PatternGraph::clique(3);
    auto rep = dangerous_structures(maker, breaker, k3);
    REQUIRE(rep.instances.size() == 1);
    CHECK(rep.instances[0].v == 0);
    CHECK(rep.instances[0].w == 1);
    CHECK(rep.fans.size() == 1);
    breaker.add_edge(0, 1);
    CHECK(dangerous_structures(maker, breaker, k3).instances.empty());

    // three cherries over {0, 1}
    Graph m2(6), b2(6);
    for (Vertex x : {2u, 3u, 4u}) {
        m2.add_edge(0, x);
        m2.add_edge(x, 1);
    }
    rep = dangerous_structures(m2, b2, k3);
    bool found = false;
    for (const auto& f : rep.fans)
        if (f.core == std::vector<Vertex>{0, 1} && f.members.size() == 3 && f.simple) found = true;
    CHECK(found);
}

TEST_CASE("planted hbar graphs are found") {
    Rng rng(15);
    const auto k4 = PatternGraph::clique(4);
    for (int i = 0; i < 25; ++i) {
        Graph maker = random_graph(10, 0.2, rng), breaker(10);
        const auto s = rng.sample(10, 4);
        // K4 minus the pair s0 s1
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if (!(a == 0 && b == 1)) maker.add_edge(s[a], s[b]);
        if (maker.has_edge(s[0], s[1])) maker.remove_edge(s[0], s[1]);
        const auto rep = dangerous_structures(maker, breaker, k4);
        const Vertex v = std::min(s[0], s[1]), w = std::max(s[0], s[1]);
        bool hit = false;
        for (const auto& inst : rep.instances) {
            std::set<Vertex> vs(inst.vertices.begin(), inst.vertices.end());
            if (inst.v == v && inst.w == w && vs == std::set<Vertex>{s[0], s[1], s[2], s[3]}) hit = true;
            for (auto [a, b] : inst.edges) CHECK(maker.has_edge(a, b));
            CHECK_FALSE(breaker.has_edge(inst.v, inst.w));
        }
        CHECK(hit);
    }
}

TEST_CASE("neat checks") {
    Rng rng(3);
    NeatParams p;
    p.p = 0.5;
    p.alpha = 0.2;
    p.r = 4;
    p.trials = 30;
    const auto full = neat_check(Graph::complete(40), p, rng);
    CHECK(full.p1_degree.status == CheckStatus::Pass);
    const auto empty = neat_check(Graph(40), p, rng);
    CHECK(empty.p1_degree.status == CheckStatus::Fail);
    const auto g = random_graph(200, 0.5, rng);
    p.trials = 100;
    const auto rep = neat_check(g, p, rng);
    CHECK(rep.p2.status == CheckStatus::NoCounterexample);
    NeatParams vac = p;
    vac.alpha = 0.9;
    vac.beta = 0.01;
    const auto v = neat_check(Graph::complete(20), vac, rng);
    CHECK(v.p3.status == CheckStatus::Vacuous);
    CHECK_FALSE(v.warnings.empty());
}

}
