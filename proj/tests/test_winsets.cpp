#include <doctest.h>

#include <algorithm>
#include <set>

#include "mbg/errors.hpp"
#include "mbg/winsets.hpp"
#include "oracle.hpp"

using namespace mbg;

namespace {

oracle::EdgeSet edge_set(const PatternGraph& h) {
    oracle::EdgeSet es;
    for (auto [a, b] : h.edges()) es.insert(oracle::norm(a, b));
    return es;
}

std::set<std::vector<ElementId>> as_sets(const WinningFamily& f) {
    std::set<std::vector<ElementId>> out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto e = f.hyperedge(i);
        out.emplace(e.begin(), e.end());
    }
    return out;
}

// brute-force m2: every vertex subset and every edge subset of it
double m2_brute(const PatternGraph& h) {
    const auto k = h.vertex_count();
    const auto edges = std::vector<std::pair<Vertex, Vertex>>(h.edges().begin(), h.edges().end());
    double best = -1;
    for (std::uint32_t vm = 0; vm < (1u << k); ++vm) {
        const int vc = __builtin_popcount(vm);
        if (vc < 3) continue;
        int ec = 0;
        for (auto [a, b] : edges)
            if (((vm >> a) & 1U) && ((vm >> b) & 1U)) ++ec;
        best = std::max(best, (ec - 1.0) / (vc - 2.0));
    }
    return best;
}

}  // namespace

TEST_SUITE("winsets") {

TEST_CASE("copy counts of small patterns") {
    CHECK(enumerate_h_copies(4, PatternGraph::clique(3)).size() == 4);
    CHECK(enumerate_h_copies(5, PatternGraph::clique(3)).size() == 10);
    const auto k4 = enumerate_h_copies(6, PatternGraph::clique(4));
    CHECK(k4.size() == 15);
    CHECK(k4.max_edge_size() == 6);
    CHECK(enumerate_h_copies(3, PatternGraph::clique(4)).empty());
}

TEST_CASE("copy counts agree with subset enumeration") {
    for (const char* name : {"K3", "K4", "C4", "P3", "P4", "K4minus", "C5"}) {
        const auto h = parse_pattern(name);
        for (std::uint32_t n : {5u, 6u}) {
            CAPTURE(name);
            CAPTURE(n);
            const auto fam = enumerate_h_copies(n, h);
            CHECK(fam.size() == oracle::count_copies(n, h.vertex_count(), edge_set(h)));
            CHECK(as_sets(fam).size() == fam.size());
            for (std::size_t i = 0; i < fam.size(); ++i) CHECK(fam.hyperedge(i).size() == h.edge_count());
        }
    }
}

TEST_CASE("m2 density") {
    CHECK(m2_density(PatternGraph::clique(3)).value == Rational::make(2, 1));
    CHECK(m2_density(PatternGraph::clique(4)).value == Rational::make(5, 2));
    CHECK(m2_density(PatternGraph::clique_minus(4)).value == Rational::make(8, 3));
    for (std::uint32_t r = 3; r <= 6; ++r) {
        const auto d = m2_density(PatternGraph::clique(r));
        CHECK(d.value == Rational::make(r + 1, 2));
        CHECK(d.h_is_maximal);
    }
    for (const char* name : {"C4", "C5", "P4", "K4minus", "K5minus"}) {
        const auto h = parse_pattern(name);
        CAPTURE(name);
        CHECK(m2_density(h).value.value() == doctest::Approx(m2_brute(h)));
    }
    CHECK_THROWS_AS(m2_density(PatternGraph::path(2)), UndefinedDensity);
}

TEST_CASE("a denser subgraph is reported as the maximiser") {
    // K4 with a pendant edge: the K4 beats the whole graph
    PatternGraph h(5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}});
    const auto d = m2_density(h);
    CHECK_FALSE(d.h_is_maximal);
    CHECK(d.value == Rational::make(5, 2));
    CHECK(d.maximizer == std::vector<Vertex>{0, 1, 2, 3});
}

TEST_CASE("hbar graphs match an exhaustive search") {
    for (const char* name : {"K3", "K4", "P3", "P4", "C4", "K4minus"}) {
        CAPTURE(name);
        const auto h = parse_pattern(name);
        const auto k = h.vertex_count();
        const auto hs = edge_set(h);
        // every (F, {v, w}) on k vertices with F + vw isomorphic to H, up to relabelling
        std::vector<std::pair<oracle::EdgeSet, oracle::Edge>> classes;
        for (auto [v, w] : hs) {
            oracle::EdgeSet f = hs;
            f.erase({v, w});
            bool known = false;
            for (const auto& [cf, cp] : classes) {
                std::vector<Vertex> perm(k);
                std::iota(perm.begin(), perm.end(), 0);
                do {
                    if (oracle::relabel(f, perm) == cf && oracle::norm(perm[v], perm[w]) == cp) known = true;
                } while (!known && std::next_permutation(perm.begin(), perm.end()));
                if (known) break;
            }
            if (!known) classes.emplace_back(f, oracle::Edge{v, w});
        }
        const auto got = hbar_graphs(h);
        CHECK(got.size() == classes.size());
        for (const auto& hb : got) {
            auto es = edge_set(hb.f);
            CHECK_FALSE(es.count(oracle::norm(hb.v, hb.w)));
            es.insert(oracle::norm(hb.v, hb.w));
            CHECK(oracle::isomorphic(k, es, hs));
        }
    }
    CHECK(hbar_graphs(PatternGraph::clique(3)).size() == 1);
    CHECK(hbar_graphs(PatternGraph::clique(4)).size() == 1);
}

TEST_CASE("clusters") {
    const auto k3 = PatternGraph::clique(3);
    CHECK(as_sets(enumerate_clusters(6, k3, 1)) == as_sets(enumerate_h_copies(6, k3)));
    CHECK(enumerate_clusters(4, k3, 2).empty());
    const auto c = enumerate_clusters(5, PatternGraph::clique(4), 2);
    CHECK(c.size() == 10);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c.hyperedge(i).size() == 9);
}

TEST_CASE("clusters agree with brute force over copy pairs") {
    for (const char* name : {"K4", "K4minus"}) {
        CAPTURE(name);
        const auto h = parse_pattern(name);
        const std::uint32_t n = 6;
        std::vector<std::pair<std::vector<ElementId>, std::set<Vertex>>> copies;
        for_each_h_copy(n, h, [&](std::span<const ElementId> e, std::span<const Vertex> vs) {
            copies.emplace_back(std::vector<ElementId>(e.begin(), e.end()), std::set<Vertex>(vs.begin(), vs.end()));
            return true;
        });
        std::set<std::vector<ElementId>> want;
        for (std::size_t i = 0; i < copies.size(); ++i)
            for (std::size_t j = i + 1; j < copies.size(); ++j) {
                std::vector<Vertex> common;
                std::set_intersection(copies[i].second.begin(), copies[i].second.end(), copies[j].second.begin(),
                                      copies[j].second.end(), std::back_inserter(common));
                if (common.size() < 3) continue;
                std::set<ElementId> u(copies[i].first.begin(), copies[i].first.end());
                u.insert(copies[j].first.begin(), copies[j].first.end());
                want.emplace(u.begin(), u.end());
            }
        CHECK(as_sets(enumerate_clusters(n, h, 2)) == want);
    }
}

TEST_CASE("simple fans agree with brute force over hbar instances") {
    const auto k3 = PatternGraph::clique(3);
    const auto t1 = enumerate_simple_fans(5, k3, 1);
    CHECK(t1.size() == 30);  // 10 triangles, 3 cherries each
    for (std::uint32_t n : {4u, 5u}) {
        for (const char* name : {"K3", "C4"}) {
            CAPTURE(n);
            CAPTURE(name);
            const auto h = parse_pattern(name);
            if (h.vertex_count() > n) continue;
            const auto inst = enumerate_hbar_instances(n, h);
            std::set<std::pair<std::vector<ElementId>, std::pair<Vertex, Vertex>>> distinct;
            for (const auto& x : inst) distinct.insert({x.edges, {x.v, x.w}});
            CHECK(distinct.size() == inst.size());
            std::set<std::vector<ElementId>> want;
            for (std::size_t i = 0; i < inst.size(); ++i)
                for (std::size_t j = i + 1; j < inst.size(); ++j) {
                    std::vector<Vertex> common;
                    std::set_intersection(inst[i].vertices.begin(), inst[i].vertices.end(), inst[j].vertices.begin(),
                                          inst[j].vertices.end(), std::back_inserter(common));
                    if (common.size() != 2) continue;
                    std::set<ElementId> u(inst[i].edges.begin(), inst[i].edges.end());
                    u.insert(inst[j].edges.begin(), inst[j].edges.end());
                    want.emplace(u.begin(), u.end());
                }
            CHECK(as_sets(enumerate_simple_fans(n, h, 2)) == want);
        }
    }
    // on K_4 any two cherries from different triangles share exactly two vertices
    CHECK(enumerate_simple_fans(4, k3, 2).size() == 31);
}

TEST_CASE("family index and capacity") {
    const auto f = enumerate_h_copies(5, PatternGraph::clique(3));
    for (ElementId e = 0; e < f.universe(); ++e) {
        CHECK(f.containing(e).size() == 3);
        for (auto i : f.containing(e)) {
            const auto he = f.hyperedge(i);
            CHECK(std::find(he.begin(), he.end(), e) != he.end());
        }
    }
    FamilyLimits tight;
    tight.max_hyperedges = 5;
    CHECK_THROWS_AS(enumerate_h_copies(6, PatternGraph::clique(3), tight), CapacityError);
    CHECK_THROWS_AS(WinningFamily(3, {{0, 5}}), Error);
}

TEST_CASE("cached families are shared") {
    int builds = 0;
    auto make = [&] {
        ++builds;
        return enumerate_h_copies(5, PatternGraph::clique(3));
    };
    const auto a = cached_family("test:k3:5", make);
    const auto b = cached_family("test:k3:5", make);
    CHECK(a == b);
    CHECK(builds == 1);
}

TEST_CASE("pattern names") {
    CHECK(parse_pattern("K5minus").edge_count() == 9);
    CHECK(parse_pattern("Kr-minus(4)") == parse_pattern("K5minus"));
    CHECK(parse_pattern("C4").edge_count() == 4);
    CHECK_THROWS_AS(parse_pattern("Q7"), ParseError);
    CHECK(isomorphic(PatternGraph::cycle(4), PatternGraph(4, {{0, 2}, {2, 1}, {1, 3}, {3, 0}})));
    CHECK(automorphisms(PatternGraph::clique(4)).size() == 24);
    CHECK(automorphisms(PatternGraph::path(3)).size() == 2);
}

}
