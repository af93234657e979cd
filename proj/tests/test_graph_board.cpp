#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "mbg/board.hpp"
#include "mbg/errors.hpp"
#include "mbg/graph.hpp"
#include "mbg/rng.hpp"

using namespace mbg;

TEST_SUITE("graph") {

TEST_CASE("pair encoding is a bijection") {
    for (std::uint32_t n : {2u, 3u, 10u, 37u}) {
        std::set<ElementId> seen;
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = u + 1; v < n; ++v) {
                const auto id = encode_pair(u, v, n);
                CHECK(id == encode_pair(v, u, n));
                CHECK(id < pair_count(n));
                CHECK(decode_pair(id, n) == std::pair{u, v});
                seen.insert(id);
            }
        CHECK(seen.size() == pair_count(n));
    }
}

TEST_CASE("vertex set basics") {
    VertexSet s(130);
    CHECK(s.empty());
    s.insert(0);
    s.insert(64);
    s.insert(129);
    CHECK(s.size() == 3);
    CHECK(s.next(1) == 64);
    CHECK(s.next(130) == 130);
    s.clear_below(64);
    CHECK(s.to_vector() == std::vector<Vertex>{64, 129});
    s.erase(64);
    CHECK(s.contains(129));
    CHECK_FALSE(s.contains(64));
}

TEST_CASE("clique enumeration matches brute force") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        const auto g = random_graph(11, 0.6, rng);
        VertexSet all(11);
        for (Vertex v = 0; v < 11; ++v) all.insert(v);
        for (std::uint32_t k = 1; k <= 5; ++k) {
            std::size_t got = 0;
            for_each_clique(g, all, k, [&](const std::vector<Vertex>& c) {
                CHECK(std::is_sorted(c.begin(), c.end()));
                CHECK(g.is_clique(c));
                ++got;
                return true;
            });
            std::size_t want = 0;
            for (std::uint32_t mask = 0; mask < (1u << 11); ++mask) {
                if (static_cast<std::uint32_t>(__builtin_popcount(mask)) != k) continue;
                std::vector<Vertex> vs;
                for (Vertex v = 0; v < 11; ++v)
                    if ((mask >> v) & 1U) vs.push_back(v);
                if (g.is_clique(vs)) ++want;
            }
            CHECK(got == want);
        }
    }
}

TEST_CASE("edge list round trip and errors") {
    const auto g = Graph::from_edges(5, std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {1, 2}, {3, 4}});
    std::stringstream ss;
    write_edge_list(ss, g);
    CHECK(read_edge_list(ss) == g);
    std::stringstream commented("# a comment\n3 1\n\n0 2\n");
    CHECK(read_edge_list(commented).has_edge(0, 2));
    std::stringstream bad("3 1\n0 3\n");
    CHECK_THROWS_AS(read_edge_list(bad), ParseError);
    std::stringstream short_list("3 2\n0 1\n");
    CHECK_THROWS_AS(read_edge_list(short_list), ParseError);
}

}

TEST_SUITE("board") {

TEST_CASE("complete boards") {
    CHECK(Board::complete(4).universe_size() == 6);
    CHECK(Board::complete(2).universe_size() == 1);
    const auto b = Board::complete(10);
    CHECK(b.universe_size() == 45);
    CHECK(b.open_count() == 45);
    CHECK(b.visible_count() == 45);
    CHECK_THROWS_AS(Board::complete(1), InvalidBoard);
    CHECK_THROWS_AS(Board::complete(0), InvalidBoard);
    CHECK_THROWS_AS(Board::abstract(0), InvalidBoard);
}

TEST_CASE("claims") {
    auto b = Board::complete(5);
    b.claim(3, Player::Maker);
    CHECK(b.state(3) == ClaimState::Maker);
    CHECK_THROWS_AS(b.claim(3, Player::Breaker), IllegalMove);
    CHECK_THROWS_AS(b.claim(99, Player::Breaker), IllegalMove);
    CHECK(b.state(3) == ClaimState::Maker);
    CHECK(b.maker_count() == 1);
    CHECK(b.open_count() == 9);
    CHECK_FALSE(b.check_invariants());
}

TEST_CASE("dynamic boards start hidden and reveal monotonically") {
    auto b = Board::complete(5, true);
    CHECK(b.visible_count() == 0);
    CHECK_THROWS_AS(b.claim(0, Player::Breaker), IllegalMove);
    b.reveal(std::vector<ElementId>{2});
    CHECK(b.is_visible(2));
    CHECK(b.visible_count() == 1);
    b.reveal(std::vector<ElementId>{4, 5});
    CHECK(b.visible_count() == 3);
    CHECK_THROWS_AS(b.reveal(std::vector<ElementId>{}), IllegalMove);
    CHECK_THROWS_AS(b.reveal(std::vector<ElementId>{2}), IllegalMove);
    CHECK_THROWS_AS(b.reveal(std::vector<ElementId>{7, 7}), IllegalMove);
    // a failed reveal leaves the board alone
    CHECK_THROWS_AS(b.reveal(std::vector<ElementId>{7, 4}), IllegalMove);
    CHECK_FALSE(b.is_visible(7));
    b.claim(4, Player::Maker);
    CHECK(b.open_elements() == std::vector<ElementId>{2, 5});
}

TEST_CASE("maker graph follows Maker claims") {
    auto b = Board::complete(4);
    CHECK(b.maker_graph().edge_count() == 0);
    b.claim(encode_pair(1, 2, 4), Player::Maker);
    b.claim(encode_pair(2, 3, 4), Player::Maker);
    b.claim(encode_pair(0, 3, 4), Player::Breaker);
    const auto& g = b.maker_graph();
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(2, 3));
    CHECK(b.breaker_graph().has_edge(0, 3));
    CHECK_THROWS_AS(Board::abstract(4).maker_graph(), Unsupported);
}

TEST_CASE("partition invariant under random play") {
    Rng rng(21);
    auto b = Board::complete(9);
    while (b.open_count() > 0) {
        const auto open = b.open_elements();
        b.claim(open[rng.below(open.size())], rng.bernoulli(0.5) ? Player::Maker : Player::Breaker);
        REQUIRE_FALSE(b.check_invariants());
    }
    CHECK(b.maker_graph().edge_count() + b.breaker_count() + b.unclaimed_count() == pair_count(9));
}

}
