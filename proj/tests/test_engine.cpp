#include <doctest.h>

#include <set>

#include "mbg/breaker.hpp"
#include "mbg/engine.hpp"
#include "mbg/errors.hpp"
#include "mbg/maker.hpp"
#include "mbg/strategy_spec.hpp"

using namespace mbg;

namespace {

GameConfig abstract_game(std::uint32_t universe, std::vector<std::vector<ElementId>> sets, std::uint32_t b = 1) {
    GameConfig c;
    c.universe = universe;
    c.breaker_bias = b;
    c.family = std::make_shared<const WinningFamily>(universe, sets);
    return c;
}

// Breaker that always answers with a fixed list.
class FixedBreaker : public BreakerStrategy {
public:
    explicit FixedBreaker(std::vector<ElementId> reply) : reply_(std::move(reply)) {}
    std::vector<ElementId> respond(const GameView&, std::uint32_t) override { return reply_; }
    std::string name() const override { return "fixed"; }

private:
    std::vector<ElementId> reply_;
};

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("Maker moves first") {
    auto c = abstract_game(3, {{1}});
    auto maker = ScriptedMaker::preference({1});
    NullBreaker breaker;
    const auto t = run_game(c, maker, breaker);
    CHECK(t.result.winner == Player::Maker);
    CHECK(t.result.rounds == 1);

    auto c2 = abstract_game(4, {{0}, {3}});
    auto m2 = ScriptedMaker::preference({0});
    RandomBreaker b2(1);
    CHECK(run_game(c2, m2, b2).result.winner == Player::Maker);
}

TEST_CASE("Breaker blocks a pair") {
    auto c = abstract_game(2, {{0, 1}});
    auto maker = ScriptedMaker::preference({0, 1});
    RandomBreaker breaker(4);
    const auto t = run_game(c, maker, breaker);
    CHECK(t.result.winner == Player::Breaker);
    CHECK(t.result.end_reason == "board exhausted");
}

TEST_CASE("illegal moves fault the offender") {
    auto c = abstract_game(4, {{0, 1}});
    auto maker = ScriptedMaker::strict({Move::claim({0}), Move::claim({0})});
    NullBreaker nb;
    const auto t = run_game(c, maker, nb);
    REQUIRE(t.result.fault);
    CHECK(t.result.fault->player == Player::Maker);
    CHECK(t.result.fault->round == 2);
    CHECK(t.result.winner == Player::Breaker);

    auto m2 = ScriptedMaker::preference({0, 1, 2, 3});
    FixedBreaker fb({0});
    const auto t2 = run_game(c, m2, fb);
    REQUIRE(t2.result.fault);
    CHECK(t2.result.fault->player == Player::Breaker);
    CHECK(t2.result.winner == Player::Maker);

    auto m3 = ScriptedMaker::preference({0, 1, 2, 3});
    FixedBreaker greedy({1, 2});
    const auto t3 = run_game(c, m3, greedy);
    REQUIRE(t3.result.fault);
    CHECK(t3.result.fault->reason.find("allowed") != std::string::npos);

    auto m4 = ScriptedMaker::strict({Move::reveal({2})});
    const auto t4 = run_game(c, m4, nb);
    REQUIRE(t4.result.fault);
    CHECK(t4.result.fault->player == Player::Maker);
}

TEST_CASE("round accounting in static games") {
    GameConfig c;
    c.n = 7;
    c.win = "K4";
    c.maker_bias = 2;
    c.breaker_bias = 3;
    c.play_to_end = true;
    RandomMaker maker(RandomMode::Resample, 3);
    RandomBreaker breaker(5);
    std::uint64_t rounds = 0;
    GameHooks hooks;
    hooks.after_maker = [&](const GameView& v, const Move&) {
        ++rounds;
        CHECK(v.board.maker_count() == std::min<std::uint64_t>(2 * rounds, v.board.maker_count() + v.board.open_count()));
    };
    const auto t = run_game(c, maker, breaker, hooks);
    CHECK(t.result.end_reason == "board exhausted");
    CHECK(t.result.maker_elements.size() + t.result.breaker_elements.size() == 21);
}

TEST_CASE("dynamic games: reveal rounds and forced reveals") {
    GameConfig c;
    c.n = 5;
    c.win = "K3";
    c.dynamic = true;
    c.breaker_bias = 2;
    // claiming with nothing visible is illegal
    auto bad = ScriptedMaker::strict({Move::claim({})});
    NullBreaker nb;
    const auto t = run_game(c, bad, nb);
    REQUIRE(t.result.fault);
    CHECK(t.result.fault->reason.find("must reveal") != std::string::npos);

    auto maker = make_maker("random(resample,reveal=2)", c, resolve_win_condition(c), 9);
    RandomBreaker rb(2);
    std::size_t visible_before = 0, maker_before = 0;
    GameHooks hooks;
    hooks.after_maker = [&](const GameView& v, const Move& m) {
        CHECK(v.board.visible_count() >= visible_before);
        if (m.kind == Move::Kind::Reveal) CHECK(v.board.maker_count() == maker_before);
        visible_before = v.board.visible_count();
        maker_before = v.board.maker_count();
    };
    hooks.after_round = [&](const GameView& v) { CHECK_FALSE(v.board.check_invariants()); };
    const auto t2 = run_game(c, *maker, rb, hooks);
    CHECK_FALSE(t2.result.fault);
    CHECK(replay(t2).consistent);
    for (const auto& m : t2.moves)
        if (m.player == Player::Breaker) CHECK(m.move.elements.size() <= 2);
}

TEST_CASE("predicate games replay to the same partition") {
    GameConfig c;
    c.n = 4;
    c.win = "kfactor:4";
    c.seed = 17;
    RandomMaker maker(RandomMode::Resample, 17);
    RandomBreaker breaker(18);
    const auto t = run_game(c, maker, breaker);
    const auto rep = replay(t);
    CHECK(rep.consistent);
    const auto back = transcript_from_json(to_json(t));
    CHECK(replay(back).consistent);
    CHECK(to_json(back).dump() == to_json(t).dump());
}

TEST_CASE("tampered transcripts diverge") {
    GameConfig c;
    c.n = 6;
    c.win = "K3";
    RandomMaker maker(RandomMode::Resample, 2);
    RandomBreaker breaker(3);
    auto t = run_game(c, maker, breaker);
    REQUIRE(t.moves.size() >= 4);
    auto bad = t;
    bad.moves[2].move.elements = t.moves[0].move.elements;
    const auto rep = replay(bad);
    CHECK_FALSE(rep.consistent);
    CHECK(rep.divergence_round == t.moves[2].round);

    auto wrong = t;
    wrong.result.winner = t.result.winner == Player::Maker ? Player::Breaker : Player::Maker;
    CHECK_FALSE(replay(wrong).consistent);

    auto j = to_json(t);
    j["moves"][1]["kind"] = "teleport";
    CHECK_THROWS_AS(transcript_from_json(j), ParseError);
}

TEST_CASE("identical seeds give identical transcripts") {
    GameConfig c;
    c.n = 9;
    c.win = "K3";
    c.breaker_bias = 2;
    auto once = [&] {
        RandomMaker maker(RandomMode::Forfeit, 44);
        RandomBreaker breaker(45);
        return to_json(run_game(c, maker, breaker)).dump();
    };
    CHECK(once() == once());
}

TEST_CASE("multiplexing") {
    GameConfig c;
    c.n = 8;
    c.win = "K4";
    c.breaker_bias = 2;
    c.play_to_end = true;
    std::vector<std::unique_ptr<MakerStrategy>> subs;
    subs.push_back(std::make_unique<RandomMaker>(RandomMode::Resample, 1));
    subs.push_back(std::make_unique<RandomMaker>(RandomMode::Resample, 2));
    MultiplexMaker mx(std::move(subs));
    RandomBreaker rb(3);
    const auto t = run_game(c, mx, rb);
    std::set<ElementId> all;
    for (const auto& cl : mx.claims()) all.insert(cl.begin(), cl.end());
    CHECK(std::vector<ElementId>(all.begin(), all.end()) == t.result.maker_elements);
    for (const auto& batch : mx.observed_batches())
        for (auto s : batch) CHECK(s <= 2 * c.breaker_bias);

    // one strategy multiplexed is the strategy itself
    std::vector<std::unique_ptr<MakerStrategy>> one;
    one.push_back(std::make_unique<RandomMaker>(RandomMode::Resample, 7));
    MultiplexMaker solo(std::move(one));
    RandomMaker plain(RandomMode::Resample, 7);
    RandomBreaker b1(8), b2(8);
    auto ta = run_game(c, solo, b1);
    auto tb = run_game(c, plain, b2);
    CHECK(ta.result.maker_elements == tb.result.maker_elements);
    CHECK(ta.result.breaker_elements == tb.result.breaker_elements);
}

TEST_CASE("win conditions") {
    CHECK(parse_win_condition("K3", 5).family->size() == 10);
    CHECK(parse_win_condition("H=K3", 5).family->size() == 10);
    CHECK(parse_win_condition("kfactor:4", 8).kind == WinCondition::Kind::KFactor);
    const auto kv = parse_win_condition("kvertex:2:4", 8);
    CHECK(kv.kind == WinCondition::Kind::KVertex);
    CHECK(kv.v == 2);
    CHECK_THROWS_AS(parse_win_condition("kvertex:9:4", 8), ParseError);
    CHECK_THROWS_AS(parse_win_condition("nonsense", 8), ParseError);
    CHECK_THROWS(parse_win_condition("kfactor:4", 0));
}

TEST_CASE("early stop ends lost games") {
    GameConfig c;
    c.n = 6;
    c.win = "K3";
    c.breaker_bias = 5;
    c.early_stop = true;
    RandomMaker maker(RandomMode::Resample, 1);
    auto breaker = make_breaker("dynamicH(H=K3)", c, resolve_win_condition(c), 1);
    const auto t = run_game(c, maker, *breaker);
    if (t.result.winner == Player::Breaker) CHECK(t.result.end_reason != "maker completed a winning set");
    CHECK(replay(t).consistent);
}

}
