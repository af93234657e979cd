#include <algorithm>

#include "mbg/engine.hpp"
#include "mbg/errors.hpp"

namespace mbg {

json to_json(const GameConfig& c) {
    json j;
    j["n"] = c.n;
    j["universe"] = c.board_size();
    j["maker_bias"] = c.maker_bias;
    j["breaker_bias"] = c.breaker_bias;
    j["dynamic"] = c.dynamic;
    j["win"] = c.family ? std::string("family") : c.win;
    j["max_rounds"] = c.round_cap();
    j["play_to_end"] = c.play_to_end;
    j["early_stop"] = c.early_stop;
    j["maker"] = c.maker_spec;
    j["breaker"] = c.breaker_spec;
    if (c.family) {
        json fam = json::array();
        for (std::size_t i = 0; i < c.family->size(); ++i) {
            const auto h = c.family->hyperedge(i);
            fam.push_back(std::vector<ElementId>(h.begin(), h.end()));
        }
        j["family"] = std::move(fam);
    }
    return j;
}

GameConfig config_from_json(const json& j) {
    try {
        GameConfig c;
        c.n = j.at("n").get<std::uint32_t>();
        c.universe = j.at("universe").get<std::uint32_t>();
        c.maker_bias = j.at("maker_bias").get<std::uint32_t>();
        c.breaker_bias = j.at("breaker_bias").get<std::uint32_t>();
        c.dynamic = j.at("dynamic").get<bool>();
        c.win = j.at("win").get<std::string>();
        c.max_rounds = j.value("max_rounds", std::uint64_t{0});
        c.play_to_end = j.value("play_to_end", false);
        c.early_stop = j.value("early_stop", false);
        c.maker_spec = j.value("maker", std::string{});
        c.breaker_spec = j.value("breaker", std::string{});
        if (j.contains("family")) {
            std::vector<std::vector<ElementId>> sets = j.at("family").get<std::vector<std::vector<ElementId>>>();
            c.family = std::make_shared<const WinningFamily>(c.board_size(), sets);
        }
        if (c.n > 0 && c.universe != pair_count(c.n)) throw ParseError("config: universe does not match n");
        return c;
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
}

json to_json(const Transcript& t) {
    json j;
    j["config"] = to_json(t.config);
    j["seed"] = t.config.seed;
    json moves = json::array();
    for (const auto& m : t.moves) {
        moves.push_back({{"round", m.round},
                         {"player", std::string(to_string(m.player))},
                         {"kind", std::string(to_string(m.move.kind))},
                         {"elements", m.move.elements}});
    }
    j["moves"] = std::move(moves);
    const auto& r = t.result;
    json res;
    res["winner"] = std::string(to_string(r.winner));
    res["fully_claimed"] = r.fully_claimed;
    res["rounds"] = r.rounds;
    res["end"] = r.end_reason;
    res["maker"] = r.maker_elements;
    res["breaker"] = r.breaker_elements;
    if (r.fault) {
        res["fault"] = {{"player", std::string(to_string(r.fault->player))},
                        {"round", r.fault->round},
                        {"reason", r.fault->reason}};
    } else {
        res["fault"] = nullptr;
    }
    if (!r.potentials.empty()) res["potentials"] = r.potentials;
    j["result"] = std::move(res);
    j["maker_info"] = t.maker_info;
    j["breaker_info"] = t.breaker_info;
    return j;
}

namespace {

Player parse_player(const std::string& s) {
    if (s == "maker") return Player::Maker;
    if (s == "breaker") return Player::Breaker;
    throw ParseError("unknown player \"" + s + "\"");
}

}  // namespace

Transcript transcript_from_json(const json& j) {
    Transcript t;
    if (!j.is_object()) throw ParseError("transcript: not a JSON object");
    t.config = config_from_json(j.at("config"));
    t.config.seed = j.value("seed", std::uint64_t{0});
    const auto& moves = j.at("moves");
    for (std::size_t i = 0; i < moves.size(); ++i) {
        try {
            const auto& m = moves[i];
            MoveRecord rec;
            rec.round = m.at("round").get<std::uint64_t>();
            rec.player = parse_player(m.at("player").get<std::string>());
            const auto kind = m.at("kind").get<std::string>();
            if (kind == "claim") rec.move.kind = Move::Kind::Claim;
            else if (kind == "reveal") rec.move.kind = Move::Kind::Reveal;
            else throw ParseError("unknown move kind \"" + kind + "\"");
            rec.move.elements = m.at("elements").get<std::vector<ElementId>>();
            t.moves.push_back(std::move(rec));
        } catch (const json::exception& e) {
            throw ParseError("transcript: malformed move " + std::to_string(i) + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError("transcript: malformed move " + std::to_string(i) + ": " + e.what());
        }
    }
    try {
        const auto& r = j.at("result");
        t.result.winner = parse_player(r.at("winner").get<std::string>());
        t.result.fully_claimed = r.at("fully_claimed").get<std::uint64_t>();
        t.result.rounds = r.at("rounds").get<std::uint64_t>();
        t.result.end_reason = r.value("end", std::string{});
        t.result.maker_elements = r.at("maker").get<std::vector<ElementId>>();
        t.result.breaker_elements = r.at("breaker").get<std::vector<ElementId>>();
        if (r.contains("fault") && !r.at("fault").is_null()) {
            const auto& f = r.at("fault");
            t.result.fault = Fault{parse_player(f.at("player").get<std::string>()), f.at("round").get<std::uint64_t>(),
                                   f.at("reason").get<std::string>()};
        }
        if (r.contains("potentials")) t.result.potentials = r.at("potentials").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("transcript: malformed result: ") + e.what());
    }
    t.maker_info = j.value("maker_info", json::object());
    t.breaker_info = j.value("breaker_info", json::object());
    return t;
}

ReplayReport replay(const Transcript& t) {
    ReplayReport rep;
    const auto& cfg = t.config;
    Board board = cfg.make_board();
    const WinCondition win = resolve_win_condition(cfg);
    WinTracker tracker(win, board);
    bool won_early = false;
    std::uint64_t last_round = 0;
    auto diverge = [&](std::uint64_t round, std::string msg) {
        rep.consistent = false;
        rep.divergence_round = round;
        rep.message = "divergence at round " + std::to_string(round) + ": " + msg;
        return rep;
    };
    for (std::size_t i = 0; i < t.moves.size(); ++i) {
        const auto& m = t.moves[i];
        if (m.round < last_round || m.round == 0) return diverge(m.round, "rounds out of order");
        if (won_early) return diverge(m.round, "moves continue after Maker already won");
        last_round = m.round;
        if (m.player == Player::Maker) {
            if (i > 0 && t.moves[i - 1].player == Player::Maker) return diverge(m.round, "two Maker moves in a row");
            if (auto err = check_maker_move(board, cfg, m.move)) return diverge(m.round, "illegal Maker move: " + *err);
            if (m.move.kind == Move::Kind::Reveal) {
                board.reveal(m.move.elements);
            } else {
                for (auto e : m.move.elements) {
                    board.claim(e, Player::Maker);
                    tracker.on_claim(board, e, Player::Maker);
                }
            }
            if (tracker.maker_won() && !cfg.play_to_end) won_early = true;
        } else {
            if (i == 0 || t.moves[i - 1].player != Player::Maker || t.moves[i - 1].round != m.round)
                return diverge(m.round, "Breaker move without a preceding Maker move in the same round");
            if (m.move.kind != Move::Kind::Claim) return diverge(m.round, "Breaker cannot reveal");
            if (auto err = check_breaker_move(board, cfg, m.move.elements))
                return diverge(m.round, "illegal Breaker move: " + *err);
            for (auto e : m.move.elements) {
                board.claim(e, Player::Breaker);
                tracker.on_claim(board, e, Player::Breaker);
            }
        }
    }
    const auto& r = t.result;
    Player winner = tracker.maker_won() ? Player::Maker : Player::Breaker;
    if (r.fault) winner = r.fault->player == Player::Maker ? Player::Breaker : Player::Maker;
    if (winner != r.winner) return diverge(last_round, "recorded winner does not match the replay");
    if (tracker.fully_claimed() != r.fully_claimed) return diverge(last_round, "fully claimed count differs");
    if (board.elements_of(ClaimState::Maker) != r.maker_elements ||
        board.elements_of(ClaimState::Breaker) != r.breaker_elements)
        return diverge(last_round, "final partition differs");
    if (auto err = board.check_invariants()) return diverge(last_round, "board invariant: " + *err);
    rep.consistent = true;
    rep.message = "consistent";
    return rep;
}

}  // namespace mbg
