#include "mbg/engine.hpp"

#include <algorithm>
#include <regex>

#include "mbg/errors.hpp"
#include "mbg/structures.hpp"

namespace mbg {

std::string_view to_string(Move::Kind k) { return k == Move::Kind::Claim ? "claim" : "reveal"; }

// ---------------------------------------------------------------------------
// Win conditions

WinCondition parse_win_condition(const std::string& spec, std::uint32_t n, const FamilyLimits& limits) {
    WinCondition w;
    w.spec = spec;
    static const std::regex kfactor(R"(kfactor:(\d+))");
    static const std::regex kvertex(R"(kvertex:(\d+):(\d+))");
    std::smatch m;
    if (std::regex_match(spec, m, kfactor)) {
        w.kind = WinCondition::Kind::KFactor;
        w.r = static_cast<std::uint32_t>(std::stoul(m[1].str()));
        if (w.r < 2) throw ParseError("kfactor needs r >= 2");
        if (n == 0) throw Unsupported("kfactor needs a graph board");
        return w;
    }
    if (std::regex_match(spec, m, kvertex)) {
        w.kind = WinCondition::Kind::KVertex;
        w.v = static_cast<Vertex>(std::stoul(m[1].str()));
        w.r = static_cast<std::uint32_t>(std::stoul(m[2].str()));
        if (n == 0) throw Unsupported("kvertex needs a graph board");
        if (w.v >= n) throw ParseError("kvertex: vertex out of range");
        if (w.r < 2) throw ParseError("kvertex needs r >= 2");
        return w;
    }
    std::string name = spec;
    if (name.rfind("H=", 0) == 0) name = name.substr(2);
    else if (name.rfind("pattern:", 0) == 0) name = name.substr(8);
    if (n == 0) throw Unsupported("pattern win conditions need a graph board");
    w.kind = WinCondition::Kind::Pattern;
    w.pattern = parse_pattern(name);
    const auto h = w.pattern;
    w.family = cached_family("copies:" + std::to_string(n) + ":" + name + ":" + std::to_string(limits.max_hyperedges),
                             [&] { return enumerate_h_copies(n, h, limits); });
    return w;
}

WinCondition family_win_condition(FamilyPtr family) {
    WinCondition w;
    w.kind = WinCondition::Kind::Family;
    w.spec = "family";
    w.family = std::move(family);
    return w;
}

struct WinTracker::Impl {
    WinCondition::Kind kind;
    // family modes
    FamilyPtr family;
    std::vector<std::uint16_t> missing;
    std::vector<std::uint8_t> broken;
    std::uint64_t alive = 0;
    std::uint64_t full = 0;
    // predicate modes
    std::uint32_t n = 0;
    std::uint32_t r = 0;
    Vertex v = 0;
    Graph free_graph;
    VertexSet covered;
    std::size_t covered_count = 0;
    bool new_clique = false;
    bool dirty_vertex = true;
    std::vector<Vertex> dirty;
    bool dead = false;
};

WinTracker::WinTracker(const WinCondition& win, const Board& board) : impl_(std::make_unique<Impl>()) {
    auto& s = *impl_;
    s.kind = win.kind;
    if (win.kind == WinCondition::Kind::Family || win.kind == WinCondition::Kind::Pattern) {
        if (!win.family) throw InvalidBoard("win condition has no family");
        if (win.family->universe() != board.universe_size())
            throw InvalidBoard("winning family universe does not match the board");
        s.family = win.family;
        s.missing.resize(s.family->size());
        s.broken.assign(s.family->size(), 0);
        for (std::size_t h = 0; h < s.family->size(); ++h)
            s.missing[h] = static_cast<std::uint16_t>(s.family->hyperedge(h).size());
        s.alive = s.family->size();
        for (const auto& rec : board.history()) on_claim(board, rec.element, rec.player);
        return;
    }
    s.n = board.vertex_count();
    s.r = win.r;
    s.v = win.v;
    s.free_graph = Graph::complete(s.n);
    s.covered = VertexSet(s.n);
    if (win.kind == WinCondition::Kind::KFactor && s.n % s.r != 0) s.dead = true;
    for (const auto& rec : board.history()) on_claim(board, rec.element, rec.player);
}

WinTracker::~WinTracker() = default;
WinTracker::WinTracker(WinTracker&&) noexcept = default;

void WinTracker::on_claim(const Board& board, ElementId e, Player p) {
    auto& s = *impl_;
    if (s.family) {
        if (p == Player::Maker) {
            for (auto h : s.family->containing(e)) {
                if (s.broken[h]) continue;
                if (--s.missing[h] == 0) {
                    ++s.full;
                    won_ = true;
                }
            }
        } else {
            for (auto h : s.family->containing(e)) {
                if (s.broken[h]) continue;
                s.broken[h] = 1;
                --s.alive;
            }
        }
        return;
    }
    const auto [a, b] = decode_pair(e, s.n);
    if (p == Player::Breaker) {
        s.free_graph.remove_edge(a, b);
        s.dirty.push_back(a);
        s.dirty.push_back(b);
        if (s.kind == WinCondition::Kind::KVertex) s.dirty_vertex = true;
        return;
    }
    if (won_) return;
    const Graph& mg = board.maker_graph();
    if (s.kind == WinCondition::Kind::KVertex) {
        if (a == s.v || b == s.v || (mg.has_edge(s.v, a) && mg.has_edge(s.v, b)))
            if (kr_at_vertex(mg, s.v, s.r)) won_ = true;
        return;
    }
    // K_r-factor: track which vertices lie in some Maker K_r.
    VertexSet cand = mg.neighbors(a) & mg.neighbors(b);
    std::size_t seen = 0;
    auto mark = [&](Vertex x) {
        if (!s.covered.contains(x)) {
            s.covered.insert(x);
            ++s.covered_count;
        }
    };
    for_each_clique(mg, cand, s.r - 2, [&](const std::vector<Vertex>& c) {
        s.new_clique = true;
        mark(a);
        mark(b);
        for (auto x : c) mark(x);
        return ++seen < 4096;
    });
    if (s.dead || !s.new_clique || s.covered_count < s.n) return;
    s.new_clique = false;
    const auto res = has_kr_factor(mg, s.r, 200'000);
    if (res.exists()) won_ = true;
}

bool WinTracker::maker_can_win(const Board&) {
    auto& s = *impl_;
    if (won_) return true;
    if (s.dead) return false;
    if (s.family) return s.alive > 0;
    if (s.kind == WinCondition::Kind::KVertex) {
        if (s.dirty_vertex) {
            s.dirty_vertex = false;
            if (!kr_at_vertex(s.free_graph, s.v, s.r)) s.dead = true;
        }
        return !s.dead;
    }
    std::sort(s.dirty.begin(), s.dirty.end());
    s.dirty.erase(std::unique(s.dirty.begin(), s.dirty.end()), s.dirty.end());
    for (auto u : s.dirty)
        if (!kr_at_vertex(s.free_graph, u, s.r)) {
            s.dead = true;
            break;
        }
    s.dirty.clear();
    return !s.dead;
}

std::uint64_t WinTracker::fully_claimed() const {
    if (impl_->family) return impl_->full;
    return won_ ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Configuration

std::uint32_t GameConfig::board_size() const {
    return n > 0 ? static_cast<std::uint32_t>(pair_count(n)) : universe;
}

std::uint64_t GameConfig::round_cap() const {
    if (max_rounds > 0) return max_rounds;
    return dynamic ? 2ULL * board_size() : board_size();
}

Board GameConfig::make_board() const {
    if (n > 0) return Board::complete(n, dynamic);
    return Board::abstract(universe, dynamic);
}

WinCondition resolve_win_condition(const GameConfig& config) {
    if (config.family) return family_win_condition(config.family);
    if (config.win.empty()) throw ParseError("game has no win condition");
    return parse_win_condition(config.win, config.n);
}

std::optional<std::string> check_maker_move(const Board& board, const GameConfig& config, const Move& move) {
    std::vector<ElementId> sorted = move.elements;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return "move lists an element twice";
    for (auto e : sorted)
        if (e >= board.universe_size()) return "element " + std::to_string(e) + " outside the board";
    if (move.kind == Move::Kind::Reveal) {
        if (!board.dynamic()) return "reveal in a static game";
        if (sorted.empty()) return "reveal of an empty set";
        for (auto e : sorted)
            if (board.is_visible(e)) return "element " + std::to_string(e) + " is already visible";
        return std::nullopt;
    }
    if (sorted.size() > config.maker_bias)
        return "claims " + std::to_string(sorted.size()) + " elements, bias is " + std::to_string(config.maker_bias);
    if (board.dynamic() && board.open_count() == 0 && board.hidden_count() > 0)
        return "option (a) is impossible, so Maker must reveal";
    for (auto e : sorted) {
        if (!board.is_visible(e)) return "element " + std::to_string(e) + " is not visible";
        if (board.state(e) != ClaimState::Unclaimed) return "element " + std::to_string(e) + " is already claimed";
    }
    return std::nullopt;
}

std::optional<std::string> check_breaker_move(const Board& board, const GameConfig& config,
                                              const std::vector<ElementId>& elements) {
    const std::uint32_t budget = std::min(config.breaker_bias, board.open_count());
    if (elements.size() > budget)
        return "claims " + std::to_string(elements.size()) + " elements, allowed " + std::to_string(budget);
    std::vector<ElementId> sorted = elements;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return "move lists an element twice";
    for (auto e : sorted) {
        if (e >= board.universe_size()) return "element " + std::to_string(e) + " outside the board";
        if (!board.is_visible(e)) return "element " + std::to_string(e) + " is not visible";
        if (board.state(e) != ClaimState::Unclaimed) return "element " + std::to_string(e) + " is already claimed";
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Game loop

Transcript run_game(const GameConfig& config, MakerStrategy& maker, BreakerStrategy& breaker, const GameHooks& hooks) {
    return run_game(config, resolve_win_condition(config), maker, breaker, hooks);
}

Transcript run_game(const GameConfig& config, const WinCondition& win, MakerStrategy& maker, BreakerStrategy& breaker,
                    const GameHooks& hooks) {
    if (config.maker_bias < 1 || config.breaker_bias < 1) throw PreconditionFault("biases must be >= 1");
    Transcript t;
    t.config = config;
    if (t.config.maker_spec.empty()) t.config.maker_spec = maker.name();
    if (t.config.breaker_spec.empty()) t.config.breaker_spec = breaker.name();
    Board board = config.make_board();
    WinTracker tracker(win, board);
    auto& res = t.result;
    const std::uint64_t cap = config.round_cap();
    std::uint64_t round = 0;

    auto fault = [&](Player p, std::string reason) {
        res.fault = Fault{p, round, std::move(reason)};
        res.end_reason = "fault";
    };

    while (true) {
        if (board.open_count() == 0 && board.hidden_count() == 0) {
            res.end_reason = "board exhausted";
            break;
        }
        if (round >= cap) {
            res.end_reason = "round cap";
            break;
        }
        ++round;
        const GameView view{board, t.config, round};

        Move move;
        try {
            move = maker.next(view);
        } catch (const Error& e) {
            fault(Player::Maker, std::string("strategy error: ") + e.what());
            break;
        }
        if (auto err = check_maker_move(board, config, move)) {
            fault(Player::Maker, *err);
            break;
        }
        t.moves.push_back({round, Player::Maker, move});
        if (move.kind == Move::Kind::Reveal) {
            board.reveal(move.elements);
        } else {
            for (auto e : move.elements) {
                board.claim(e, Player::Maker);
                tracker.on_claim(board, e, Player::Maker);
            }
        }
        if (tracker.maker_won() && !config.play_to_end) {
            res.end_reason = "maker completed a winning set";
            break;
        }
        try {
            breaker.observe(view, move);
            if (auto pot = breaker.potential(view)) res.potentials.push_back(*pot);
        } catch (const Error& e) {
            fault(Player::Breaker, std::string("strategy error: ") + e.what());
            break;
        }
        if (hooks.after_maker) hooks.after_maker(view, move);
        if (config.early_stop && !tracker.maker_can_win(board)) {
            res.end_reason = "maker can no longer win";
            break;
        }

        const std::uint32_t budget = std::min(config.breaker_bias, board.open_count());
        if (budget > 0) {
            std::vector<ElementId> reply;
            try {
                reply = breaker.respond(view, budget);
            } catch (const Error& e) {
                fault(Player::Breaker, std::string("strategy error: ") + e.what());
                break;
            }
            if (auto err = check_breaker_move(board, config, reply)) {
                fault(Player::Breaker, *err);
                break;
            }
            t.moves.push_back({round, Player::Breaker, Move::claim(reply)});
            for (auto e : reply) {
                board.claim(e, Player::Breaker);
                tracker.on_claim(board, e, Player::Breaker);
            }
        }
        if (hooks.after_round) hooks.after_round(view);
        if (config.early_stop && !tracker.maker_can_win(board)) {
            res.end_reason = "maker can no longer win";
            break;
        }
    }

    res.rounds = round;
    res.fully_claimed = tracker.fully_claimed();
    if (res.fault) res.winner = res.fault->player == Player::Maker ? Player::Breaker : Player::Maker;
    else res.winner = tracker.maker_won() ? Player::Maker : Player::Breaker;
    res.maker_elements = board.elements_of(ClaimState::Maker);
    res.breaker_elements = board.elements_of(ClaimState::Breaker);
    t.maker_info = maker.info();
    t.breaker_info = breaker.info();
    if (auto err = board.check_invariants()) throw InvariantViolation("board invariant broken: " + *err);
    return t;
}

// ---------------------------------------------------------------------------
// Multiplexing

MultiplexMaker::MultiplexMaker(std::vector<std::unique_ptr<MakerStrategy>> subs, Schedule schedule)
    : subs_(std::move(subs)), schedule_(std::move(schedule)) {
    if (subs_.empty()) throw PreconditionFault("multiplex needs at least one strategy");
    if (!schedule_) {
        const std::size_t k = subs_.size();
        schedule_ = [k](std::uint64_t round) { return static_cast<std::size_t>((round - 1) % k); };
    }
    last_breaker_count_.assign(subs_.size(), 0);
    started_.assign(subs_.size(), false);
    batches_.resize(subs_.size());
    claims_.resize(subs_.size());
}

Move MultiplexMaker::next(const GameView& view) {
    const std::size_t i = schedule_(view.round);
    if (i >= subs_.size()) throw PreconditionFault("multiplex schedule returned an unknown index");
    const std::size_t breaker_now = view.board.breaker_count();
    if (started_[i]) batches_[i].push_back(breaker_now - last_breaker_count_[i]);
    started_[i] = true;
    last_breaker_count_[i] = breaker_now;
    Move m = subs_[i]->next(view);
    if (check_maker_move(view.board, view.config, m)) m = subs_[i]->next(view);
    if (m.kind == Move::Kind::Claim) claims_[i].insert(claims_[i].end(), m.elements.begin(), m.elements.end());
    return m;
}

std::string MultiplexMaker::name() const {
    std::string s = "multiplex(";
    for (std::size_t i = 0; i < subs_.size(); ++i) s += (i ? "," : "") + subs_[i]->name();
    return s + ")";
}

json MultiplexMaker::info() const {
    json j;
    j["strategies"] = json::array();
    for (const auto& s : subs_) j["strategies"].push_back(s->info());
    return j;
}

}  // namespace mbg
