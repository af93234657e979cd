#include "mbg/isolation.hpp"

#include <algorithm>

#include "mbg/errors.hpp"

namespace mbg {

namespace {

std::uint32_t aux_size_for(std::uint32_t n, std::uint32_t b) {
    if (b == 0) throw PreconditionFault("isolation breaker needs b >= 1");
    return std::max<std::uint32_t>(2, (2 * n + b - 1) / b);
}

}  // namespace

IsolationBreaker::IsolationBreaker(Vertex v, std::uint32_t r, std::uint32_t n, std::uint32_t b, std::uint64_t seed,
                                   FanPreventionConfig cfg)
    : v_(v),
      r_(r),
      n_(n),
      b_(b),
      half1_(b - b / 2),
      half2_(b / 2),
      aux_n_(aux_size_for(n, b)),
      rng_(seed),
      t_of_(n, -1),
      aux_board_(Board::complete(aux_size_for(n, b), true)) {
    if (r < 3) throw PreconditionFault("isolation breaker needs r >= 3");
    if (v >= n) throw PreconditionFault("isolation target outside the board");
    aux_config_.n = aux_n_;
    aux_config_.maker_bias = 1;
    aux_config_.breaker_bias = std::max<std::uint32_t>(1, half2_);
    aux_config_.dynamic = true;
    if (half2_ == 0) return;
    if (cfg.half_bias == 0) cfg = FanPreventionConfig::for_bias(half2_, cfg.delta, cfg.t_cluster);
    aux_breaker_ = std::make_unique<DynamicHBreaker>(PatternGraph::clique(r - 1), aux_n_, half2_, cfg);
}

void IsolationBreaker::aux_claim(Vertex a, Vertex b, Player p) {
    const ElementId e = encode_pair(static_cast<Vertex>(t_of_[a]), static_cast<Vertex>(t_of_[b]), aux_n_);
    if (aux_board_.state(e) == ClaimState::Unclaimed) aux_board_.claim(e, p);
}

void IsolationBreaker::join(Vertex y, const Board& real) {
    if (members_.size() >= aux_n_)
        throw InvariantViolation("isolation: N_M(v) outgrew the auxiliary vertex set");
    t_of_[y] = static_cast<int>(members_.size());
    std::vector<ElementId> reveal;
    for (auto w : members_)
        reveal.push_back(encode_pair(static_cast<Vertex>(t_of_[y]), static_cast<Vertex>(t_of_[w]), aux_n_));
    members_.push_back(y);
    if (!reveal.empty()) aux_board_.reveal(reveal);
    // Pairs claimed in the real game before y joined enter the auxiliary board as they stand.
    for (std::size_t i = 0; i + 1 < members_.size(); ++i) {
        const Vertex w = members_[i];
        const auto st = real.state(encode_pair(y, w, n_));
        if (st == ClaimState::Maker) aux_claim(y, w, Player::Maker);
        else if (st == ClaimState::Breaker) aux_claim(y, w, Player::Breaker);
    }
}

std::vector<ElementId> IsolationBreaker::respond(const GameView& view, std::uint32_t budget) {
    const Board& real = view.board;
    if (real.vertex_count() != n_) throw InvalidBoard("isolation breaker built for a different board");
    std::vector<std::pair<Vertex, Vertex>> maker_edges;
    std::vector<Move> aux_moves;
    const auto hist = real.history();
    for (; cursor_ < hist.size(); ++cursor_) {
        const auto [a, b] = decode_pair(hist[cursor_].element, n_);
        if (hist[cursor_].player == Player::Breaker) {
            if (t_of_[a] >= 0 && t_of_[b] >= 0) aux_claim(a, b, Player::Breaker);
            continue;
        }
        maker_edges.emplace_back(a, b);
        if (a == v_ || b == v_) {
            const Vertex y = a == v_ ? b : a;
            ++counters_.case21;
            const std::size_t before = members_.size();
            join(y, real);
            if (before > 0) {
                std::vector<ElementId> revealed;
                for (std::size_t i = 0; i < before; ++i)
                    revealed.push_back(encode_pair(static_cast<Vertex>(t_of_[y]),
                                                   static_cast<Vertex>(t_of_[members_[i]]), aux_n_));
                aux_moves.push_back(Move::reveal(std::move(revealed)));
            }
        } else if (t_of_[a] >= 0 && t_of_[b] >= 0) {
            ++counters_.case22;
            aux_claim(a, b, Player::Maker);
            aux_moves.push_back(Move::claim({encode_pair(static_cast<Vertex>(t_of_[a]),
                                                         static_cast<Vertex>(t_of_[b]), aux_n_)}));
        } else {
            ++counters_.case1;
        }
    }
    if (members_.size() * b_ > 2 * static_cast<std::uint64_t>(n_))
        throw InvariantViolation("isolation: |N_M(v)| exceeds 2n/b");

    std::vector<ElementId> picks;
    std::vector<std::uint8_t> taken(real.universe_size(), 0);
    auto can_take = [&](ElementId e) { return real.is_open(e) && !taken[e]; };
    auto take = [&](ElementId e) {
        taken[e] = 1;
        picks.push_back(e);
    };

    // Star at v, the endpoints of Maker's latest edge first.
    std::uint32_t star = 0;
    auto star_take = [&](Vertex x) {
        if (x == v_ || star >= half1_ || picks.size() >= budget) return;
        const ElementId e = encode_pair(v_, x, n_);
        if (can_take(e)) {
            take(e);
            ++star;
        }
    };
    for (auto it = maker_edges.rbegin(); it != maker_edges.rend(); ++it) {
        star_take(it->first);
        star_take(it->second);
    }
    for (Vertex x = 0; x < n_ && star < half1_ && picks.size() < budget; ++x) star_take(x);
    counters_.star += star;

    // Auxiliary game.
    std::uint32_t mirrored = 0;
    if (aux_breaker_ && !aux_moves.empty()) {
        for (const auto& mv : aux_moves) {
            ++aux_round_;
            GameView aux_view{aux_board_, aux_config_, aux_round_};
            aux_breaker_->observe(aux_view, mv);
        }
        ++counters_.aux_rounds;
        GameView aux_view{aux_board_, aux_config_, aux_round_};
        const std::uint32_t aux_budget =
            std::min<std::uint32_t>(half2_, static_cast<std::uint32_t>(budget - std::min<std::size_t>(budget, picks.size())));
        const auto reply = aux_breaker_->respond(aux_view, aux_budget);
        if (auto err = check_breaker_move(aux_board_, aux_config_, reply))
            throw InvariantViolation("isolation: auxiliary Breaker move illegal: " + *err);
        for (auto e : reply) {
            const auto [ta, tb] = decode_pair(e, aux_n_);
            const Vertex wa = members_.at(ta), wb = members_.at(tb);
            const ElementId f = encode_pair(wa, wb, n_);
            if (!can_take(f)) throw InvariantViolation("isolation: mirrored edge is not free in the real game");
            aux_board_.claim(e, Player::Breaker);
            take(f);
            ++mirrored;
        }
        counters_.mirrored += mirrored;
    }

    // Everything left is spent on arbitrary edges.
    std::vector<ElementId> pool;
    bool pooled = false;
    while (picks.size() < budget) {
        std::optional<ElementId> e;
        for (int tries = 0; tries < 64 && !e; ++tries) {
            const auto c = static_cast<ElementId>(rng_.below(real.universe_size()));
            if (can_take(c)) e = c;
        }
        if (!e) {
            if (!pooled) {
                pool = real.open_elements();
                rng_.shuffle(pool);
                pooled = true;
            }
            while (!pool.empty() && !can_take(pool.back())) pool.pop_back();
            if (pool.empty()) break;
            e = pool.back();
        }
        take(*e);
        ++counters_.arbitrary;
    }
    return picks;
}

std::optional<std::string> IsolationBreaker::audit(const Board& real) const {
    if (members_.size() * b_ > 2 * static_cast<std::uint64_t>(n_))
        return "|N_M(v)| = " + std::to_string(members_.size()) + " exceeds 2n/b";
    if (members_.size() > aux_n_) return "more members than auxiliary vertices";
    std::vector<std::uint8_t> used(aux_n_, 0);
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const Vertex w = members_[i];
        if (t_of_[w] != static_cast<int>(i)) return "mapping out of sync";
        if (used[i]++) return "mapping not injective";
        if (real.state(encode_pair(v_, w, n_)) != ClaimState::Maker) return "member without a Maker edge to v";
    }
    std::size_t maker_deg = 0;
    for (Vertex x = 0; x < n_; ++x)
        if (x != v_ && real.state(encode_pair(v_, x, n_)) == ClaimState::Maker) ++maker_deg;
    // Claims not yet seen by respond (Maker's move of the current round) are allowed to lag by one.
    if (maker_deg > members_.size() + 1 || maker_deg < members_.size()) return "N_M(v) size mismatch";
    for (std::size_t i = 0; i < members_.size(); ++i)
        for (std::size_t j = i + 1; j < members_.size(); ++j) {
            const auto rs = real.state(encode_pair(members_[i], members_[j], n_));
            const ElementId ae = encode_pair(static_cast<Vertex>(i), static_cast<Vertex>(j), aux_n_);
            if (!aux_board_.is_visible(ae)) return "pair inside N_M(v) not revealed on the auxiliary board";
            const auto as = aux_board_.state(ae);
            if (rs != as && !(rs == ClaimState::Breaker && as == ClaimState::Unclaimed && cursor_ < real.history().size()) &&
                !(rs == ClaimState::Maker && as == ClaimState::Unclaimed && cursor_ < real.history().size()))
                return "mirror broken on pair " + std::to_string(members_[i]) + "-" + std::to_string(members_[j]);
        }
    return std::nullopt;
}

json IsolationBreaker::info() const {
    json j{{"strategy", "isolate"},
           {"v", v_},
           {"r", r_},
           {"b", b_},
           {"star_half", half1_},
           {"aux_half", half2_},
           {"aux_vertices", aux_n_},
           {"neighborhood", members_.size()},
           {"case1", counters_.case1},
           {"case2_1", counters_.case21},
           {"case2_2", counters_.case22},
           {"aux_rounds", counters_.aux_rounds},
           {"star_claims", counters_.star},
           {"mirrored_claims", counters_.mirrored},
           {"arbitrary_claims", counters_.arbitrary}};
    if (aux_breaker_) j["aux_breaker"] = aux_breaker_->info();
    return j;
}

}  // namespace mbg
