#include "mbg/maker.hpp"

#include <algorithm>
#include <tuple>

#include "mbg/errors.hpp"
#include "mbg/kernels.hpp"
#include "mbg/structures.hpp"

namespace mbg {

// ---------------------------------------------------------------------------
// Random

RandomMaker::RandomMaker(RandomMode mode, std::uint64_t seed) : mode_(mode), rng_(seed) {}

std::string RandomMaker::name() const { return mode_ == RandomMode::Forfeit ? "random(forfeit)" : "random(resample)"; }

Move RandomMaker::next(const GameView& view) {
    const Board& b = view.board;
    const std::uint32_t m = view.config.maker_bias;
    std::vector<ElementId> picks;
    if (mode_ == RandomMode::Forfeit) {
        for (std::uint32_t i = 0; i < m; ++i) {
            const auto e = static_cast<ElementId>(rng_.below(b.universe_size()));
            if (b.is_open(e) && std::find(picks.begin(), picks.end(), e) == picks.end()) picks.push_back(e);
        }
        return Move::claim(std::move(picks));
    }
    const std::uint32_t want = std::min(m, b.open_count());
    if (want == 0) return Move::pass();
    // Rejection sampling while open elements are common, a scan otherwise.
    if (static_cast<std::uint64_t>(b.open_count()) * 4 >= b.universe_size()) {
        while (picks.size() < want) {
            const auto e = static_cast<ElementId>(rng_.below(b.universe_size()));
            if (b.is_open(e) && std::find(picks.begin(), picks.end(), e) == picks.end()) picks.push_back(e);
        }
    } else {
        const auto open = b.open_elements();
        for (auto i : rng_.sample(static_cast<std::uint32_t>(open.size()), want)) picks.push_back(open[i]);
    }
    return Move::claim(std::move(picks));
}

// ---------------------------------------------------------------------------
// Claim graphs

void ClaimGraphs::sync(const Board& board) {
    if (n_ == 0) {
        n_ = board.vertex_count();
        maker_ = Graph(n_);
        free_.assign(n_, VertexSet(n_));
        for (Vertex u = 0; u < n_; ++u)
            for (Vertex v = 0; v < n_; ++v)
                if (u != v) free_[u].insert(v);
        breaker_deg_.assign(n_, 0);
    }
    const auto hist = board.history();
    for (; cursor_ < hist.size(); ++cursor_) {
        const auto [a, b] = decode_pair(hist[cursor_].element, n_);
        if (hist[cursor_].player == Player::Maker) {
            maker_.add_edge(a, b);
        } else {
            free_[a].erase(b);
            free_[b].erase(a);
            ++breaker_deg_[a];
            ++breaker_deg_[b];
        }
    }
}

// ---------------------------------------------------------------------------
// Greedy clique builder

namespace {

std::size_t count_cliques(const Graph& g, const VertexSet& cand, std::uint32_t k, std::size_t cap) {
    if (k == 0) return 1;
    if (k == 1) return std::min(cand.size(), cap);
    std::size_t c = 0;
    for_each_clique(g, cand, k, [&](const std::vector<Vertex>&) { return ++c < cap; });
    return c;
}

}  // namespace

GreedyCliqueMaker::GreedyCliqueMaker(std::uint32_t r) : r_(r) {
    if (r < 2) throw PreconditionFault("greedy clique maker needs r >= 2");
}

std::optional<ElementId> GreedyCliqueMaker::best_edge(const Board& board, const ClaimGraphs& g, std::uint32_t r,
                                                      const VertexSet* within) {
    const std::uint32_t n = board.vertex_count();
    const Graph& mg = g.maker();
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> common(words), alive(words);
    using Score = std::tuple<std::size_t, std::size_t, std::size_t>;
    std::optional<ElementId> best;
    Score best_score{0, 0, 0};
    VertexSet cm(n);
    for (Vertex a = 0; a < n; ++a) {
        if (within && !within->contains(a)) continue;
        const auto ma = mg.neighbors(a).words();
        const auto fa = g.free_neighbors(a).words();
        for (Vertex b = a + 1; b < n; ++b) {
            if (within && !within->contains(b)) continue;
            const ElementId e = encode_pair(a, b, n);
            if (!board.is_open(e)) continue;
            const auto mb = mg.neighbors(b).words();
            const auto fb = g.free_neighbors(b).words();
            for (std::size_t w = 0; w < words; ++w) {
                common[w] = ma[w] & mb[w];
                alive[w] = fa[w] & fb[w];
                if (within) {
                    common[w] &= within->words()[w];
                    alive[w] &= within->words()[w];
                }
            }
            std::size_t comp = 0, ext = 0;
            const std::size_t shared = kernels::and_popcount(common, common);
            if (r == 2) {
                comp = 1;
            } else if (r == 3) {
                comp = shared;
            } else if (shared + 2 >= r) {
                std::copy(common.begin(), common.end(), cm.words().begin());
                comp = count_cliques(mg, cm, r - 2, 1 << 16);
                ext = count_cliques(mg, cm, r - 3, 1 << 16);
            } else if (r >= 4) {
                std::copy(common.begin(), common.end(), cm.words().begin());
                ext = count_cliques(mg, cm, r - 3, 1 << 16);
            }
            const std::size_t tri = kernels::and_popcount(alive, alive) + kernels::and_popcount(alive, ma) +
                                    kernels::and_popcount(alive, mb) + kernels::and3_popcount(alive, ma, mb);
            const Score s{comp, ext, tri};
            if (!best || s > best_score) {
                best = e;
                best_score = s;
            }
        }
    }
    return best;
}

Move GreedyCliqueMaker::next(const GameView& view) {
    graphs_.sync(view.board);
    auto first = best_edge(view.board, graphs_, r_, nullptr);
    if (!first) return Move::pass();
    std::vector<ElementId> picks{*first};
    if (view.config.maker_bias > 1) {
        // Later picks in the same round see the earlier ones as Maker's.
        Board board = view.board;
        ClaimGraphs graphs = graphs_;
        for (std::uint32_t i = 1; i < view.config.maker_bias; ++i) {
            board.claim(picks.back(), Player::Maker);
            graphs.sync(board);
            auto e = best_edge(board, graphs, r_, nullptr);
            if (!e) break;
            picks.push_back(*e);
        }
    }
    return Move::claim(std::move(picks));
}

// ---------------------------------------------------------------------------
// Greedy at a vertex

GreedyAtVertexMaker::GreedyAtVertexMaker(Vertex v, std::uint32_t r) : v_(v), r_(r) {
    if (r < 2) throw PreconditionFault("atvertex maker needs r >= 2");
}

json GreedyAtVertexMaker::info() const {
    return {{"strategy", "atvertex"}, {"v", v_}, {"r", r_}, {"phase", phase_}, {"blocks", blocks_.size()}};
}

std::optional<ElementId> GreedyAtVertexMaker::phase1(const Board& board) {
    const std::uint32_t n = board.vertex_count();
    const Graph& mg = graphs_.maker();
    std::optional<ElementId> best;
    std::size_t best_score = 0;
    for (Vertex x = 0; x < n; ++x) {
        if (x == v_) continue;
        const ElementId e = encode_pair(v_, x, n);
        if (!board.is_open(e)) continue;
        const std::size_t s = kernels::and_popcount(mg.neighbors(x).words(), mg.neighbors(v_).words());
        if (!best || s > best_score || (s == best_score && e < *best)) {
            best = e;
            best_score = s;
        }
    }
    return best;
}

std::optional<ElementId> GreedyAtVertexMaker::phase2(const Board& board) {
    const Graph& mg = graphs_.maker();
    if (kr_at_vertex(mg, v_, r_)) return std::nullopt;
    const VertexSet within = mg.neighbors(v_);
    return GreedyCliqueMaker::best_edge(board, graphs_, r_ - 1, &within);
}

void GreedyAtVertexMaker::refresh_blocks() {
    const Graph& mg = graphs_.maker();
    const std::uint32_t n = mg.vertex_count();
    if (blocked_.universe() != n) blocked_ = VertexSet(n);
    auto lock = [&](const std::vector<Vertex>& c) {
        for (auto x : c) blocked_.insert(x);
        blocks_.push_back(c);
    };
    if (!blocked_.contains(v_)) {
        VertexSet cand = mg.neighbors(v_);
        cand.subtract(blocked_);
        if (auto c = find_clique(mg, cand, r_ - 1)) {
            c->push_back(v_);
            std::sort(c->begin(), c->end());
            lock(*c);
        }
    }
    for (const auto& g : groups_) {
        bool fresh = true;
        for (auto x : g) fresh = fresh && !blocked_.contains(x);
        if (fresh && mg.is_clique(g)) lock(g);
    }
}

bool GreedyAtVertexMaker::group_alive(const std::vector<Vertex>& g) const {
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (blocked_.contains(g[i])) return false;
        for (std::size_t j = i + 1; j < g.size(); ++j)
            if (!graphs_.free_neighbors(g[i]).contains(g[j])) return false;
    }
    return true;
}

void GreedyAtVertexMaker::repair_groups() {
    const Graph& mg = graphs_.maker();
    const std::uint32_t n = mg.vertex_count();
    std::vector<std::vector<Vertex>> intact;
    VertexSet grouped(n);
    for (auto& g : groups_) {
        if (!group_alive(g)) continue;
        for (auto x : g) grouped.insert(x);
        intact.push_back(std::move(g));
    }
    groups_.clear();
    std::vector<Vertex> pool;
    for (Vertex x = 0; x < n; ++x)
        if (!blocked_.contains(x) && !grouped.contains(x)) pool.push_back(x);
    if (pool.empty()) {
        groups_ = std::move(intact);
        return;
    }
    auto made = [&](const std::vector<Vertex>& g) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j) c += mg.has_edge(g[i], g[j]) ? 1 : 0;
        return c;
    };
    // Least advanced intact sets are given up first when the pool cannot be covered.
    std::stable_sort(intact.begin(), intact.end(),
                     [&](const auto& a, const auto& b) { return made(a) > made(b); });
    Graph free(n);
    for (Vertex x = 0; x < n; ++x)
        graphs_.free_neighbors(x).for_each([&](Vertex y) {
            if (x < y) free.add_edge(x, y);
        });
    std::size_t release = 1;
    while (true) {
        if (pool.size() % r_ == 0) {
            auto res = has_kr_factor_on(free, pool, r_, 20'000);
            if (res.exists()) {
                groups_ = std::move(intact);
                for (auto& g : res.certificate->blocks) groups_.push_back(std::move(g));
                return;
            }
        }
        if (intact.empty()) return;
        for (std::size_t k = 0; k < release && !intact.empty(); ++k) {
            for (auto x : intact.back()) pool.push_back(x);
            intact.pop_back();
        }
        release *= 2;
    }
}

std::optional<ElementId> GreedyAtVertexMaker::phase3(const Board& board) {
    refresh_blocks();
    bool broken = groups_.empty();
    for (const auto& g : groups_) broken = broken || !group_alive(g);
    if (broken) repair_groups();
    const Graph& mg = graphs_.maker();
    const std::uint32_t n = mg.vertex_count();
    std::optional<ElementId> best;
    std::size_t best_made = 0;
    for (const auto& g : groups_) {
        std::size_t made = 0;
        std::optional<ElementId> open;
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j) {
                const ElementId e = encode_pair(g[i], g[j], n);
                if (mg.has_edge(g[i], g[j])) ++made;
                else if (board.is_open(e) && (!open || e < *open)) open = e;
            }
        if (open && (!best || made > best_made || (made == best_made && *open < *best))) {
            best = open;
            best_made = made;
        }
    }
    if (best) return best;
    return GreedyCliqueMaker::best_edge(board, graphs_, r_, nullptr);
}

Move GreedyAtVertexMaker::next(const GameView& view) {
    graphs_.sync(view.board);
    std::optional<ElementId> e;
    if (phase_ == 1) {
        e = phase1(view.board);
        if (!e) phase_ = 2;
    }
    if (phase_ == 2) {
        e = phase2(view.board);
        if (!e) phase_ = 3;
    }
    if (phase_ == 3) e = phase3(view.board);
    if (!e) return Move::pass();
    return Move::claim({*e});
}

// ---------------------------------------------------------------------------
// Family greedy

GreedyFamilyMaker::GreedyFamilyMaker(FamilyPtr family) : state_(std::move(family), 1.0, 1.0) {}

Move GreedyFamilyMaker::next(const GameView& view) {
    state_.sync(view.board);
    const auto open = view.board.open_mask();
    eligible_.assign(open.begin(), open.end());
    std::vector<ElementId> picks;
    for (std::uint32_t i = 0; i < view.config.maker_bias; ++i) {
        const auto best = state_.argmax(eligible_);
        if (best.index == kernels::ArgMax::npos) break;
        const auto e = static_cast<ElementId>(best.index);
        picks.push_back(e);
        eligible_[e] = 0;
        state_.maker_claim(e);
    }
    return Move::claim(std::move(picks));
}

// ---------------------------------------------------------------------------
// Scripted

ScriptedMaker ScriptedMaker::strict(std::vector<Move> moves) {
    ScriptedMaker s;
    s.strict_ = true;
    s.moves_ = std::move(moves);
    return s;
}

ScriptedMaker ScriptedMaker::preference(std::vector<ElementId> order) {
    ScriptedMaker s;
    s.strict_ = false;
    s.order_ = std::move(order);
    return s;
}

ScriptedMaker ScriptedMaker::from_json(const json& j) {
    try {
        if (j.contains("prefer")) return preference(j.at("prefer").get<std::vector<ElementId>>());
        std::vector<Move> moves;
        for (const auto& m : j.at("moves")) {
            const auto kind = m.value("kind", std::string("claim"));
            auto elems = m.at("elements").get<std::vector<ElementId>>();
            if (kind == "claim") moves.push_back(Move::claim(std::move(elems)));
            else if (kind == "reveal") moves.push_back(Move::reveal(std::move(elems)));
            else throw ParseError("script: unknown move kind \"" + kind + "\"");
        }
        return strict(std::move(moves));
    } catch (const json::exception& e) {
        throw ParseError(std::string("script: ") + e.what());
    }
}

Move ScriptedMaker::next(const GameView& view) {
    if (strict_) {
        if (pos_ < moves_.size()) return moves_[pos_++];
        return Move::pass();
    }
    std::vector<ElementId> picks;
    for (auto e : order_) {
        if (picks.size() >= view.config.maker_bias) break;
        if (e < view.board.universe_size() && view.board.is_open(e) &&
            std::find(picks.begin(), picks.end(), e) == picks.end())
            picks.push_back(e);
    }
    return Move::claim(std::move(picks));
}

// ---------------------------------------------------------------------------
// Dynamic boards

DynamicRevealMaker::DynamicRevealMaker(std::unique_ptr<MakerStrategy> inner, std::uint32_t chunk, std::uint64_t seed)
    : inner_(std::move(inner)), chunk_(chunk), rng_(seed) {}

std::string DynamicRevealMaker::name() const {
    return inner_->name() + "+reveal(" + (chunk_ == 0 ? std::string("all") : std::to_string(chunk_)) + ")";
}

Move DynamicRevealMaker::next(const GameView& view) {
    const Board& b = view.board;
    if (b.dynamic() && b.open_count() == 0 && b.hidden_count() > 0) {
        auto hidden = b.hidden_elements();
        if (chunk_ == 0 || chunk_ >= hidden.size()) return Move::reveal(std::move(hidden));
        std::vector<ElementId> pick;
        for (auto i : rng_.sample(static_cast<std::uint32_t>(hidden.size()), chunk_)) pick.push_back(hidden[i]);
        std::sort(pick.begin(), pick.end());
        return Move::reveal(std::move(pick));
    }
    return inner_->next(view);
}

}  // namespace mbg
