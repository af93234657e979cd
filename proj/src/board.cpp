#include "mbg/board.hpp"

#include <algorithm>
#include <string>

#include "mbg/errors.hpp"

namespace mbg {

std::string_view to_string(Player p) { return p == Player::Maker ? "maker" : "breaker"; }

std::string_view to_string(ClaimState s) {
    switch (s) {
        case ClaimState::Unclaimed: return "unclaimed";
        case ClaimState::Maker: return "maker";
        case ClaimState::Breaker: return "breaker";
    }
    return "?";
}

Board::Board(std::uint32_t size, std::optional<std::uint32_t> n, bool dynamic)
    : n_(n),
      dynamic_(dynamic),
      claims_(size, ClaimState::Unclaimed),
      visible_(size, dynamic ? 0 : 1),
      open_(size, dynamic ? 0 : 1),
      visible_count_(dynamic ? 0 : size) {
    if (n_) {
        maker_graph_ = Graph(*n_);
        breaker_graph_ = Graph(*n_);
    }
}

Board Board::complete(std::uint32_t n, bool dynamic) {
    if (n < 2) throw InvalidBoard("complete board needs n >= 2, got " + std::to_string(n));
    if (pair_count(n) > 0xffffffffULL) throw InvalidBoard("board too large");
    return Board(static_cast<std::uint32_t>(pair_count(n)), n, dynamic);
}

Board Board::abstract(std::uint32_t size, bool dynamic) {
    if (size == 0) throw InvalidBoard("abstract board needs at least one element");
    return Board(size, std::nullopt, dynamic);
}

std::uint32_t Board::vertex_count() const {
    if (!n_) throw Unsupported("not a graph board");
    return *n_;
}

void Board::claim(ElementId e, Player p) {
    if (e >= claims_.size()) throw IllegalMove("element " + std::to_string(e) + " outside the board");
    if (claims_[e] != ClaimState::Unclaimed)
        throw IllegalMove("element " + std::to_string(e) + " already claimed by " + std::string(to_string(claims_[e])));
    if (!visible_[e]) throw IllegalMove("element " + std::to_string(e) + " is not on the visible board");
    claims_[e] = state_of(p);
    open_[e] = 0;
    history_.push_back({e, p});
    if (p == Player::Maker) {
        ++maker_count_;
        if (n_) {
            auto [u, v] = decode_pair(e, *n_);
            maker_graph_.add_edge(u, v);
        }
    } else {
        ++breaker_count_;
        if (n_) {
            auto [u, v] = decode_pair(e, *n_);
            breaker_graph_.add_edge(u, v);
        }
    }
}

void Board::reveal(std::span<const ElementId> elements) {
    if (elements.empty()) throw IllegalMove("reveal of an empty set");
    std::vector<ElementId> sorted(elements.begin(), elements.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw IllegalMove("reveal lists an element twice");
    for (auto e : sorted) {
        if (e >= claims_.size()) throw IllegalMove("element " + std::to_string(e) + " outside the board");
        if (visible_[e]) throw IllegalMove("element " + std::to_string(e) + " is already visible");
    }
    for (auto e : sorted) {
        visible_[e] = 1;
        open_[e] = 1;
    }
    visible_count_ += static_cast<std::uint32_t>(sorted.size());
}

std::vector<ElementId> Board::elements_of(ClaimState s) const {
    std::vector<ElementId> out;
    for (ElementId e = 0; e < claims_.size(); ++e)
        if (claims_[e] == s) out.push_back(e);
    return out;
}

std::vector<ElementId> Board::open_elements() const {
    std::vector<ElementId> out;
    out.reserve(open_count());
    for (ElementId e = 0; e < open_.size(); ++e)
        if (open_[e]) out.push_back(e);
    return out;
}

std::vector<ElementId> Board::hidden_elements() const {
    std::vector<ElementId> out;
    for (ElementId e = 0; e < visible_.size(); ++e)
        if (!visible_[e]) out.push_back(e);
    return out;
}

const Graph& Board::maker_graph() const {
    if (!n_) throw Unsupported("maker_graph on a non-graph board");
    return maker_graph_;
}

const Graph& Board::breaker_graph() const {
    if (!n_) throw Unsupported("breaker_graph on a non-graph board");
    return breaker_graph_;
}

std::optional<std::string> Board::check_invariants() const {
    std::uint32_t m = 0, b = 0, vis = 0;
    for (ElementId e = 0; e < claims_.size(); ++e) {
        if (visible_[e]) ++vis;
        if (claims_[e] == ClaimState::Maker) ++m;
        if (claims_[e] == ClaimState::Breaker) ++b;
        if (claims_[e] != ClaimState::Unclaimed && !visible_[e])
            return "claimed element " + std::to_string(e) + " is not visible";
        const bool open = visible_[e] && claims_[e] == ClaimState::Unclaimed;
        if (open != (open_[e] != 0)) return "open mask out of sync at " + std::to_string(e);
    }
    if (m != maker_count_ || b != breaker_count_ || vis != visible_count_) return "cached counts out of sync";
    if (m + b + unclaimed_count() != universe_size()) return "claim states do not partition the universe";
    if (n_ && (maker_graph_.edge_count() != m || breaker_graph_.edge_count() != b)) return "claim graphs out of sync";
    return std::nullopt;
}

}  // namespace mbg
