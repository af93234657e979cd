#pragma once
// Game board: a finite universe of elements (the edges of K_n, or an
// abstract ground set), who owns each element, and which elements are
// currently visible (dynamic games reveal the board over time).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mbg/graph.hpp"

namespace mbg {

enum class Player : std::uint8_t { Maker, Breaker };
enum class ClaimState : std::uint8_t { Unclaimed, Maker, Breaker };

std::string_view to_string(Player p);
std::string_view to_string(ClaimState s);
inline ClaimState state_of(Player p) { return p == Player::Maker ? ClaimState::Maker : ClaimState::Breaker; }

struct ClaimRecord {
    ElementId element;
    Player player;
};

class Board {
public:
    /// Board over the edges of K_n; everything visible unless `dynamic`.
    static Board complete(std::uint32_t n, bool dynamic = false);
    /// Abstract board of `size` elements.
    static Board abstract(std::uint32_t size, bool dynamic = false);

    std::uint32_t universe_size() const { return static_cast<std::uint32_t>(claims_.size()); }
    bool is_graph() const { return n_.has_value(); }
    /// Vertex count of a graph board; throws Unsupported otherwise.
    std::uint32_t vertex_count() const;
    bool dynamic() const { return dynamic_; }

    ClaimState state(ElementId e) const { return claims_.at(e); }
    bool is_visible(ElementId e) const { return visible_.at(e) != 0; }
    bool is_open(ElementId e) const { return open_[e] != 0; }

    /// Claims a visible, unclaimed element. Throws IllegalMove otherwise.
    void claim(ElementId e, Player p);
    /// Makes invisible elements visible. Throws IllegalMove on an empty list,
    /// a duplicate, or an already-visible element; the board is unchanged then.
    void reveal(std::span<const ElementId> elements);

    std::uint32_t maker_count() const { return maker_count_; }
    std::uint32_t breaker_count() const { return breaker_count_; }
    std::uint32_t unclaimed_count() const { return universe_size() - maker_count_ - breaker_count_; }
    std::uint32_t visible_count() const { return visible_count_; }
    std::uint32_t open_count() const { return visible_count_ - maker_count_ - breaker_count_; }
    std::uint32_t hidden_count() const { return universe_size() - visible_count_; }

    /// 1 for visible unclaimed elements, else 0. Indexed by element id.
    std::span<const std::uint8_t> open_mask() const { return open_; }
    std::span<const std::uint8_t> visible_mask() const { return visible_; }

    /// Every claim in order.
    std::span<const ClaimRecord> history() const { return history_; }

    std::vector<ElementId> elements_of(ClaimState s) const;
    std::vector<ElementId> open_elements() const;
    std::vector<ElementId> hidden_elements() const;

    /// Graph of Maker's (Breaker's) claimed edges. Throws Unsupported on abstract boards.
    const Graph& maker_graph() const;
    const Graph& breaker_graph() const;

    /// Returns a description of the first broken invariant, or nothing.
    std::optional<std::string> check_invariants() const;

private:
    Board(std::uint32_t size, std::optional<std::uint32_t> n, bool dynamic);

    std::optional<std::uint32_t> n_;
    bool dynamic_ = false;
    std::vector<ClaimState> claims_;
    std::vector<std::uint8_t> visible_;
    std::vector<std::uint8_t> open_;
    std::uint32_t maker_count_ = 0;
    std::uint32_t breaker_count_ = 0;
    std::uint32_t visible_count_ = 0;
    std::vector<ClaimRecord> history_;
    Graph maker_graph_;
    Graph breaker_graph_;
};

}  // namespace mbg
