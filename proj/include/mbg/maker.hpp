#pragma once
// Maker strategies: uniform random play, greedy clique builders, a greedy
// builder focused on one vertex, a family-driven greedy, and scripted play.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mbg/engine.hpp"
#include "mbg/potential.hpp"
#include "mbg/rng.hpp"

namespace mbg {

enum class RandomMode { Forfeit, Resample };

/// Forfeit: draw one element from the whole universe and take it only if
/// it is still open (otherwise pass). Resample: draw among open elements.
class RandomMaker : public MakerStrategy {
public:
    RandomMaker(RandomMode mode, std::uint64_t seed);
    Move next(const GameView& view) override;
    std::string name() const override;

private:
    RandomMode mode_;
    Rng rng_;
};

/// Per-vertex Maker and non-Breaker neighbourhoods, kept in sync with the board.
class ClaimGraphs {
public:
    void sync(const Board& board);
    const Graph& maker() const { return maker_; }
    /// Neighbours reachable through edges Breaker does not own.
    const VertexSet& free_neighbors(Vertex v) const { return free_[v]; }
    std::uint32_t breaker_degree(Vertex v) const { return breaker_deg_[v]; }
    bool ready() const { return n_ > 0; }

private:
    std::uint32_t n_ = 0;
    std::size_t cursor_ = 0;
    Graph maker_;
    std::vector<VertexSet> free_;
    std::vector<std::uint32_t> breaker_deg_;
};

/// Claims the open edge that completes the most Maker K_r's, then the one
/// extending the most Maker K_{r-1}'s, then the one touching the most
/// Breaker-free triangles (weighted by Maker edges already present).
/// Ties go to the lowest edge id.
class GreedyCliqueMaker : public MakerStrategy {
public:
    explicit GreedyCliqueMaker(std::uint32_t r);
    Move next(const GameView& view) override;
    std::string name() const override { return "greedy(r=" + std::to_string(r_) + ")"; }

    /// Best open edge with both endpoints in `within` (all vertices when null).
    static std::optional<ElementId> best_edge(const Board& board, const ClaimGraphs& g, std::uint32_t r,
                                              const VertexSet* within);

private:
    std::uint32_t r_;
    ClaimGraphs graphs_;
};

/// Phase 1 claims edges at v while any are open; phase 2 builds a K_{r-1}
/// inside Maker's neighbourhood of v; phase 3 covers the remaining vertices
/// with disjoint K_r's. Phase 3 keeps a target partition of the uncovered
/// vertices into r-sets that Breaker has not touched, fills the fullest
/// one first, and re-solves only the broken part when Breaker hits a set.
class GreedyAtVertexMaker : public MakerStrategy {
public:
    GreedyAtVertexMaker(Vertex v, std::uint32_t r);
    Move next(const GameView& view) override;
    std::string name() const override {
        return "atvertex(v=" + std::to_string(v_) + ",r=" + std::to_string(r_) + ")";
    }
    json info() const override;
    int phase() const { return phase_; }

private:
    std::optional<ElementId> phase1(const Board& board);
    std::optional<ElementId> phase2(const Board& board);
    std::optional<ElementId> phase3(const Board& board);
    void refresh_blocks();
    bool group_alive(const std::vector<Vertex>& g) const;
    void repair_groups();

    Vertex v_;
    std::uint32_t r_;
    int phase_ = 1;
    ClaimGraphs graphs_;
    VertexSet blocked_;
    std::vector<std::vector<Vertex>> blocks_;
    std::vector<std::vector<Vertex>> groups_;
};

/// Claims the open element with the largest sum of 2^-(missing) over live
/// winning sets through it (an Erdos-Selfridge style Maker).
class GreedyFamilyMaker : public MakerStrategy {
public:
    explicit GreedyFamilyMaker(FamilyPtr family);
    Move next(const GameView& view) override;
    std::string name() const override { return "greedyfamily"; }

private:
    PotentialState state_;
    std::vector<std::uint8_t> eligible_;
};

/// Replays a fixed move list (strict), or claims the first open elements
/// of a preference list each round (preference mode).
class ScriptedMaker : public MakerStrategy {
public:
    static ScriptedMaker strict(std::vector<Move> moves);
    static ScriptedMaker preference(std::vector<ElementId> order);
    /// JSON: {"moves": [{"kind": "claim", "elements": [...]}, ...]} or {"prefer": [...]}.
    static ScriptedMaker from_json(const json& j);

    Move next(const GameView& view) override;
    std::string name() const override { return strict_ ? "script(strict)" : "script(prefer)"; }

private:
    bool strict_ = true;
    std::vector<Move> moves_;
    std::vector<ElementId> order_;
    std::size_t pos_ = 0;
};

/// Lets a claim-only strategy play on a dynamic board: whenever nothing
/// visible is open it reveals `chunk` random hidden elements (all of them
/// when chunk is 0), otherwise it defers to the inner strategy.
class DynamicRevealMaker : public MakerStrategy {
public:
    DynamicRevealMaker(std::unique_ptr<MakerStrategy> inner, std::uint32_t chunk, std::uint64_t seed);
    Move next(const GameView& view) override;
    std::string name() const override;
    json info() const override { return inner_->info(); }

private:
    std::unique_ptr<MakerStrategy> inner_;
    std::uint32_t chunk_;
    Rng rng_;
};

}  // namespace mbg
