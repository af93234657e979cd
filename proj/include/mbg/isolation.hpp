#pragma once
// Breaker for the K_r-factor game that keeps one vertex v out of every
// Maker K_r.
//
// Half of the bias goes to edges at v, so Maker's neighbourhood N_M(v)
// grows slowly. The other half plays an auxiliary dynamic K_{r-1}-game on
// a small complete graph K_T: each vertex w joining N_M(v) gets a private
// auxiliary vertex t_w, the pairs from t_w to the earlier ones are revealed
// on the auxiliary board, Maker edges inside N_M(v) become auxiliary Maker
// claims, and the auxiliary Breaker's answers are claimed for real.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mbg/breaker.hpp"
#include "mbg/engine.hpp"
#include "mbg/rng.hpp"

namespace mbg {

class IsolationBreaker : public BreakerStrategy {
public:
    /// `b` fixes the auxiliary board size ceil(2n / b) and the split
    /// ceil(b/2) at v + floor(b/2) in the auxiliary game.
    IsolationBreaker(Vertex v, std::uint32_t r, std::uint32_t n, std::uint32_t b, std::uint64_t seed,
                     FanPreventionConfig cfg = {});

    std::vector<ElementId> respond(const GameView& view, std::uint32_t budget) override;
    std::string name() const override {
        return "isolate(v=" + std::to_string(v_) + ",r=" + std::to_string(r_) + ")";
    }
    json info() const override;

    /// Cross-checks the mirror between the real and auxiliary boards and the
    /// bound |N_M(v)| <= 2n/b. Returns a description of the first failure.
    std::optional<std::string> audit(const Board& real) const;

    std::uint32_t aux_size() const { return aux_n_; }
    const Board& aux_board() const { return aux_board_; }
    /// Auxiliary vertex of w, or -1 when w is not in N_M(v).
    int aux_vertex(Vertex w) const { return t_of_[w]; }
    std::size_t neighborhood_size() const { return members_.size(); }

    struct Counters {
        std::uint64_t case1 = 0;
        std::uint64_t case21 = 0;
        std::uint64_t case22 = 0;
        std::uint64_t aux_rounds = 0;
        std::uint64_t star = 0;
        std::uint64_t arbitrary = 0;
        std::uint64_t mirrored = 0;
    };
    const Counters& counters() const { return counters_; }

private:
    void join(Vertex y, const Board& real);
    void aux_claim(Vertex a, Vertex b, Player p);

    Vertex v_;
    std::uint32_t r_;
    std::uint32_t n_;
    std::uint32_t b_;
    std::uint32_t half1_;
    std::uint32_t half2_;
    std::uint32_t aux_n_;
    Rng rng_;
    std::size_t cursor_ = 0;
    std::vector<int> t_of_;
    std::vector<Vertex> members_;
    Board aux_board_;
    GameConfig aux_config_;
    std::unique_ptr<BreakerStrategy> aux_breaker_;
    std::uint64_t aux_round_ = 0;
    Counters counters_;
};

}  // namespace mbg
