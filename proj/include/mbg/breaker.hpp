#pragma once
// Breaker strategies for graph games: the composite H-game Breaker for
// dynamic boards, plus random and idle baselines. The potential strategy
// itself lives in potential.hpp.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mbg/engine.hpp"
#include "mbg/potential.hpp"
#include "mbg/rng.hpp"
#include "mbg/winsets.hpp"

namespace mbg {

/// Parameters of the fan-prevention core. Thresholds come from the half
/// bias q/2 that the core actually plays with.
struct FanPreventionConfig {
    double delta = 0.5;
    std::uint32_t t_cluster = 3;
    /// Bias the thresholds were computed from (half of the game bias).
    std::uint32_t half_bias = 0;
    /// Flower threshold floor((q/2)^(1 - delta)).
    std::uint32_t s = 1;
    /// Simple-fan size max(1, floor((q/2)^(delta / 3))).
    std::uint32_t t_fan = 1;

    static FanPreventionConfig for_bias(std::uint32_t b, double delta = 0.5, std::uint32_t t_cluster = 3);
};

/// Maker and Breaker graphs of a graph board, replayed from its history.
class BoardGraphs {
public:
    /// Applies new history records; returns the Maker edges among them.
    std::vector<std::pair<Vertex, Vertex>> sync(const Board& board);
    const Graph& maker() const { return maker_; }
    const Graph& breaker() const { return breaker_; }

private:
    std::uint32_t n_ = 0;
    std::size_t cursor_ = 0;
    Graph maker_;
    Graph breaker_;
};

/// Breaker for the (dynamic) b-biased H-game on K_n.
///
/// Each round the budget is split: one half blocks the open pair of every
/// dangerous H-bar graph (Maker owns F, the pair vw is not Breaker's), the
/// other half feeds two potential sub-strategies, one over t-clusters of
/// H-copies and one over simple t-fans. Blocking is served first and may
/// borrow from the core when more pairs are dangerous than half the bias.
/// If H is not 2-density maximal, a maximising subgraph is played instead.
/// If H is a forest, Breaker claims the free pairs at both ends of every
/// new Maker edge instead.
class DynamicHBreaker : public BreakerStrategy {
public:
    DynamicHBreaker(const PatternGraph& h, std::uint32_t n, std::uint32_t b, FanPreventionConfig cfg = {},
                    const FamilyLimits& limits = {});

    std::vector<ElementId> respond(const GameView& view, std::uint32_t budget) override;
    std::string name() const override { return "dynamicH(H=" + h_.name() + ")"; }
    json info() const override;

    const PatternGraph& played_pattern() const { return played_; }
    bool forest() const { return forest_; }
    /// True when a family exceeded capacity and only blocking runs.
    bool degraded() const { return degraded_; }
    const FanPreventionConfig& config() const { return cfg_; }
    /// Open dangerous pairs after the last sync, with multiplicities.
    const std::map<ElementId, std::uint32_t>& dangerous() const { return dangerous_; }
    std::uint64_t blocked() const { return blocked_; }

private:
    void sync(const Board& board, std::vector<std::pair<Vertex, Vertex>>& new_maker);

    PatternGraph h_;
    PatternGraph played_;
    std::uint32_t n_;
    FanPreventionConfig cfg_;
    bool forest_ = false;
    bool degraded_ = false;
    std::string degraded_reason_;
    std::vector<HbarGraph> hbars_;
    std::unique_ptr<PotentialState> clusters_;
    std::unique_ptr<PotentialState> fans_;
    BoardGraphs graphs_;
    std::map<ElementId, std::uint32_t> dangerous_;
    std::vector<std::uint8_t> eligible_;
    std::uint64_t blocked_ = 0;
};

class RandomBreaker : public BreakerStrategy {
public:
    explicit RandomBreaker(std::uint64_t seed) : rng_(seed) {}
    std::vector<ElementId> respond(const GameView& view, std::uint32_t budget) override;
    std::string name() const override { return "random"; }

private:
    Rng rng_;
};

/// Never claims anything.
class NullBreaker : public BreakerStrategy {
public:
    std::vector<ElementId> respond(const GameView&, std::uint32_t) override { return {}; }
    std::string name() const override { return "null"; }
};

}  // namespace mbg
