#pragma once
// Monte Carlo harness: win-rate sweeps, threshold-bias estimation by
// bisection, log-log exponent fits and random-graph discrepancy checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mbg/engine.hpp"
#include "mbg/graph.hpp"
#include "mbg/rng.hpp"

namespace mbg {

/// Everything about a game except Breaker's bias and the seed.
struct GameSetup {
    /// n, win (or family), dynamic, maker_bias, max_rounds, early_stop.
    GameConfig base;
    std::string maker = "random(resample)";
    std::string breaker = "potential()";
};

struct GameOutcome {
    bool fault = false;
    Player winner = Player::Breaker;
    std::uint64_t rounds = 0;
    std::string fault_reason;
};

/// One game with Breaker bias b. Strategy seeds are derived from `seed`.
GameOutcome play_one(const GameSetup& setup, const WinCondition& win, std::uint32_t b, std::uint64_t seed);

/// Worker threads: MBG_THREADS if set, else the hardware concurrency.
unsigned default_threads();

struct SweepRecord {
    std::uint32_t n = 0;
    std::uint32_t r = 0;
    std::string pattern;
    std::uint32_t b = 0;
    std::uint64_t games = 0;
    std::uint64_t maker_wins = 0;
    std::uint64_t breaker_wins = 0;
    std::uint64_t faults = 0;
    double mean_rounds = 0;
    std::uint64_t seed = 0;
    std::string first_fault;

    double maker_rate() const {
        const auto decided = maker_wins + breaker_wins;
        return decided == 0 ? 0.0 : static_cast<double>(maker_wins) / static_cast<double>(decided);
    }
};

struct SweepCell {
    std::uint32_t n = 0;
    /// Win condition spec ("K3", "kfactor:4", ...); empty keeps the setup's.
    std::string win;
    std::uint32_t b = 1;
};

struct SweepPlan {
    GameSetup setup;
    std::vector<SweepCell> cells;
    std::uint64_t games = 1;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

/// Game g of cell c uses seed derive_seed(seed, c, g); results do not depend
/// on the thread count.
std::vector<SweepRecord> sweep(const SweepPlan& plan);

std::string sweep_csv_header();
std::string to_csv(const SweepRecord& r);
std::string sweep_csv(const std::vector<SweepRecord>& records);

struct ThresholdProbe {
    std::uint32_t b = 0;
    std::uint64_t maker_wins = 0;
    std::uint64_t games = 0;
    std::uint64_t faults = 0;
    /// Maker's share of the games that ended without a fault.
    double rate() const {
        const auto decided = games - faults;
        return decided == 0 ? 0.0 : static_cast<double>(maker_wins) / static_cast<double>(decided);
    }
};

struct ThresholdEstimate {
    std::uint32_t n = 0;
    std::string pattern;
    std::string maker;
    std::string breaker;
    /// Maker's win rate is >= crossing at lo and below it at hi.
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
    double crossing = 0.5;
    std::uint64_t probes = 0;
    std::uint64_t seed = 0;
    /// Bias where the win rate crosses the level, interpolated inside [lo, hi].
    double b_cross = 0;
    bool non_monotone = false;
    /// Maker loses even at b = 1, or wins even at the largest bias tried.
    bool below_range = false;
    bool above_range = false;
    std::vector<ThresholdProbe> samples;
};

struct ThresholdPlan {
    GameSetup setup;
    double crossing = 0.5;
    /// Games per probed bias.
    std::uint64_t probes = 16;
    std::uint64_t seed = 0;
    /// Initial bracket; hi = 0 means n (or the universe size for abstract boards).
    std::uint32_t lo = 1;
    std::uint32_t hi = 0;
    unsigned threads = 0;
};

/// Bisection on b. Probe games for bias b use derive_seed(seed, b, g).
ThresholdEstimate estimate_threshold(const ThresholdPlan& plan);

json to_json(const ThresholdEstimate& e);

struct ExponentFit {
    double slope = 0;
    double stderr_slope = 0;
    double intercept = 0;
    std::size_t points = 0;
};

/// Least squares of log b against log n. Needs >= 3 distinct n.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& n_and_b);
/// Uses each estimate's interpolated crossing.
ExponentFit fit_exponent(const std::vector<ThresholdEstimate>& estimates);

struct DiscrepancyReport {
    std::uint32_t n = 0;
    double p = 0;
    /// max_v |deg(v) - (n-1)p| / sqrt(np log n)
    double max_degree_dev = 0;
    Vertex worst_vertex = 0;
    /// max over sampled disjoint X, Y of |e(X,Y) - |X||Y|p| / (|Y| sqrt(|X| p log(n/|Y|)))
    double max_pair_dev = 0;
    /// max over sampled X of |e(X) - C(|X|,2)p| / (|X| sqrt(|X| p log(n/|X|)))
    double max_set_dev = 0;
    std::size_t samples = 0;
    double limit = 3.0;
    bool flagged = false;
};

DiscrepancyReport discrepancy_diagnostics(const Graph& g, double p, Rng& rng, std::size_t samples = 200,
                                          double limit = 3.0);

}  // namespace mbg
