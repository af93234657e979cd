#pragma once
// Game engine for biased Maker-Breaker games on static and dynamic boards.
//
// A round is one Maker move followed by one Breaker move. In a static game
// Maker claims up to m elements; in a dynamic game she either claims up to m
// visible elements (option a) or reveals hidden elements (option b), and is
// forced to reveal when nothing visible is left to claim. Breaker then
// claims up to b visible elements. An illegal move loses immediately.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbg/board.hpp"
#include "mbg/winsets.hpp"

namespace mbg {

using json = nlohmann::json;

struct Move {
    enum class Kind : std::uint8_t { Claim, Reveal };
    Kind kind = Kind::Claim;
    std::vector<ElementId> elements;

    static Move claim(std::vector<ElementId> e) { return {Kind::Claim, std::move(e)}; }
    static Move reveal(std::vector<ElementId> e) { return {Kind::Reveal, std::move(e)}; }
    static Move pass() { return {Kind::Claim, {}}; }
    friend bool operator==(const Move&, const Move&) = default;
};

std::string_view to_string(Move::Kind k);

/// What Maker is trying to build.
struct WinCondition {
    enum class Kind { Family, Pattern, KFactor, KVertex };
    Kind kind = Kind::Family;
    /// Spec string as given ("K3", "kfactor:4", "kvertex:0:4", "family").
    std::string spec;
    FamilyPtr family;
    PatternGraph pattern;
    std::uint32_t r = 0;
    Vertex v = 0;
};

/// Parses "K3" / "H=K3" / "pattern:<name>", "kfactor:<r>", "kvertex:<v>:<r>".
/// Pattern conditions are materialised as the family of H-copies in K_n.
WinCondition parse_win_condition(const std::string& spec, std::uint32_t n, const FamilyLimits& limits = {});
WinCondition family_win_condition(FamilyPtr family);

struct GameConfig {
    /// Vertex count of a graph board; 0 for an abstract board.
    std::uint32_t n = 0;
    /// Abstract board size (ignored for graph boards).
    std::uint32_t universe = 0;
    std::uint32_t maker_bias = 1;
    std::uint32_t breaker_bias = 1;
    bool dynamic = false;
    std::string win;
    /// Explicit winning family (abstract boards, or overriding `win`).
    FamilyPtr family;
    /// 0 selects the default: universe size for static games, twice that for dynamic ones.
    std::uint64_t max_rounds = 0;
    std::uint64_t seed = 0;
    /// Keep playing after Maker has won (for counting fully claimed sets).
    bool play_to_end = false;
    /// Stop as soon as Maker can no longer win.
    bool early_stop = false;
    std::string maker_spec;
    std::string breaker_spec;

    std::uint32_t board_size() const;
    std::uint64_t round_cap() const;
    Board make_board() const;
};

struct GameView {
    const Board& board;
    const GameConfig& config;
    std::uint64_t round;
};

class MakerStrategy {
public:
    virtual ~MakerStrategy() = default;
    virtual Move next(const GameView& view) = 0;
    virtual std::string name() const = 0;
    virtual json info() const { return json::object(); }
};

class BreakerStrategy {
public:
    virtual ~BreakerStrategy() = default;
    /// Called after Maker's move has been applied.
    virtual void observe(const GameView&, const Move&) {}
    /// Potential of the position after Maker's move, for strategies that track one.
    virtual std::optional<double> potential(const GameView&) { return std::nullopt; }
    /// Up to `budget` distinct open elements.
    virtual std::vector<ElementId> respond(const GameView& view, std::uint32_t budget) = 0;
    virtual std::string name() const = 0;
    virtual json info() const { return json::object(); }
};

/// Incremental win/loss bookkeeping for a win condition.
class WinTracker {
public:
    WinTracker(const WinCondition& win, const Board& board);
    ~WinTracker();
    WinTracker(WinTracker&&) noexcept;

    void on_claim(const Board& board, ElementId e, Player p);
    bool maker_won() const { return won_; }
    /// False once no Maker win is reachable (conservative: true when unsure).
    bool maker_can_win(const Board& board);
    /// Winning sets fully owned by Maker (family modes), or 1/0 for predicates.
    std::uint64_t fully_claimed() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    bool won_ = false;
};

struct MoveRecord {
    std::uint64_t round = 0;
    Player player = Player::Maker;
    Move move;
};

struct Fault {
    Player player = Player::Maker;
    std::uint64_t round = 0;
    std::string reason;
};

struct GameResult {
    Player winner = Player::Breaker;
    std::optional<Fault> fault;
    std::uint64_t fully_claimed = 0;
    std::uint64_t rounds = 0;
    std::string end_reason;
    std::vector<ElementId> maker_elements;
    std::vector<ElementId> breaker_elements;
    /// Breaker's potential after each Maker move (potential strategies only).
    std::vector<double> potentials;
};

struct Transcript {
    GameConfig config;
    std::vector<MoveRecord> moves;
    GameResult result;
    json maker_info = json::object();
    json breaker_info = json::object();
};

struct GameHooks {
    /// After Maker's move is applied and Breaker has observed it.
    std::function<void(const GameView&, const Move&)> after_maker;
    /// After Breaker's move.
    std::function<void(const GameView&)> after_round;
};

/// Legality of a move in the current position; a reason when illegal.
std::optional<std::string> check_maker_move(const Board& board, const GameConfig& config, const Move& move);
std::optional<std::string> check_breaker_move(const Board& board, const GameConfig& config,
                                              const std::vector<ElementId>& elements);

Transcript run_game(const GameConfig& config, MakerStrategy& maker, BreakerStrategy& breaker,
                    const GameHooks& hooks = {});
/// Same, reusing an already built win condition.
Transcript run_game(const GameConfig& config, const WinCondition& win, MakerStrategy& maker, BreakerStrategy& breaker,
                    const GameHooks& hooks = {});

/// Win condition a config describes.
WinCondition resolve_win_condition(const GameConfig& config);

json to_json(const GameConfig& c);
GameConfig config_from_json(const json& j);
json to_json(const Transcript& t);
/// Throws ParseError naming the offending move index.
Transcript transcript_from_json(const json& j);

struct ReplayReport {
    bool consistent = false;
    std::optional<std::uint64_t> divergence_round;
    std::string message;
};

/// Re-executes every move, checking legality and the recorded outcome.
ReplayReport replay(const Transcript& t);

/// Interleaves Maker strategies by round. Each sub-strategy sees the real
/// board at its turns, so Breaker's claims since its previous turn arrive
/// as one batch of up to k*b elements.
class MultiplexMaker : public MakerStrategy {
public:
    using Schedule = std::function<std::size_t(std::uint64_t round)>;
    MultiplexMaker(std::vector<std::unique_ptr<MakerStrategy>> subs, Schedule schedule = {});

    Move next(const GameView& view) override;
    std::string name() const override;
    json info() const override;

    /// Breaker claims each sub-strategy saw between consecutive turns.
    const std::vector<std::vector<std::size_t>>& observed_batches() const { return batches_; }
    /// Elements claimed through each sub-strategy.
    const std::vector<std::vector<ElementId>>& claims() const { return claims_; }

private:
    std::vector<std::unique_ptr<MakerStrategy>> subs_;
    Schedule schedule_;
    std::vector<std::size_t> last_breaker_count_;
    std::vector<bool> started_;
    std::vector<std::vector<std::size_t>> batches_;
    std::vector<std::vector<ElementId>> claims_;
};

}  // namespace mbg
