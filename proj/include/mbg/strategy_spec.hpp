#pragma once
// Strategy construction from spec strings such as "greedy(r=4)",
// "atvertex(v=0,r=4)", "potential(H=K3)" or "multiplex(random,greedy(r=3))".

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mbg/engine.hpp"

namespace mbg {

struct StrategySpec {
    std::string name;
    std::vector<std::string> positional;
    std::map<std::string, std::string> named;

    /// Named value, or `fallback` when absent.
    std::string get(const std::string& key, const std::string& fallback) const;
};

/// Parses "name", "name()" or "name(a, k=v, nested(x=1))". Commas inside
/// nested parentheses do not split arguments. Throws ParseError.
StrategySpec parse_strategy_spec(const std::string& text);

/// Maker names: random(resample|forfeit), greedy(r=..), atvertex(v=..,r=..),
/// script(path.json), greedyfamily, multiplex(spec, spec, ...).
/// Every Maker also accepts reveal=K: on dynamic boards it reveals K random
/// hidden elements whenever nothing is open (all of them by default).
std::unique_ptr<MakerStrategy> make_maker(const std::string& spec, const GameConfig& config, const WinCondition& win,
                                          std::uint64_t seed);

/// Breaker names: potential(H=..), dynamicH(H=..,delta=..,tcluster=..),
/// isolate(v=..,r=..), random, null. potential() without H uses the game's
/// winning family.
std::unique_ptr<BreakerStrategy> make_breaker(const std::string& spec, const GameConfig& config,
                                              const WinCondition& win, std::uint64_t seed);

}  // namespace mbg
