#include "mbg/strategy_spec.hpp"

#include <cctype>
#include <fstream>
#include <set>

#include "mbg/breaker.hpp"
#include "mbg/errors.hpp"
#include "mbg/isolation.hpp"
#include "mbg/maker.hpp"
#include "mbg/potential.hpp"
#include "mbg/rng.hpp"

namespace mbg {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::uint32_t to_u32(const StrategySpec& s, const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const auto v = std::stoul(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
        throw ParseError(s.name + ": " + key + " expects a non-negative integer, got \"" + value + "\"");
    }
}

double to_double(const StrategySpec& s, const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError(s.name + ": " + key + " expects a number, got \"" + value + "\"");
    }
}

void allow_keys(const StrategySpec& s, std::initializer_list<const char*> keys, std::size_t max_positional = 0) {
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : s.named)
        if (!ok.count(k)) throw ParseError(s.name + ": unknown argument \"" + k + "\"");
    if (s.positional.size() > max_positional) throw ParseError(s.name + ": too many arguments");
}

std::uint32_t require_graph(const GameConfig& c, const std::string& who) {
    if (c.n == 0) throw Unsupported(who + " needs a graph board");
    return c.n;
}

std::unique_ptr<MakerStrategy> build_maker(const StrategySpec& s, const GameConfig& c, const WinCondition& win,
                                           std::uint64_t seed) {
    if (s.name == "random") {
        allow_keys(s, {"mode", "reveal"}, 1);
        const auto mode = s.positional.empty() ? s.get("mode", "resample") : s.positional[0];
        if (mode == "resample") return std::make_unique<RandomMaker>(RandomMode::Resample, seed);
        if (mode == "forfeit") return std::make_unique<RandomMaker>(RandomMode::Forfeit, seed);
        throw ParseError("random: mode must be resample or forfeit");
    }
    if (s.name == "greedy") {
        allow_keys(s, {"r", "reveal"});
        require_graph(c, "greedy");
        std::uint32_t r = 3;
        if (s.named.count("r")) r = to_u32(s, "r", s.named.at("r"));
        else if (win.r >= 2) r = win.r;
        else if (win.kind == WinCondition::Kind::Pattern) r = win.pattern.vertex_count();
        return std::make_unique<GreedyCliqueMaker>(r);
    }
    if (s.name == "atvertex") {
        allow_keys(s, {"v", "r", "reveal"});
        const auto n = require_graph(c, "atvertex");
        const Vertex v = to_u32(s, "v", s.get("v", std::to_string(win.kind == WinCondition::Kind::KVertex ? win.v : 0)));
        const std::uint32_t r = to_u32(s, "r", s.get("r", std::to_string(win.r >= 2 ? win.r : 4)));
        if (v >= n) throw ParseError("atvertex: v out of range");
        return std::make_unique<GreedyAtVertexMaker>(v, r);
    }
    if (s.name == "script") {
        allow_keys(s, {"file", "reveal"}, 1);
        const auto path = s.positional.empty() ? s.get("file", "") : s.positional[0];
        if (path.empty()) throw ParseError("script: needs a file");
        std::ifstream in(path);
        if (!in) throw ParseError("script: cannot open " + path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ParseError("script: " + path + ": " + e.what());
        }
        return std::make_unique<ScriptedMaker>(ScriptedMaker::from_json(j));
    }
    if (s.name == "greedyfamily") {
        allow_keys(s, {"reveal"});
        if (!win.family) throw Unsupported("greedyfamily needs a family or pattern win condition");
        return std::make_unique<GreedyFamilyMaker>(win.family);
    }
    if (s.name == "multiplex") {
        allow_keys(s, {"reveal"}, 64);
        if (s.positional.empty()) throw ParseError("multiplex: needs at least one strategy");
        std::vector<std::unique_ptr<MakerStrategy>> subs;
        for (std::size_t i = 0; i < s.positional.size(); ++i)
            subs.push_back(build_maker(parse_strategy_spec(s.positional[i]), c, win, derive_seed(seed, 100 + i)));
        return std::make_unique<MultiplexMaker>(std::move(subs));
    }
    throw ParseError("unknown Maker strategy \"" + s.name + "\"");
}

}  // namespace

std::string StrategySpec::get(const std::string& key, const std::string& fallback) const {
    auto it = named.find(key);
    return it == named.end() ? fallback : it->second;
}

StrategySpec parse_strategy_spec(const std::string& text) {
    StrategySpec s;
    const std::string t = trim(text);
    const auto open = t.find('(');
    if (open == std::string::npos) {
        s.name = t;
    } else {
        if (t.back() != ')') throw ParseError("strategy spec \"" + t + "\": missing closing parenthesis");
        s.name = trim(t.substr(0, open));
        const std::string body = t.substr(open + 1, t.size() - open - 2);
        int depth = 0;
        std::string cur;
        std::vector<std::string> parts;
        for (char ch : body) {
            if (ch == '(') ++depth;
            if (ch == ')' && --depth < 0) throw ParseError("strategy spec \"" + t + "\": unbalanced parentheses");
            if (ch == ',' && depth == 0) {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (depth != 0) throw ParseError("strategy spec \"" + t + "\": unbalanced parentheses");
        if (!trim(cur).empty() || !parts.empty()) parts.push_back(cur);
        for (auto& p : parts) {
            p = trim(p);
            if (p.empty()) throw ParseError("strategy spec \"" + t + "\": empty argument");
            const auto eq = p.find('=');
            const auto paren = p.find('(');
            if (eq != std::string::npos && (paren == std::string::npos || eq < paren)) {
                const auto key = trim(p.substr(0, eq));
                if (key.empty()) throw ParseError("strategy spec \"" + t + "\": empty argument name");
                if (!s.named.emplace(key, trim(p.substr(eq + 1))).second)
                    throw ParseError("strategy spec \"" + t + "\": duplicate argument " + key);
            } else {
                s.positional.push_back(p);
            }
        }
    }
    if (s.name.empty()) throw ParseError("empty strategy spec");
    for (char ch : s.name)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-')
            throw ParseError("strategy spec \"" + t + "\": bad name");
    return s;
}

std::unique_ptr<MakerStrategy> make_maker(const std::string& spec, const GameConfig& config, const WinCondition& win,
                                          std::uint64_t seed) {
    const auto s = parse_strategy_spec(spec);
    auto maker = build_maker(s, config, win, seed);
    if (config.dynamic) {
        const auto chunk = s.named.count("reveal") && s.named.at("reveal") != "all"
                               ? to_u32(s, "reveal", s.named.at("reveal"))
                               : 0u;
        maker = std::make_unique<DynamicRevealMaker>(std::move(maker), chunk, derive_seed(seed, 7));
    }
    return maker;
}

std::unique_ptr<BreakerStrategy> make_breaker(const std::string& spec, const GameConfig& c, const WinCondition& win,
                                              std::uint64_t seed) {
    const auto s = parse_strategy_spec(spec);
    if (s.name == "potential") {
        allow_keys(s, {"H", "q"});
        FamilyPtr fam;
        if (s.named.count("H")) fam = parse_win_condition("H=" + s.named.at("H"), require_graph(c, "potential(H=..)")).family;
        else fam = win.family;
        if (!fam) throw Unsupported("potential: this win condition has no family; pass H=");
        const double q = s.named.count("q") ? to_double(s, "q", s.named.at("q")) : c.breaker_bias;
        return std::make_unique<PotentialBreaker>(fam, static_cast<double>(c.maker_bias), q);
    }
    if (s.name == "dynamicH") {
        allow_keys(s, {"H", "delta", "tcluster"});
        const auto n = require_graph(c, "dynamicH");
        PatternGraph h;
        if (s.named.count("H")) h = parse_pattern(s.named.at("H"));
        else if (win.kind == WinCondition::Kind::Pattern) h = win.pattern;
        else throw Unsupported("dynamicH: pass H= for this win condition");
        const double delta = to_double(s, "delta", s.get("delta", "0.5"));
        const auto tc = to_u32(s, "tcluster", s.get("tcluster", "3"));
        return std::make_unique<DynamicHBreaker>(h, n, c.breaker_bias,
                                                 FanPreventionConfig::for_bias(c.breaker_bias, delta, tc));
    }
    if (s.name == "isolate") {
        allow_keys(s, {"v", "r", "delta", "tcluster"});
        const auto n = require_graph(c, "isolate");
        const Vertex v = to_u32(s, "v", s.get("v", std::to_string(win.kind == WinCondition::Kind::KVertex ? win.v : 0)));
        const auto r = to_u32(s, "r", s.get("r", std::to_string(win.r >= 2 ? win.r : 4)));
        if (v >= n) throw ParseError("isolate: v out of range");
        const double delta = to_double(s, "delta", s.get("delta", "0.5"));
        const auto tc = to_u32(s, "tcluster", s.get("tcluster", "3"));
        FanPreventionConfig cfg;
        cfg.delta = delta;
        cfg.t_cluster = tc;
        return std::make_unique<IsolationBreaker>(v, r, n, c.breaker_bias, seed, cfg);
    }
    if (s.name == "random") {
        allow_keys(s, {});
        return std::make_unique<RandomBreaker>(seed);
    }
    if (s.name == "null") {
        allow_keys(s, {});
        return std::make_unique<NullBreaker>();
    }
    throw ParseError("unknown Breaker strategy \"" + s.name + "\"");
}

}  // namespace mbg
