// mbg: command-line front end for the Maker-Breaker toolkit.
//
// Exit codes: 0 success, 1 domain error (no factor, divergent replay, bad
// board), 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "mbg/engine.hpp"
#include "mbg/errors.hpp"
#include "mbg/experiments.hpp"
#include "mbg/strategy_spec.hpp"
#include "mbg/structures.hpp"

using namespace mbg;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Write-temp-then-rename so readers never see a torn file.
void write_atomic(const std::string& path, const std::string& data) {
    const std::string tmp = path + ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out << data;
        out.flush();
        if (!out) throw Error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<std::uint32_t> parse_list(const std::string& text, const char* what) {
    // "1,2,5" or "1:10" or "1:20:3"
    std::vector<std::uint32_t> out;
    std::stringstream ss(text);
    std::string part;
    auto num = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const auto v = std::stoul(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return static_cast<std::uint32_t>(v);
        } catch (const std::exception&) {
            throw UsageError(std::string(what) + ": bad number \"" + s + "\"");
        }
    };
    while (std::getline(ss, part, ',')) {
        const auto c1 = part.find(':');
        if (c1 == std::string::npos) {
            out.push_back(num(part));
            continue;
        }
        const auto c2 = part.find(':', c1 + 1);
        const auto a = num(part.substr(0, c1));
        const auto b = num(part.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
        const auto step = c2 == std::string::npos ? 1u : num(part.substr(c2 + 1));
        if (step == 0 || b < a) throw UsageError(std::string(what) + ": bad range \"" + part + "\"");
        for (auto v = a; v <= b; v += step) out.push_back(v);
    }
    if (out.empty()) throw UsageError(std::string(what) + ": empty list");
    return out;
}

std::string winner_line(const Transcript& t) {
    std::string s = "winner: " + std::string(to_string(t.result.winner)) + " after " + std::to_string(t.result.rounds) +
                    " rounds (" + t.result.end_reason + ")";
    if (t.result.fault)
        s += "; fault by " + std::string(to_string(t.result.fault->player)) + ": " + t.result.fault->reason;
    return s;
}

// ---------------------------------------------------------------------------
// Human play

struct QuitRequested {};

std::string element_name(const Board& b, ElementId e) {
    if (!b.is_graph()) return std::to_string(e);
    const auto [u, v] = decode_pair(e, b.vertex_count());
    return std::to_string(u) + "-" + std::to_string(v);
}

void render(std::ostream& out, const Board& b) {
    out << "---- board: " << b.maker_count() << " Maker, " << b.breaker_count() << " Breaker, " << b.open_count()
        << " open";
    if (b.dynamic()) out << ", " << b.hidden_count() << " hidden";
    out << "\n";
    if (b.is_graph()) {
        const auto mg = b.maker_graph(), bg = b.breaker_graph();
        for (Vertex v = 0; v < b.vertex_count(); ++v) {
            if (mg.degree(v) == 0 && bg.degree(v) == 0) continue;
            out << "  " << v << ": M{";
            bool first = true;
            mg.neighbors(v).for_each([&](Vertex w) {
                out << (first ? "" : " ") << w;
                first = false;
            });
            out << "} B{";
            first = true;
            bg.neighbors(v).for_each([&](Vertex w) {
                out << (first ? "" : " ") << w;
                first = false;
            });
            out << "}\n";
        }
    }
    for (auto [st, label] : {std::pair{ClaimState::Maker, "Maker"}, std::pair{ClaimState::Breaker, "Breaker"}}) {
        out << "  " << label << ":";
        for (auto e : b.elements_of(st)) out << ' ' << element_name(b, e);
        out << "\n";
    }
}

std::optional<std::vector<ElementId>> read_elements(const Board& b, const std::string& line, std::string& why) {
    std::istringstream in(line);
    std::vector<long long> nums;
    long long x;
    while (in >> x) nums.push_back(x);
    if (!in.eof()) {
        why = "could not read numbers";
        return std::nullopt;
    }
    std::vector<ElementId> out;
    if (b.is_graph()) {
        if (nums.size() % 2 != 0) {
            why = "give edges as pairs \"u v\"";
            return std::nullopt;
        }
        for (std::size_t i = 0; i < nums.size(); i += 2) {
            const auto u = nums[i], v = nums[i + 1];
            if (u < 0 || v < 0 || u >= b.vertex_count() || v >= b.vertex_count() || u == v) {
                why = "no edge " + std::to_string(u) + "-" + std::to_string(v);
                return std::nullopt;
            }
            out.push_back(encode_pair(static_cast<Vertex>(u), static_cast<Vertex>(v), b.vertex_count()));
        }
    } else {
        for (auto v : nums) {
            if (v < 0 || v >= b.universe_size()) {
                why = "no element " + std::to_string(v);
                return std::nullopt;
            }
            out.push_back(static_cast<ElementId>(v));
        }
    }
    return out;
}

class HumanMaker : public MakerStrategy {
public:
    HumanMaker(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
    Move next(const GameView& view) override {
        while (true) {
            render(out_, view.board);
            out_ << "round " << view.round << ", Maker: claim up to " << view.config.maker_bias
                 << (view.board.dynamic() ? " (\"u v\", \"reveal u v ...\", \"reveal all\")" : " (\"u v\")")
                 << ", \"pass\" or \"quit\"\n> " << std::flush;
            std::string line;
            if (!std::getline(in_, line) || line == "quit") throw QuitRequested{};
            Move m;
            std::string why;
            if (line == "pass") {
                m = Move::pass();
            } else if (line.rfind("reveal", 0) == 0) {
                const auto rest = line.substr(6);
                if (rest.find("all") != std::string::npos) {
                    m = Move::reveal(view.board.hidden_elements());
                } else {
                    auto e = read_elements(view.board, rest, why);
                    if (!e) {
                        out_ << "rejected: " << why << "\n";
                        continue;
                    }
                    m = Move::reveal(*e);
                }
            } else {
                auto e = read_elements(view.board, line, why);
                if (!e) {
                    out_ << "rejected: " << why << "\n";
                    continue;
                }
                m = Move::claim(*e);
            }
            if (auto err = check_maker_move(view.board, view.config, m)) {
                out_ << "rejected: " << *err << "\n";
                continue;
            }
            return m;
        }
    }
    std::string name() const override { return "human"; }

private:
    std::istream& in_;
    std::ostream& out_;
};

class HumanBreaker : public BreakerStrategy {
public:
    HumanBreaker(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
    std::vector<ElementId> respond(const GameView& view, std::uint32_t budget) override {
        GameConfig cfg = view.config;
        cfg.breaker_bias = budget;
        while (true) {
            render(out_, view.board);
            out_ << "round " << view.round << ", Breaker: claim up to " << budget << " (\"u v u v ...\") or \"quit\"\n> "
                 << std::flush;
            std::string line;
            if (!std::getline(in_, line) || line == "quit") throw QuitRequested{};
            std::string why;
            auto e = read_elements(view.board, line, why);
            if (!e) {
                out_ << "rejected: " << why << "\n";
                continue;
            }
            if (auto err = check_breaker_move(view.board, cfg, *e)) {
                out_ << "rejected: " << *err << "\n";
                continue;
            }
            return *e;
        }
    }
    std::string name() const override { return "human"; }

private:
    std::istream& in_;
    std::ostream& out_;
};

/// Plays back recorded moves of one side, then hands over.
class ResumeMaker : public MakerStrategy {
public:
    ResumeMaker(std::vector<Move> moves, std::unique_ptr<MakerStrategy> inner)
        : moves_(std::move(moves)), inner_(std::move(inner)) {}
    Move next(const GameView& v) override { return pos_ < moves_.size() ? moves_[pos_++] : inner_->next(v); }
    std::string name() const override { return inner_->name(); }
    json info() const override { return inner_->info(); }

private:
    std::vector<Move> moves_;
    std::size_t pos_ = 0;
    std::unique_ptr<MakerStrategy> inner_;
};

class ResumeBreaker : public BreakerStrategy {
public:
    ResumeBreaker(std::vector<std::vector<ElementId>> moves, std::unique_ptr<BreakerStrategy> inner)
        : moves_(std::move(moves)), inner_(std::move(inner)) {}
    void observe(const GameView& v, const Move& m) override {
        if (pos_ >= moves_.size()) inner_->observe(v, m);
    }
    std::optional<double> potential(const GameView& v) override {
        return pos_ >= moves_.size() ? inner_->potential(v) : std::nullopt;
    }
    std::vector<ElementId> respond(const GameView& v, std::uint32_t budget) override {
        return pos_ < moves_.size() ? moves_[pos_++] : inner_->respond(v, budget);
    }
    std::string name() const override { return inner_->name(); }
    json info() const override { return inner_->info(); }

private:
    std::vector<std::vector<ElementId>> moves_;
    std::size_t pos_ = 0;
    std::unique_ptr<BreakerStrategy> inner_;
};

json moves_to_json(const std::vector<MoveRecord>& moves) {
    json arr = json::array();
    for (const auto& m : moves)
        arr.push_back({{"round", m.round},
                       {"player", std::string(to_string(m.player))},
                       {"kind", std::string(to_string(m.move.kind))},
                       {"elements", m.move.elements}});
    return arr;
}

// ---------------------------------------------------------------------------
// Subcommands

struct GameOptions {
    std::uint32_t n = 0;
    std::uint32_t universe = 0;
    std::string family_file;
    std::string win = "K3";
    std::uint32_t m = 1;
    std::uint32_t b = 1;
    bool dynamic = false;
    std::uint64_t max_rounds = 0;
    bool early_stop = false;
    bool play_to_end = false;
    std::string maker = "random(resample)";
    std::string breaker = "potential()";
    std::optional<std::uint64_t> seed;
};

void add_game_options(CLI::App* c, GameOptions& o, bool with_b) {
    c->add_option("--n", o.n, "vertices of the complete graph board");
    c->add_option("--universe", o.universe, "size of an abstract board (with --family)");
    c->add_option("--family", o.family_file, "JSON file with a list of winning sets (abstract board)");
    c->add_option("--win", o.win, "win condition: K3, pattern:C4, kfactor:4, kvertex:0:4");
    c->add_option("--m", o.m, "Maker bias");
    if (with_b) c->add_option("--b", o.b, "Breaker bias");
    c->add_flag("--dynamic", o.dynamic, "dynamic board (Maker reveals elements)");
    c->add_option("--max-rounds", o.max_rounds, "round cap (0: default)");
    c->add_flag("--early-stop", o.early_stop, "stop once Maker can no longer win");
    c->add_flag("--play-to-end", o.play_to_end, "keep playing after Maker wins");
    c->add_option("--maker", o.maker, "Maker strategy spec");
    c->add_option("--breaker", o.breaker, "Breaker strategy spec");
    c->add_option("--seed", o.seed, "seed (fresh entropy when omitted)");
}

GameConfig make_config(const GameOptions& o) {
    GameConfig c;
    c.n = o.n;
    c.universe = o.universe;
    c.maker_bias = o.m;
    c.breaker_bias = o.b;
    c.dynamic = o.dynamic;
    c.win = o.win;
    c.max_rounds = o.max_rounds;
    c.early_stop = o.early_stop;
    c.play_to_end = o.play_to_end;
    c.maker_spec = o.maker;
    c.breaker_spec = o.breaker;
    if (!o.family_file.empty()) {
        std::ifstream in(o.family_file);
        if (!in) throw UsageError("cannot open " + o.family_file);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ParseError(o.family_file + ": " + e.what());
        }
        const auto& sets = j.is_object() ? j.at("family") : j;
        std::vector<std::vector<ElementId>> v;
        try {
            v = sets.get<std::vector<std::vector<ElementId>>>();
        } catch (const json::exception& e) {
            throw ParseError(o.family_file + ": " + e.what());
        }
        if (c.n == 0 && c.universe == 0) {
            for (auto& s : v)
                for (auto e : s) c.universe = std::max(c.universe, e + 1);
        }
        c.family = std::make_shared<const WinningFamily>(c.board_size(), v);
        c.win = "family";
    }
    if (c.n == 0 && c.universe == 0) throw UsageError("give --n (graph board) or --family (abstract board)");
    return c;
}

std::string invocation(int argc, char** argv, std::uint64_t seed, bool had_seed) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        std::string a = argv[i];
        if (a.find_first_of(" ()") != std::string::npos) a = "'" + a + "'";
        s += (i ? " " : "") + a;
    }
    if (!had_seed) s += " --seed " + std::to_string(seed);
    return s;
}

int cmd_play(const GameOptions& o, const std::string& out_path, const std::string& human, const std::string& resume,
             const std::string& inv) {
    GameConfig cfg = make_config(o);
    cfg.seed = *o.seed;
    std::vector<Move> maker_moves;
    std::vector<std::vector<ElementId>> breaker_moves;
    if (!resume.empty()) {
        std::ifstream in(resume);
        if (!in) throw UsageError("cannot open " + resume);
        json j;
        try {
            in >> j;
            for (const auto& m : j.at("moves")) {
                auto elems = m.at("elements").get<std::vector<ElementId>>();
                if (m.at("player") == "maker")
                    maker_moves.push_back(m.at("kind") == "reveal" ? Move::reveal(elems) : Move::claim(elems));
                else
                    breaker_moves.push_back(elems);
            }
        } catch (const json::exception& e) {
            throw ParseError(resume + ": " + e.what());
        }
        std::cout << "resuming after " << maker_moves.size() << " recorded rounds\n";
    }
    const WinCondition win = resolve_win_condition(cfg);
    std::unique_ptr<MakerStrategy> maker;
    std::unique_ptr<BreakerStrategy> breaker;
    if (human == "maker") maker = std::make_unique<HumanMaker>(std::cin, std::cout);
    else maker = make_maker(o.maker, cfg, win, derive_seed(cfg.seed, 1));
    if (human == "breaker") breaker = std::make_unique<HumanBreaker>(std::cin, std::cout);
    else breaker = make_breaker(o.breaker, cfg, win, derive_seed(cfg.seed, 2));
    if (!human.empty() && human != "maker" && human != "breaker") throw UsageError("--human takes maker or breaker");
    if (human == "maker") cfg.maker_spec = "human";
    if (human == "breaker") cfg.breaker_spec = "human";
    if (!resume.empty()) {
        maker = std::make_unique<ResumeMaker>(std::move(maker_moves), std::move(maker));
        breaker = std::make_unique<ResumeBreaker>(std::move(breaker_moves), std::move(breaker));
    }

    // Shadow log so a human can stop and resume later.
    std::vector<MoveRecord> log;
    std::size_t seen = 0;
    GameHooks hooks;
    hooks.after_maker = [&](const GameView& v, const Move& m) {
        log.push_back({v.round, Player::Maker, m});
        seen = v.board.history().size();
    };
    hooks.after_round = [&](const GameView& v) {
        std::vector<ElementId> mine;
        const auto h = v.board.history();
        for (; seen < h.size(); ++seen) mine.push_back(h[seen].element);
        log.push_back({v.round, Player::Breaker, Move::claim(mine)});
    };
    Transcript t;
    try {
        t = run_game(cfg, win, *maker, *breaker, hooks);
    } catch (const QuitRequested&) {
        json partial{{"config", to_json(cfg)}, {"seed", cfg.seed}, {"moves", moves_to_json(log)}, {"partial", true}};
        const std::string path = out_path.empty() ? "partial.json" : out_path;
        write_atomic(path, partial.dump(1) + "\n");
        std::cout << "stopped; partial transcript written to " << path << " (resume with --resume " << path << ")\n";
        return 0;
    }
    t.maker_info = maker->info();
    t.breaker_info = breaker->info();
    json j = to_json(t);
    j["invocation"] = inv;
    const std::string path = out_path.empty() ? "transcript.json" : out_path;
    write_atomic(path, j.dump(1) + "\n");
    std::cout << "seed: " << cfg.seed << "\n" << winner_line(t) << "\ntranscript: " << path << "\n";
    return 0;
}

int cmd_replay(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    const auto t = transcript_from_json(j);
    const auto rep = replay(t);
    std::cout << rep.message << "\n";
    return rep.consistent ? 0 : 1;
}

int cmd_verify_factor(const std::string& path, std::uint32_t r, std::uint64_t budget, const std::string& out) {
    const Graph g = read_edge_list_file(path);
    const auto res = has_kr_factor(g, r, budget);
    json j{{"status", std::string(to_string(res.status))}, {"n", g.vertex_count()}, {"r", r}, {"nodes", res.nodes}};
    if (res.certificate) j["certificate"] = res.certificate->blocks;
    if (!out.empty()) write_atomic(out, j.dump(1) + "\n");
    switch (res.status) {
    case FactorStatus::Found:
        std::cout << "K_" << r << "-factor found\n";
        for (const auto& blk : res.certificate->blocks) {
            for (std::size_t i = 0; i < blk.size(); ++i) std::cout << (i ? " " : "") << blk[i];
            std::cout << "\n";
        }
        return 0;
    case FactorStatus::Divisibility:
        std::cerr << "error: " << g.vertex_count() << " vertices are not divisible by r = " << r << "\n";
        return 1;
    case FactorStatus::Budget:
        std::cerr << "error: search budget exhausted after " << res.nodes << " nodes\n";
        return 1;
    case FactorStatus::None:
        break;
    }
    std::cout << "no K_" << r << "-factor\n";
    return 1;
}

Graph load_or_sample(const std::string& path, std::uint32_t n, double p, Rng& rng) {
    if (!path.empty()) return read_edge_list_file(path);
    if (n == 0) throw UsageError("give --graph or --n with --p");
    return random_graph(n, p, rng);
}

json to_json(const PropertyReport& r) { return {{"status", std::string(to_string(r.status))}, {"detail", r.detail}}; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mbg: biased Maker-Breaker games on static and dynamic boards"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    GameOptions play;
    std::string play_out, human, resume;
    auto* c_play = app.add_subcommand("play", "play one game and write its transcript");
    add_game_options(c_play, play, true);
    c_play->add_option("--out", play_out, "transcript path (default transcript.json)");
    c_play->add_option("--human", human, "play one side yourself: maker or breaker");
    c_play->add_option("--resume", resume, "continue from a (partial) transcript");

    GameOptions sw;
    std::string sw_n, sw_b, sw_win_list, sw_out;
    std::uint64_t sw_games = 20;
    unsigned threads = 0;
    auto* c_sweep = app.add_subcommand("sweep", "win rates over a grid of n and b (CSV)");
    add_game_options(c_sweep, sw, false);
    c_sweep->add_option("--ns", sw_n, "list of n, e.g. 20,40 or 10:50:10");
    c_sweep->add_option("--bs", sw_b, "list of b, e.g. 1:10")->required();
    c_sweep->add_option("--wins", sw_win_list, "several win conditions separated by ';'");
    c_sweep->add_option("--games", sw_games, "games per cell");
    c_sweep->add_option("--threads", threads, "worker threads (default MBG_THREADS or all cores)");
    c_sweep->add_option("--out", sw_out, "CSV path (stdout when omitted)");

    GameOptions th;
    std::uint64_t probes = 16;
    double crossing = 0.5;
    std::uint32_t th_lo = 1, th_hi = 0;
    std::string th_out;
    auto* c_th = app.add_subcommand("threshold", "estimate the threshold bias by bisection (JSON)");
    add_game_options(c_th, th, false);
    c_th->add_option("--probes", probes, "games per probed bias");
    c_th->add_option("--crossing", crossing, "Maker win-rate level that defines the threshold");
    c_th->add_option("--lo", th_lo, "lower end of the initial bracket");
    c_th->add_option("--hi", th_hi, "upper end of the initial bracket (default n)");
    c_th->add_option("--threads", threads, "worker threads");
    c_th->add_option("--out", th_out, "JSON path (stdout when omitted)");

    std::string vf_graph, vf_out;
    std::uint32_t vf_r = 3;
    std::uint64_t vf_budget = 0;
    auto* c_vf = app.add_subcommand("verify-factor", "search for a K_r-factor and print a certificate");
    c_vf->add_option("--graph", vf_graph, "edge list file: header \"n m\", then m lines \"u v\"")->required();
    c_vf->add_option("--r", vf_r, "clique size")->required();
    c_vf->add_option("--budget", vf_budget, "search node budget (0: unlimited)");
    c_vf->add_option("--out", vf_out, "also write the result as JSON");

    std::string cn_graph, cn_out;
    std::uint32_t cn_n = 0;
    double cn_gp = 0.5;
    NeatParams neat;
    std::optional<std::uint64_t> cn_seed;
    auto* c_cn = app.add_subcommand("check-neat", "sampled checks of the neat-graph properties");
    c_cn->add_option("--graph", cn_graph, "edge list file");
    c_cn->add_option("--n", cn_n, "sample G(n, gnp-p) instead of reading a file");
    c_cn->add_option("--gnp-p", cn_gp, "edge probability for the sampled graph");
    c_cn->add_option("--alpha", neat.alpha);
    c_cn->add_option("--beta", neat.beta);
    c_cn->add_option("--p", neat.p, "density parameter of the properties");
    c_cn->add_option("--r", neat.r);
    c_cn->add_option("--trials", neat.trials);
    c_cn->add_option("--seed", cn_seed);
    c_cn->add_option("--out", cn_out, "JSON path (stdout when omitted)");

    std::string rp_path;
    auto* c_rp = app.add_subcommand("replay", "re-execute a transcript and check it");
    c_rp->add_option("--transcript", rp_path, "transcript JSON")->required();

    std::string dg_graph, dg_out;
    std::uint32_t dg_n = 0;
    double dg_p = 0.5;
    std::size_t dg_samples = 200;
    std::optional<std::uint64_t> dg_seed;
    auto* c_dg = app.add_subcommand("diagnose", "degree and edge-distribution discrepancy of a graph");
    c_dg->add_option("--graph", dg_graph, "edge list file");
    c_dg->add_option("--n", dg_n, "sample G(n, p) instead of reading a file");
    c_dg->add_option("--p", dg_p, "edge probability to compare against");
    c_dg->add_option("--samples", dg_samples, "sampled (X, Y) pairs");
    c_dg->add_option("--seed", dg_seed);
    c_dg->add_option("--out", dg_out, "JSON path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*c_play) {
            const bool had = play.seed.has_value();
            if (!had) play.seed = fresh_seed();
            return cmd_play(play, play_out, human, resume, invocation(argc, argv, *play.seed, had));
        }
        if (*c_sweep) {
            const bool had = sw.seed.has_value();
            if (!had) sw.seed = fresh_seed();
            std::cerr << "seed: " << *sw.seed << "\n";
            std::vector<std::uint32_t> ns = sw_n.empty() ? std::vector<std::uint32_t>{sw.n} : parse_list(sw_n, "--ns");
            if (sw.n == 0 && sw.family_file.empty() && !ns.empty()) sw.n = ns.front();
            SweepPlan plan;
            plan.setup.base = make_config(sw);
            plan.setup.maker = sw.maker;
            plan.setup.breaker = sw.breaker;
            plan.games = sw_games;
            plan.seed = *sw.seed;
            plan.threads = threads;
            std::vector<std::string> wins;
            std::stringstream ws(sw_win_list);
            for (std::string w; std::getline(ws, w, ';');)
                if (!w.empty()) wins.push_back(w);
            if (wins.empty()) wins.push_back("");
            for (auto n : ns)
                for (const auto& w : wins)
                    for (auto b : parse_list(sw_b, "--bs")) plan.cells.push_back({n, w, b});
            const auto csv = sweep_csv(sweep(plan));
            if (sw_out.empty()) std::cout << csv;
            else write_atomic(sw_out, csv);
            return 0;
        }
        if (*c_th) {
            if (!th.seed) th.seed = fresh_seed();
            ThresholdPlan plan;
            plan.setup.base = make_config(th);
            plan.setup.maker = th.maker;
            plan.setup.breaker = th.breaker;
            plan.probes = probes;
            plan.crossing = crossing;
            plan.seed = *th.seed;
            plan.lo = th_lo;
            plan.hi = th_hi;
            plan.threads = threads;
            const auto est = estimate_threshold(plan);
            const auto text = to_json(est).dump(1) + "\n";
            if (est.non_monotone) std::cerr << "warning: win rate not monotone in b; interval widened\n";
            if (th_out.empty()) std::cout << text;
            else write_atomic(th_out, text);
            return 0;
        }
        if (*c_vf) return cmd_verify_factor(vf_graph, vf_r, vf_budget, vf_out);
        if (*c_rp) return cmd_replay(rp_path);
        if (*c_cn) {
            const std::uint64_t seed = cn_seed ? *cn_seed : fresh_seed();
            Rng rng(seed);
            const Graph g = load_or_sample(cn_graph, cn_n, cn_gp, rng);
            const auto rep = neat_check(g, neat, rng);
            json j{{"seed", seed},
                   {"n", g.vertex_count()},
                   {"p1_degree", to_json(rep.p1_degree)},
                   {"p1_expansion", to_json(rep.p1_expansion)},
                   {"p2", to_json(rep.p2)},
                   {"p3", to_json(rep.p3)},
                   {"warnings", rep.warnings}};
            if (cn_out.empty()) std::cout << j.dump(1) << "\n";
            else write_atomic(cn_out, j.dump(1) + "\n");
            return 0;
        }
        if (*c_dg) {
            const std::uint64_t seed = dg_seed ? *dg_seed : fresh_seed();
            Rng rng(seed);
            const Graph g = load_or_sample(dg_graph, dg_n, dg_p, rng);
            const auto rep = discrepancy_diagnostics(g, dg_p, rng, dg_samples);
            json j{{"seed", seed},
                   {"n", rep.n},
                   {"p", rep.p},
                   {"max_degree_dev", rep.max_degree_dev},
                   {"worst_vertex", rep.worst_vertex},
                   {"max_pair_dev", rep.max_pair_dev},
                   {"max_set_dev", rep.max_set_dev},
                   {"samples", rep.samples},
                   {"limit", rep.limit},
                   {"flagged", rep.flagged}};
            if (dg_out.empty()) std::cout << j.dump(1) << "\n";
            else write_atomic(dg_out, j.dump(1) + "\n");
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
