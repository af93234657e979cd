#include "mbg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "mbg/errors.hpp"
#include "mbg/kernels.hpp"
#include "mbg/strategy_spec.hpp"

namespace mbg {

unsigned default_threads() {
    if (const char* env = std::getenv("MBG_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) return static_cast<unsigned>(t);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

/// Runs fn(i) for i in [0, count) on `threads` workers.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& fn) {
    if (threads == 0) threads = default_threads();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::uint32_t pattern_r(const WinCondition& w) {
    if (w.r > 0) return w.r;
    if (w.kind == WinCondition::Kind::Pattern) return w.pattern.vertex_count();
    return 0;
}

}  // namespace

GameOutcome play_one(const GameSetup& setup, const WinCondition& win, std::uint32_t b, std::uint64_t seed) {
    GameConfig cfg = setup.base;
    cfg.breaker_bias = b;
    cfg.seed = seed;
    cfg.maker_spec = setup.maker;
    cfg.breaker_spec = setup.breaker;
    GameOutcome out;
    try {
        auto maker = make_maker(setup.maker, cfg, win, derive_seed(seed, 1));
        auto breaker = make_breaker(setup.breaker, cfg, win, derive_seed(seed, 2));
        const auto t = run_game(cfg, win, *maker, *breaker);
        out.rounds = t.result.rounds;
        out.winner = t.result.winner;
        if (t.result.fault) {
            out.fault = true;
            out.fault_reason = t.result.fault->reason;
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Unsupported&) {
        throw;
    } catch (const std::exception& e) {
        out.fault = true;
        out.fault_reason = e.what();
    }
    return out;
}

std::vector<SweepRecord> sweep(const SweepPlan& plan) {
    if (plan.cells.empty()) throw PreconditionFault("sweep needs at least one cell");
    std::vector<WinCondition> wins;
    std::vector<GameSetup> setups;
    for (const auto& cell : plan.cells) {
        GameSetup s = plan.setup;
        if (cell.n > 0) s.base.n = cell.n;
        if (!cell.win.empty()) {
            s.base.win = cell.win;
            s.base.family.reset();
        }
        wins.push_back(resolve_win_condition(s.base));
        setups.push_back(std::move(s));
    }
    const std::size_t total = plan.cells.size() * plan.games;
    std::vector<GameOutcome> outcomes(total);
    parallel_for(total, plan.threads, [&](std::size_t i) {
        const std::size_t c = i / plan.games, g = i % plan.games;
        outcomes[i] = play_one(setups[c], wins[c], plan.cells[c].b, derive_seed(plan.seed, c, g));
    });
    std::vector<SweepRecord> out;
    for (std::size_t c = 0; c < plan.cells.size(); ++c) {
        SweepRecord r;
        r.n = setups[c].base.n;
        r.r = pattern_r(wins[c]);
        r.pattern = wins[c].spec;
        r.b = plan.cells[c].b;
        r.games = plan.games;
        r.seed = plan.seed;
        std::uint64_t rounds = 0;
        for (std::size_t g = 0; g < plan.games; ++g) {
            const auto& o = outcomes[c * plan.games + g];
            rounds += o.rounds;
            if (o.fault) {
                ++r.faults;
                if (r.first_fault.empty()) r.first_fault = o.fault_reason;
            } else if (o.winner == Player::Maker) {
                ++r.maker_wins;
            } else {
                ++r.breaker_wins;
            }
        }
        r.mean_rounds = plan.games ? static_cast<double>(rounds) / static_cast<double>(plan.games) : 0.0;
        out.push_back(std::move(r));
    }
    return out;
}

std::string sweep_csv_header() { return "n,r,pattern,b,games,maker_wins,breaker_wins,faults,mean_rounds,seed"; }

std::string to_csv(const SweepRecord& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", r.mean_rounds);
    std::string pattern = r.pattern;
    if (pattern.find_first_of(",\"") != std::string::npos) {
        std::string q = "\"";
        for (char ch : pattern) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        pattern = q + "\"";
    }
    std::ostringstream os;
    os << r.n << ',' << r.r << ',' << pattern << ',' << r.b << ',' << r.games << ',' << r.maker_wins << ','
       << r.breaker_wins << ',' << r.faults << ',' << buf << ',' << r.seed;
    return os.str();
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
    std::string s = sweep_csv_header() + "\n";
    for (const auto& r : records) s += to_csv(r) + "\n";
    return s;
}

ThresholdEstimate estimate_threshold(const ThresholdPlan& plan) {
    if (!(plan.crossing > 0.0 && plan.crossing < 1.0)) throw PreconditionFault("crossing level must lie in (0, 1)");
    if (plan.probes == 0) throw PreconditionFault("threshold needs at least one game per probe");
    const WinCondition win = resolve_win_condition(plan.setup.base);
    const std::uint32_t size = plan.setup.base.board_size();
    const std::uint32_t top = plan.hi > 0 ? plan.hi : (plan.setup.base.n > 0 ? plan.setup.base.n : size);
    std::map<std::uint32_t, ThresholdProbe> seen;
    auto probe = [&](std::uint32_t b) -> const ThresholdProbe& {
        auto it = seen.find(b);
        if (it != seen.end()) return it->second;
        std::vector<GameOutcome> games(plan.probes);
        parallel_for(plan.probes, plan.threads, [&](std::size_t g) {
            games[g] = play_one(plan.setup, win, b, derive_seed(plan.seed, b, g));
        });
        ThresholdProbe p;
        p.b = b;
        p.games = plan.probes;
        for (const auto& o : games) {
            if (o.fault) ++p.faults;
            else if (o.winner == Player::Maker) ++p.maker_wins;
        }
        return seen.emplace(b, p).first->second;
    };
    auto maker_side = [&](std::uint32_t b) { return probe(b).rate() >= plan.crossing; };

    ThresholdEstimate e;
    e.n = plan.setup.base.n;
    e.pattern = win.spec;
    e.maker = plan.setup.maker;
    e.breaker = plan.setup.breaker;
    e.crossing = plan.crossing;
    e.probes = plan.probes;
    e.seed = plan.seed;

    std::uint32_t lo = std::max<std::uint32_t>(1, plan.lo), hi = std::max(top, lo + 1);
    if (!maker_side(lo)) {
        e.below_range = true;
        e.lo = lo > 1 ? lo - 1 : 0;
        e.hi = lo;
    } else {
        while (maker_side(hi) && hi < size) hi = std::min(size, hi * 2);
        if (maker_side(hi)) {
            e.above_range = true;
            e.lo = hi;
            e.hi = hi + 1;
        } else {
            while (hi - lo > 1) {
                const std::uint32_t mid = lo + (hi - lo) / 2;
                if (maker_side(mid)) lo = mid;
                else hi = mid;
            }
            e.lo = lo;
            e.hi = hi;
        }
    }
    for (const auto& [b, p] : seen) e.samples.push_back(p);
    // Probes on the wrong side of the bracket mean the rate is not monotone in b.
    std::uint32_t wide_lo = e.lo, wide_hi = e.hi;
    for (const auto& p : e.samples) {
        const bool maker = p.rate() >= plan.crossing;
        if (!maker && p.b < e.lo) {
            e.non_monotone = true;
            wide_lo = std::min(wide_lo, p.b > 1 ? p.b - 1 : 0);
        }
        if (maker && p.b > e.hi) {
            e.non_monotone = true;
            wide_hi = std::max(wide_hi, p.b + 1);
        }
    }
    e.lo = wide_lo;
    e.hi = wide_hi;
    const double r_lo = seen.count(e.lo) ? seen.at(e.lo).rate() : 1.0;
    const double r_hi = seen.count(e.hi) ? seen.at(e.hi).rate() : 0.0;
    const double span = r_lo - r_hi;
    double t = span > 0 ? (r_lo - plan.crossing) / span : 0.5;
    t = std::clamp(t, 0.0, 1.0);
    e.b_cross = e.lo + t * (static_cast<double>(e.hi) - e.lo);
    return e;
}

json to_json(const ThresholdEstimate& e) {
    json samples = json::array();
    for (const auto& p : e.samples)
        samples.push_back({{"b", p.b}, {"maker_wins", p.maker_wins}, {"games", p.games}, {"faults", p.faults}});
    return {{"n", e.n},
            {"pattern", e.pattern},
            {"lo", e.lo},
            {"hi", e.hi},
            {"crossing", e.crossing},
            {"probes", e.probes},
            {"seed", e.seed},
            {"b_cross", e.b_cross},
            {"maker", e.maker},
            {"breaker", e.breaker},
            {"non_monotone", e.non_monotone},
            {"below_range", e.below_range},
            {"above_range", e.above_range},
            {"samples", samples}};
}

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& pts) {
    std::set<double> ns;
    for (auto [n, b] : pts) {
        if (!(n > 0) || !(b > 0)) throw PreconditionFault("fit_exponent needs positive n and b");
        ns.insert(n);
    }
    if (ns.size() < 3) throw InsufficientData("fit_exponent needs at least 3 distinct n values");
    const double k = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (auto [n, b] : pts) {
        sx += std::log(n);
        sy += std::log(b);
    }
    const double mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0;
    for (auto [n, b] : pts) {
        const double dx = std::log(n) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(b) - my);
    }
    ExponentFit f;
    f.points = pts.size();
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0;
    for (auto [n, b] : pts) {
        const double res = std::log(b) - (f.intercept + f.slope * std::log(n));
        sse += res * res;
    }
    f.stderr_slope = pts.size() > 2 ? std::sqrt(sse / (k - 2.0) / sxx) : 0.0;
    return f;
}

ExponentFit fit_exponent(const std::vector<ThresholdEstimate>& estimates) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& e : estimates) pts.emplace_back(e.n, std::max(e.b_cross, 1e-9));
    return fit_exponent(pts);
}

namespace {

double normalised(double dev, double scale) {
    if (scale > 0) return dev / scale;
    return dev > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace

DiscrepancyReport discrepancy_diagnostics(const Graph& g, double p, Rng& rng, std::size_t samples, double limit) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionFault("p must lie in [0, 1]");
    DiscrepancyReport rep;
    const std::uint32_t n = g.vertex_count();
    rep.n = n;
    rep.p = p;
    rep.limit = limit;
    if (n < 2) return rep;
    const double dn = n;
    const double deg_scale = std::sqrt(dn * p * std::log(dn));
    for (Vertex v = 0; v < n; ++v) {
        const double d = normalised(std::fabs(static_cast<double>(g.degree(v)) - (dn - 1) * p), deg_scale);
        if (d > rep.max_degree_dev) {
            rep.max_degree_dev = d;
            rep.worst_vertex = v;
        }
    }
    std::vector<Vertex> perm(n);
    for (Vertex v = 0; v < n; ++v) perm[v] = v;
    for (std::size_t s = 0; s < samples && n >= 4; ++s) {
        rng.shuffle(perm);
        const auto half = n / 2;
        const auto xs = 1 + static_cast<std::uint32_t>(rng.below(half));
        const auto ys = 1 + static_cast<std::uint32_t>(rng.below(half));
        VertexSet X(n), Y(n);
        for (std::uint32_t i = 0; i < xs; ++i) X.insert(perm[i]);
        for (std::uint32_t i = 0; i < ys; ++i) Y.insert(perm[n - 1 - i]);
        double exy = 0, ex = 0;
        for (std::uint32_t i = 0; i < xs; ++i) {
            const auto& nb = g.neighbors(perm[i]);
            exy += static_cast<double>(kernels::and_popcount(nb.words(), Y.words()));
            ex += static_cast<double>(kernels::and_popcount(nb.words(), X.words()));
        }
        ex /= 2;
        const double pair_scale = ys * std::sqrt(xs * p * std::log(dn / ys));
        rep.max_pair_dev = std::max(rep.max_pair_dev, normalised(std::fabs(exy - double(xs) * ys * p), pair_scale));
        if (xs >= 2) {
            const double set_scale = xs * std::sqrt(xs * p * std::log(dn / xs));
            const double expect = double(xs) * (xs - 1) / 2 * p;
            rep.max_set_dev = std::max(rep.max_set_dev, normalised(std::fabs(ex - expect), set_scale));
        }
        ++rep.samples;
    }
    rep.flagged = rep.max_degree_dev > limit || rep.max_pair_dev > limit || rep.max_set_dev > limit;
    return rep;
}

}  // namespace mbg
