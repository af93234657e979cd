#include "mbg/breaker.hpp"

#include <algorithm>
#include <cmath>

#include "mbg/errors.hpp"
#include "mbg/structures.hpp"

namespace mbg {

FanPreventionConfig FanPreventionConfig::for_bias(std::uint32_t b, double delta, std::uint32_t t_cluster) {
    if (!(delta > 0.0 && delta < 1.0)) throw PreconditionFault("delta must lie in (0, 1)");
    if (t_cluster < 1) throw PreconditionFault("t_cluster must be >= 1");
    FanPreventionConfig c;
    c.delta = delta;
    c.t_cluster = t_cluster;
    c.half_bias = std::max<std::uint32_t>(1, b / 2);
    const double q = c.half_bias;
    c.s = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::floor(std::pow(q, 1.0 - delta) + 1e-12)));
    c.t_fan = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::floor(std::pow(q, delta / 3.0) + 1e-12)));
    return c;
}

std::vector<std::pair<Vertex, Vertex>> BoardGraphs::sync(const Board& board) {
    if (n_ == 0) {
        n_ = board.vertex_count();
        maker_ = Graph(n_);
        breaker_ = Graph(n_);
    }
    std::vector<std::pair<Vertex, Vertex>> fresh;
    const auto hist = board.history();
    for (; cursor_ < hist.size(); ++cursor_) {
        const auto [a, b] = decode_pair(hist[cursor_].element, n_);
        if (hist[cursor_].player == Player::Maker) {
            maker_.add_edge(a, b);
            fresh.emplace_back(a, b);
        } else {
            breaker_.add_edge(a, b);
        }
    }
    return fresh;
}

// ---------------------------------------------------------------------------

namespace {

PatternGraph induced(const PatternGraph& h, const std::vector<Vertex>& keep) {
    std::vector<int> pos(h.vertex_count(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = static_cast<int>(i);
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (auto [a, b] : h.edges())
        if (pos[a] >= 0 && pos[b] >= 0) edges.emplace_back(static_cast<Vertex>(pos[a]), static_cast<Vertex>(pos[b]));
    return PatternGraph(static_cast<std::uint32_t>(keep.size()), std::move(edges), h.name() + "'");
}

std::string pattern_key(const PatternGraph& h) {
    return std::to_string(h.vertex_count()) + ":" +
           std::to_string(canonical_mask(h.vertex_count(), pattern_mask(h.vertex_count(), h.edges())));
}

}  // namespace

DynamicHBreaker::DynamicHBreaker(const PatternGraph& h, std::uint32_t n, std::uint32_t b, FanPreventionConfig cfg,
                                 const FamilyLimits& limits)
    : h_(h), played_(h.without_isolated()), n_(n), cfg_(cfg) {
    if (cfg_.half_bias == 0) cfg_ = FanPreventionConfig::for_bias(b, cfg.delta, cfg.t_cluster);
    if (played_.edge_count() == 0) throw PreconditionFault("H needs at least one edge");
    if (played_.vertex_count() >= 3) {
        try {
            const auto d = m2_density(played_);
            if (!d.h_is_maximal) played_ = induced(played_, d.maximizer).without_isolated();
        } catch (const UndefinedDensity&) {
        }
    }
    forest_ = !played_.has_cycle();
    if (forest_) return;
    hbars_ = hbar_graphs(played_);
    const std::string key = pattern_key(played_);
    const std::uint32_t core = b - b / 2;
    try {
        auto cl = cached_family("clusters:" + std::to_string(n) + ":" + key + ":" + std::to_string(cfg_.t_cluster) + ":" +
                                    std::to_string(limits.max_hyperedges),
                                [&] { return enumerate_clusters(n, played_, cfg_.t_cluster, limits); });
        auto fa = cached_family("fans:" + std::to_string(n) + ":" + key + ":" + std::to_string(cfg_.t_fan) + ":" +
                                    std::to_string(limits.max_hyperedges),
                                [&] { return enumerate_simple_fans(n, played_, cfg_.t_fan, limits); });
        const bool both = !cl->empty() && !fa->empty();
        const double q1 = std::max<std::uint32_t>(1, both ? core - core / 2 : core);
        const double q2 = std::max<std::uint32_t>(1, both ? core / 2 : core);
        if (!cl->empty()) clusters_ = std::make_unique<PotentialState>(cl, 1.0, q1);
        if (!fa->empty()) fans_ = std::make_unique<PotentialState>(fa, 1.0, q2);
    } catch (const CapacityError& e) {
        degraded_ = true;
        degraded_reason_ = e.what();
        clusters_.reset();
        fans_.reset();
    }
}

void DynamicHBreaker::sync(const Board& board, std::vector<std::pair<Vertex, Vertex>>& new_maker) {
    new_maker = graphs_.sync(board);
    if (clusters_) clusters_->sync(board);
    if (fans_) fans_->sync(board);
    for (auto it = dangerous_.begin(); it != dangerous_.end();) {
        if (board.state(it->first) != ClaimState::Unclaimed) it = dangerous_.erase(it);
        else ++it;
    }
    if (forest_) return;
    for (auto [a, b] : new_maker) {
        for_each_dangerous_through(graphs_.maker(), graphs_.breaker(), hbars_, a, b, [&](const DangerousInstance& d) {
            const ElementId e = encode_pair(d.v, d.w, n_);
            if (board.state(e) == ClaimState::Unclaimed) ++dangerous_[e];
        });
    }
}

std::vector<ElementId> DynamicHBreaker::respond(const GameView& view, std::uint32_t budget) {
    const Board& board = view.board;
    if (board.vertex_count() != n_) throw InvalidBoard("dynamicH breaker built for a different board");
    std::vector<std::pair<Vertex, Vertex>> new_maker;
    sync(board, new_maker);
    const auto open = board.open_mask();
    eligible_.assign(open.begin(), open.end());
    std::vector<ElementId> picks;
    auto take = [&](ElementId e) {
        picks.push_back(e);
        eligible_[e] = 0;
        if (clusters_) clusters_->breaker_claim(e);
        if (fans_) fans_->breaker_claim(e);
        dangerous_.erase(e);
    };
    auto lowest_open = [&]() -> std::optional<ElementId> {
        for (std::size_t e = 0; e < eligible_.size(); ++e)
            if (eligible_[e]) return static_cast<ElementId>(e);
        return std::nullopt;
    };

    if (forest_) {
        for (auto [a, b] : new_maker)
            for (Vertex end : {a, b})
                for (Vertex w = 0; w < n_ && picks.size() < budget; ++w) {
                    if (w == end) continue;
                    const ElementId e = encode_pair(end, w, n_);
                    if (eligible_[e]) take(e);
                }
    } else {
        std::vector<std::pair<std::uint32_t, ElementId>> order;
        for (auto [e, mult] : dangerous_)
            if (eligible_[e]) order.emplace_back(mult, e);
        std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
            return x.first != y.first ? x.first > y.first : x.second < y.second;
        });
        for (auto [mult, e] : order) {
            if (picks.size() >= budget) break;
            take(e);
            ++blocked_;
        }
        const std::size_t rest = budget - picks.size();
        const std::size_t for_clusters = clusters_ ? (fans_ ? rest - rest / 2 : rest) : 0;
        for (std::size_t j = 0; j < rest; ++j) {
            PotentialState* first = (j < for_clusters) ? clusters_.get() : fans_.get();
            PotentialState* second = (first == clusters_.get()) ? fans_.get() : clusters_.get();
            std::optional<ElementId> e;
            for (PotentialState* s : {first, second}) {
                if (!s || e) continue;
                const auto best = s->argmax(eligible_);
                if (best.index != kernels::ArgMax::npos && best.value > 0.0) e = static_cast<ElementId>(best.index);
            }
            if (!e) e = lowest_open();
            if (!e) break;
            take(*e);
        }
    }
    while (picks.size() < budget) {
        const auto e = lowest_open();
        if (!e) break;
        take(*e);
    }
    return picks;
}

json DynamicHBreaker::info() const {
    json j{{"strategy", "dynamicH"},
           {"H", h_.name()},
           {"played_edges", played_.edge_count()},
           {"played_vertices", played_.vertex_count()},
           {"forest", forest_},
           {"delta", cfg_.delta},
           {"t_cluster", cfg_.t_cluster},
           {"t_fan", cfg_.t_fan},
           {"s", cfg_.s},
           {"half_bias", cfg_.half_bias},
           {"degraded", degraded_},
           {"blocked", blocked_}};
    if (degraded_) j["degraded_reason"] = degraded_reason_;
    j["cluster_family"] = clusters_ ? clusters_->family().size() : 0;
    j["fan_family"] = fans_ ? fans_->family().size() : 0;
    return j;
}

// ---------------------------------------------------------------------------

std::vector<ElementId> RandomBreaker::respond(const GameView& view, std::uint32_t budget) {
    const auto open = view.board.open_elements();
    const auto k = std::min<std::size_t>(budget, open.size());
    std::vector<ElementId> picks;
    for (auto i : rng_.sample(static_cast<std::uint32_t>(open.size()), static_cast<std::uint32_t>(k)))
        picks.push_back(open[i]);
    return picks;
}

}  // namespace mbg
