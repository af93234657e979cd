#include <doctest.h>

#include <cmath>

#include "mbg/errors.hpp"
#include "mbg/experiments.hpp"

using namespace mbg;

namespace {

// Maker wins iff b < 3: a centre element shared by three pairs.
GameSetup star_game() {
    GameSetup s;
    s.base.universe = 4;
    s.base.family =
        std::make_shared<const WinningFamily>(4, std::vector<std::vector<ElementId>>{{0, 1}, {0, 2}, {0, 3}});
    s.maker = "greedyfamily";
    s.breaker = "potential()";
    return s;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("single cell sweep") {
    SweepPlan plan;
    plan.setup = star_game();
    plan.cells = {{0, "", 2}};
    plan.games = 1;
    plan.seed = 3;
    const auto recs = sweep(plan);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].games == 1);
    CHECK(recs[0].maker_wins + recs[0].breaker_wins + recs[0].faults == recs[0].games);
    CHECK(recs[0].maker_wins == 1);
}

TEST_CASE("sweeps are deterministic and independent of threads") {
    SweepPlan plan;
    plan.setup.base.win = "K3";
    plan.setup.maker = "random(resample)";
    plan.setup.breaker = "potential()";
    for (std::uint32_t b = 1; b <= 4; ++b) plan.cells.push_back({12, "", b});
    plan.games = 12;
    plan.seed = 77;
    plan.threads = 1;
    const auto a = sweep_csv(sweep(plan));
    plan.threads = 4;
    const auto b = sweep_csv(sweep(plan));
    CHECK(a == b);
    CHECK(a.rfind(sweep_csv_header(), 0) == 0);
    CHECK(sweep_csv_header().find("n,r,pattern,b,games,maker_wins,breaker_wins,faults,mean_rounds,seed") == 0);
}

TEST_CASE("win rate falls with the bias") {
    SweepPlan plan;
    plan.setup.base.win = "K3";
    plan.setup.maker = "random(resample)";
    plan.setup.breaker = "potential()";
    for (std::uint32_t b = 1; b <= 10; ++b) plan.cells.push_back({20, "", b});
    plan.games = 60;
    plan.seed = 5;
    const auto recs = sweep(plan);
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const double p0 = recs[i - 1].maker_rate(), p1 = recs[i].maker_rate();
        const double se = std::sqrt((p0 * (1 - p0) + p1 * (1 - p1)) / 60.0);
        CHECK(p1 <= p0 + 2 * se + 1e-12);
    }
}

TEST_CASE("threshold of a constructed game") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        ThresholdPlan plan;
        plan.setup = star_game();
        plan.probes = 3;
        plan.seed = seed;
        const auto est = estimate_threshold(plan);
        CHECK(est.lo == 2);
        CHECK(est.hi == 3);
        CHECK_FALSE(est.non_monotone);
        CHECK(est.b_cross >= 2);
        CHECK(est.b_cross <= 3);
        const auto j = to_json(est);
        for (const char* key : {"n", "pattern", "lo", "hi", "crossing", "probes", "seed"}) CHECK(j.contains(key));
    }
}

TEST_CASE("exponent fits recover planted laws") {
    std::vector<std::pair<double, double>> cube, root;
    for (double n : {32.0, 64.0, 128.0, 256.0}) {
        cube.emplace_back(n, std::cbrt(n));
        root.emplace_back(n, 3.5 * std::sqrt(n));
    }
    const auto a = fit_exponent(cube);
    CHECK(std::fabs(a.slope - 1.0 / 3.0) < 1e-9);
    CHECK(a.stderr_slope < 1e-9);
    const auto b = fit_exponent(root);
    CHECK(std::fabs(b.slope - 0.5) < 1e-9);
    CHECK(std::fabs(b.intercept - std::log(3.5)) < 1e-9);
    CHECK_THROWS_AS(fit_exponent(std::vector<std::pair<double, double>>{{2, 1}, {4, 2}}), InsufficientData);
    CHECK_THROWS_AS(fit_exponent(std::vector<std::pair<double, double>>{{2, 1}, {2, 2}, {4, 2}}), InsufficientData);
}

TEST_CASE("discrepancy diagnostics") {
    Rng rng(8);
    const auto g = random_graph(500, 0.1, rng);
    const auto rep = discrepancy_diagnostics(g, 0.1, rng);
    CHECK(rep.max_degree_dev <= 3.0);
    const auto full = discrepancy_diagnostics(Graph::complete(40), 1.0, rng);
    CHECK(full.max_degree_dev == doctest::Approx(0.0));
    CHECK_FALSE(full.flagged);
    const auto empty = discrepancy_diagnostics(Graph(40), 0.5, rng);
    CHECK(empty.flagged);
}

TEST_CASE("faults are counted, not thrown") {
    SweepPlan plan;
    plan.setup.base.win = "K3";
    plan.setup.maker = "random(resample)";
    plan.setup.breaker = "isolate(v=0,r=4)";
    plan.cells = {{8, "", 0}};
    plan.games = 2;
    const auto recs = sweep(plan);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].maker_wins + recs[0].breaker_wins + recs[0].faults == 2);
}

}
