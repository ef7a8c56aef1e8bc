#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oracle_frozen.hpp"
#include "swarmdef/montecarlo.hpp"
#include "swarmdef/optimizer.hpp"
#include "test_util.hpp"

using namespace swarmdef;
using swarmdef::testing::data_path;
using swarmdef::testing::small_config;

namespace {

ControlPoints hold(const ScenarioConfig& cfg) {
    return initialize_control_points(cfg, InitStrategy::Hold);
}

}  // namespace

TEST_CASE("no attrition means no removals") {
    auto cfg = small_config(4, 2);
    cfg.lambda_a = 0.0;
    cfg.lambda_d = 0.0;
    const auto rec = mc_run(cfg, hold(cfg), 17);
    CHECK(rec.hvu_survived);
    CHECK(rec.removals.empty());
    CHECK(rec.attackers_alive == 4);
    CHECK(rec.defenders_alive == 2);
    for (double q : rec.q0_series) CHECK(q == 1.0);
}

TEST_CASE("runs are reproducible per seed and consistent") {
    auto cfg = small_config(5, 3);
    cfg.lambda_a = 3.0;
    cfg.lambda_d = 3.0;
    cfg.n_steps = 80;
    const auto cp = initialize_control_points(cfg, InitStrategy::LineToThreat);
    const auto a = mc_run(cfg, cp, 99);
    const auto b = mc_run(cfg, cp, 99);
    CHECK(a == b);

    std::size_t att = 0, def = 0, hvu = 0;
    for (const auto& r : a.removals) {
        att += r.side == Side::Attacker;
        def += r.side == Side::Defender;
        hvu += r.side == Side::Hvu;
    }
    CHECK(a.attackers_alive == 5 - att);
    CHECK(a.defenders_alive == 3 - def);
    CHECK(a.hvu_survived == (hvu == 0));
    CHECK(a.attackers_alive_series.size() == cfg.n_steps + 1);
    for (std::size_t k = 1; k <= cfg.n_steps; ++k)
        CHECK(a.attackers_alive_series[k] <= a.attackers_alive_series[k - 1]);

    // some seed in a handful differs, so the seed really drives the draws
    bool differs = false;
    for (std::uint64_t s = 100; s < 110 && !differs; ++s) differs = !(mc_run(cfg, cp, s).removals == a.removals);
    CHECK(differs);
}

TEST_CASE("frozen 1v1 matches the enumerated removal tree") {
    const auto cfg = load_scenario_file(data_path("desk_1v1_frozen.json"));
    const auto cp = hold(cfg);
    const auto oracle = swarmdef::testing::oracle_frozen_1v1(cfg);
    const std::size_t runs = 20000;
    std::vector<double> att(cfg.n_steps + 1, 0.0), def(cfg.n_steps + 1, 0.0), hvu(cfg.n_steps + 1, 0.0);
    for (std::size_t s = 0; s < runs; ++s) {
        const auto rec = mc_run(cfg, cp, 1000 + s);
        for (std::size_t k = 0; k <= cfg.n_steps; ++k) {
            att[k] += rec.attackers_alive_series[k] == 0;
            def[k] += rec.defenders_alive_series[k] == 0;
            hvu[k] += rec.hvu_alive_series[k] == 0;
        }
    }
    for (std::size_t k = 1; k <= cfg.n_steps; ++k) {
        for (auto [count, p] : {std::pair{att[k], oracle.attacker_dead[k]}, std::pair{def[k], oracle.defender_dead[k]},
                                std::pair{hvu[k], oracle.hvu_dead[k]}}) {
            const double sigma = std::sqrt(p * (1 - p) / runs);
            CHECK(std::abs(count / runs - p) < 3.0 * sigma);
        }
    }
}

TEST_CASE("frozen positions really stay frozen") {
    const auto cfg = load_scenario_file(data_path("desk_1v1_frozen.json"));
    const auto res = propagate(ModelKind::P1, cfg, hold(cfg));
    for (const auto& s : res.state_series) {
        CHECK(s.attacker_pos[0] == cfg.initial_attackers[0].position);
        CHECK(s.defender_pos[0] == cfg.initial_defenders[0].position);
    }
}

TEST_CASE("ensemble statistics") {
    const auto cfg = load_scenario_file(data_path("desk_1v1_frozen.json"));
    const auto cp = hold(cfg);

    SUBCASE("single run") {
        const auto stats = mc_ensemble(cfg, cp, 1, 42);
        const auto rec = mc_run(cfg, cp, 42);
        for (std::size_t k = 0; k <= cfg.n_steps; ++k) {
            CHECK(stats.hvu_survival[k] == (rec.hvu_alive_series[k] ? 1.0 : 0.0));
            CHECK(stats.attacker_alive_fraction[k] == static_cast<double>(rec.attackers_alive_series[k]));
        }
    }
    SUBCASE("half-widths shrink like one over root n") {
        const auto small = mc_ensemble(cfg, cp, 2000, 7);
        const auto big = mc_ensemble(cfg, cp, 4000, 7);
        const double ratio = big.hvu_halfwidth.back() / small.hvu_halfwidth.back();
        CHECK(ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
    }
    SUBCASE("replica order does not matter") {
        std::vector<MCRunRecord> runs;
        for (std::uint64_t s = 0; s < 64; ++s) runs.push_back(mc_run(cfg, cp, 500 + s));
        const auto stats = aggregate(runs, cfg, 500);
        std::mt19937_64 gen(1);
        std::shuffle(runs.begin(), runs.end(), gen);
        CHECK(aggregate(runs, cfg, 500) == stats);
        CHECK(mc_ensemble(cfg, cp, 64, 500) == stats);
    }
    SUBCASE("zero runs rejected") {
        CHECK_THROWS_AS(mc_ensemble(cfg, cp, 0, 1), ConfigError);
    }
    SUBCASE("outputs") {
        const auto stats = mc_ensemble(cfg, cp, 50, 3);
        std::ostringstream csv;
        write_mc_csv(csv, stats, cfg);
        std::istringstream in(csv.str());
        std::string line;
        std::getline(in, line);
        CHECK(line == "t,hvu_survival,hvu_halfwidth,attacker_alive_fraction,attacker_halfwidth,"
                      "defender_alive_fraction,defender_halfwidth");
        int rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == static_cast<int>(cfg.n_steps) + 1);
        const auto doc = nlohmann::json::parse(mc_summary_json(stats));
        CHECK(doc["n_runs"] == 50);
        CHECK(doc["base_seed"] == 3);
        CHECK(doc["hvu_survival"].get<double>() == stats.hvu_survival.back());
    }
}
