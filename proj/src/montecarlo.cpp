#include "swarmdef/montecarlo.hpp"

#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "swarmdef/dynamics.hpp"
#include "swarmdef/ocp.hpp"
#include "swarmdef/parallel.hpp"

namespace swarmdef {

MCRunRecord mc_run(const ScenarioConfig& cfg, const ControlPoints& cp, std::uint64_t seed) {
    check_compatible(cfg, cp);
    const std::size_t n = cfg.n_attackers;
    const std::size_t m = cfg.n_defenders;
    const auto grid = TrajectoryEvaluator(cp).on_grid(cfg.n_steps);

    SwarmState state = initial_state(cfg);
    state.defender_pos = grid[0].position;
    state.defender_vel = grid[0].velocity;
    SurvivalVector q = SurvivalVector::ones(n, m);
    IndexSet alive = IndexSet::all_alive(n, m);
    AccelCache cache = initial_cache(state, alive.as_weights(), cfg);
    CounterRng rng{seed, 0, 0};

    MCRunRecord rec;
    rec.seed = seed;
    auto log = [&] {
        rec.q0_series.push_back(q.q_hvu);
        rec.attackers_alive_series.push_back(alive.attackers_alive());
        rec.defenders_alive_series.push_back(alive.defenders_alive());
        rec.hvu_alive_series.push_back(alive.hvu_alive ? 1 : 0);
    };
    log();

    for (std::size_t k = 0; k < cfg.n_steps; ++k) {
        const DamageRates rates = damage_rates(state, cfg);
        const SurvivalVector q_next = survival_step(q, rates, alive.as_weights(), cfg.dt);
        const IndexSet before = alive;
        alive = mc_removal(alive, q, q_next, rng);
        q = q_next;

        if (before.hvu_alive && !alive.hvu_alive) rec.removals.push_back({k + 1, 0, Side::Hvu});
        for (std::size_t i = 0; i < n; ++i)
            if (before.attacker_alive[i] && !alive.attacker_alive[i])
                rec.removals.push_back({k + 1, i, Side::Attacker});
        for (std::size_t d = 0; d < m; ++d)
            if (before.defender_alive[d] && !alive.defender_alive[d])
                rec.removals.push_back({k + 1, d, Side::Defender});

        // dead defenders stay where they were removed
        DefenderKinematics next{grid[k + 1].position, grid[k + 1].velocity};
        for (std::size_t d = 0; d < m; ++d)
            if (!alive.defender_alive[d]) {
                next.position[d] = state.defender_pos[d];
                next.velocity[d].setZero();
            }
        std::vector<char> frozen(n);
        for (std::size_t i = 0; i < n; ++i) frozen[i] = alive.attacker_alive[i] ? 0 : 1;
        verlet_step(state, cache, alive.as_weights(), next, cfg, frozen);
        log();
    }
    rec.hvu_survived = alive.hvu_alive;
    rec.attackers_alive = alive.attackers_alive();
    rec.defenders_alive = alive.defenders_alive();
    return rec;
}

MCStats aggregate(const std::vector<MCRunRecord>& runs, const ScenarioConfig& cfg,
                  std::uint64_t base_seed) {
    MCStats s;
    s.n_runs = runs.size();
    s.base_seed = base_seed;
    const std::size_t steps = cfg.n_steps + 1;
    s.attacker_alive_fraction.assign(steps, 0.0);
    s.defender_alive_fraction.assign(steps, 0.0);
    s.hvu_survival.assign(steps, 0.0);
    s.hvu_halfwidth.assign(steps, 0.0);
    s.attacker_halfwidth.assign(steps, 0.0);
    s.defender_halfwidth.assign(steps, 0.0);
    if (runs.empty()) return s;

    const double runs_d = static_cast<double>(runs.size());
    const double na = static_cast<double>(cfg.n_attackers);
    const double nd = static_cast<double>(cfg.n_defenders);
    for (std::size_t k = 0; k < steps; ++k) {
        double a = 0.0, d = 0.0, h = 0.0;
        double a2 = 0.0, d2 = 0.0;
        for (const auto& r : runs) {
            const double fa = static_cast<double>(r.attackers_alive_series[k]) / na;
            const double fd = static_cast<double>(r.defenders_alive_series[k]) / nd;
            a += fa;
            d += fd;
            a2 += fa * fa;
            d2 += fd * fd;
            h += r.hvu_alive_series[k] ? 1.0 : 0.0;
        }
        a /= runs_d;
        d /= runs_d;
        h /= runs_d;
        s.attacker_alive_fraction[k] = a;
        s.defender_alive_fraction[k] = d;
        s.hvu_survival[k] = h;
        s.hvu_halfwidth[k] = 1.96 * std::sqrt(h * (1.0 - h) / runs_d);
        s.attacker_halfwidth[k] = 1.96 * std::sqrt(std::max(0.0, a2 / runs_d - a * a) / runs_d);
        s.defender_halfwidth[k] = 1.96 * std::sqrt(std::max(0.0, d2 / runs_d - d * d) / runs_d);
    }
    return s;
}

MCStats mc_ensemble(const ScenarioConfig& cfg, const ControlPoints& cp, std::size_t n_runs,
                    std::uint64_t base_seed) {
    if (n_runs < 1) throw ConfigError("mc_ensemble: n_runs must be >= 1");
    std::vector<MCRunRecord> runs(n_runs);
    parallel_for(n_runs, [&](std::size_t i) { runs[i] = mc_run(cfg, cp, base_seed + i); });
    return aggregate(runs, cfg, base_seed);
}

void write_mc_csv(std::ostream& out, const MCStats& stats, const ScenarioConfig& cfg) {
    out << "t,hvu_survival,hvu_halfwidth,attacker_alive_fraction,attacker_halfwidth,"
           "defender_alive_fraction,defender_halfwidth\n";
    for (std::size_t k = 0; k < stats.hvu_survival.size(); ++k)
        out << format_double(static_cast<double>(k) * cfg.dt) << ','
            << format_double(stats.hvu_survival[k]) << ',' << format_double(stats.hvu_halfwidth[k])
            << ',' << format_double(stats.attacker_alive_fraction[k]) << ','
            << format_double(stats.attacker_halfwidth[k]) << ','
            << format_double(stats.defender_alive_fraction[k]) << ','
            << format_double(stats.defender_halfwidth[k]) << '\n';
}

std::string mc_summary_json(const MCStats& stats) {
    nlohmann::json doc = {
        {"n_runs", stats.n_runs},
        {"base_seed", stats.base_seed},
        {"hvu_survival", stats.hvu_survival.empty() ? 0.0 : stats.hvu_survival.back()},
        {"hvu_halfwidth", stats.hvu_halfwidth.empty() ? 0.0 : stats.hvu_halfwidth.back()},
        {"attacker_alive_fraction",
         stats.attacker_alive_fraction.empty() ? 0.0 : stats.attacker_alive_fraction.back()},
        {"defender_alive_fraction",
         stats.defender_alive_fraction.empty() ? 0.0 : stats.defender_alive_fraction.back()},
    };
    return doc.dump(2);
}

}  // namespace swarmdef
