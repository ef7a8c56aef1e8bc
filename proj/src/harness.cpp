#include "swarmdef/harness.hpp"

#include <chrono>
#include <numeric>
#include <ostream>

namespace swarmdef {

namespace {

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

ModelSeries series_of(const EngagementResult& result) {
    ModelSeries s;
    for (const auto& q : result.q_series) {
        s.q0.push_back(q.q_hvu);
        s.mean_q_attackers.push_back(mean(q.q_attackers));
        s.mean_q_defenders.push_back(mean(q.q_defenders));
    }
    return s;
}

ComparisonReport run_comparison(const ScenarioConfig& cfg, const ControlPoints& cp,
                                std::size_t n_runs, std::uint64_t base_seed) {
    ComparisonReport r;
    for (std::size_t k = 0; k <= cfg.n_steps; ++k) r.t.push_back(static_cast<double>(k) * cfg.dt);
    r.p1 = series_of(propagate(ModelKind::P1, cfg, cp));
    r.p2 = series_of(propagate(ModelKind::P2, cfg, cp));
    r.p3 = series_of(propagate(ModelKind::P3, cfg, cp));
    r.mc = mc_ensemble(cfg, cp, n_runs, base_seed);
    return r;
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& r) {
    out << "t,q0_p1,q0_p2,q0_p3,q0_mc_mean,q0_mc_halfwidth,attQ_p1,attQ_p2,attQ_p3,attQ_mc,"
           "defQ_p1,defQ_p2,defQ_p3,defQ_mc\n";
    auto f = format_double;
    for (std::size_t k = 0; k < r.t.size(); ++k)
        out << f(r.t[k]) << ',' << f(r.p1.q0[k]) << ',' << f(r.p2.q0[k]) << ',' << f(r.p3.q0[k])
            << ',' << f(r.mc.hvu_survival[k]) << ',' << f(r.mc.hvu_halfwidth[k]) << ','
            << f(r.p1.mean_q_attackers[k]) << ',' << f(r.p2.mean_q_attackers[k]) << ','
            << f(r.p3.mean_q_attackers[k]) << ',' << f(r.mc.attacker_alive_fraction[k]) << ','
            << f(r.p1.mean_q_defenders[k]) << ',' << f(r.p2.mean_q_defenders[k]) << ','
            << f(r.p3.mean_q_defenders[k]) << ',' << f(r.mc.defender_alive_fraction[k]) << '\n';
}

std::string to_string(WeaponConfig w) {
    switch (w) {
        case WeaponConfig::Symmetric: return "symmetric";
        case WeaponConfig::AType: return "A";
        case WeaponConfig::BType: return "B";
    }
    return "?";
}

WeaponConfig parse_weapon_config(const std::string& name) {
    if (name == "symmetric") return WeaponConfig::Symmetric;
    if (name == "A" || name == "a" || name == "A-type") return WeaponConfig::AType;
    if (name == "B" || name == "b" || name == "B-type") return WeaponConfig::BType;
    throw ConfigError("unknown weapon config '" + name + "' (expected A, B or symmetric)");
}

ScenarioConfig apply_weapon_config(const ScenarioConfig& base, WeaponConfig w) {
    ScenarioConfig cfg = base;
    if (w == WeaponConfig::AType) cfg.sigma_a *= kRangeAdvantageSigmaFactor;
    if (w == WeaponConfig::BType) cfg.sigma_d *= kRangeAdvantageSigmaFactor;
    return cfg;
}

ScenarioConfig scenario_with_defenders(const ScenarioConfig& base, std::size_t m,
                                       const TradeoffSettings& settings) {
    ScenarioConfig cfg = base;
    cfg.n_defenders = m;
    cfg.initial_defenders =
        default_initializer(m, settings.spawn_radius, base.hvu_position, base.rng_seed, base.d_min);
    validate(cfg);
    return cfg;
}

std::vector<TradeoffRow> tradeoff_sweep(const ScenarioConfig& base, ModelKind model,
                                        const std::vector<std::size_t>& m_values,
                                        WeaponConfig weapon, const OptimizerOptions& opts,
                                        const TradeoffSettings& settings) {
    if (m_values.empty()) throw ConfigError("tradeoff_sweep: m_values must be non-empty");
    const ScenarioConfig weaponized = apply_weapon_config(base, weapon);
    std::vector<TradeoffRow> rows;
    for (std::size_t m : m_values) {
        TradeoffRow row;
        row.model = model;
        row.n_defenders = m;
        row.weapon = weapon;
        const auto start = std::chrono::steady_clock::now();
        try {
            const ScenarioConfig cfg = scenario_with_defenders(weaponized, m, settings);
            const ControlPoints init = initialize_control_points(cfg, settings.init);
            const OptimizationTrace trace = optimize(model, cfg, init, opts);
            row.cost = trace.best_cost;
            row.feasible = trace.feasible;
            row.evaluations = trace.evaluations;
        } catch (const Error& e) {
            row.error = e.what();
        }
        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffRow>& rows,
                        bool with_timing) {
    out << "model,M,weapon_config,J,evals,seconds,feasible,error\n";
    for (const auto& r : rows) {
        out << to_string(r.model) << ',' << r.n_defenders << ',' << to_string(r.weapon) << ','
            << format_double(r.cost) << ',' << r.evaluations << ','
            << format_double(with_timing ? r.seconds : 0.0) << ',' << (r.feasible ? 1 : 0) << ',';
        // errors are single-line messages; commas would break the row
        std::string msg = r.error;
        for (char& c : msg)
            if (c == ',' || c == '\n') c = ';';
        out << msg << '\n';
    }
}

std::size_t minimal_sufficient(const std::vector<TradeoffRow>& rows, double threshold) {
    std::size_t best = 0;
    for (const auto& r : rows)
        if (r.error.empty() && r.cost < threshold && (best == 0 || r.n_defenders < best))
            best = r.n_defenders;
    return best;
}

}  // namespace swarmdef
