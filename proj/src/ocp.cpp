#include "swarmdef/ocp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace swarmdef {

std::string to_string(ModelKind model) {
    switch (model) {
        case ModelKind::P1: return "p1";
        case ModelKind::P2: return "p2";
        case ModelKind::P3: return "p3";
    }
    return "?";
}

ModelKind parse_model(const std::string& name) {
    if (name == "p1" || name == "P1") return ModelKind::P1;
    if (name == "p2" || name == "P2") return ModelKind::P2;
    if (name == "p3" || name == "P3") return ModelKind::P3;
    throw ConfigError("unknown model '" + name + "' (expected p1, p2 or p3)");
}

std::string format_double(double value) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

void check_compatible(const ScenarioConfig& cfg, const ControlPoints& cp) {
    if (cp.n_defenders() != cfg.n_defenders)
        throw ConfigError("control points describe " + std::to_string(cp.n_defenders()) +
                          " defenders, scenario has " + std::to_string(cfg.n_defenders));
    if (cp.order != cfg.bernstein_order)
        throw ConfigError("control point order " + std::to_string(cp.order) +
                          " does not match scenario bernstein_order " +
                          std::to_string(cfg.bernstein_order));
    const double tf = cfg.horizon();
    if (std::abs(cp.horizon - tf) > 1e-9 * std::max(1.0, tf))
        throw ConfigError("control point horizon " + format_double(cp.horizon) +
                          " does not match scenario horizon " + format_double(tf));
}

namespace {

struct Recorder {
    std::vector<SurvivalVector> q;
    std::vector<SwarmState> states;
    std::vector<IndexSet> isets;
};

EffectivenessWeights survival_weights(const SurvivalVector& q) {
    return {q.q_attackers, q.q_defenders};
}

double run(ModelKind model, const ScenarioConfig& cfg, const ControlPoints& cp, Recorder* rec) {
    check_compatible(cfg, cp);
    const std::size_t n = cfg.n_attackers;
    const std::size_t m = cfg.n_defenders;
    const auto grid = TrajectoryEvaluator(cp).on_grid(cfg.n_steps);

    SwarmState state = initial_state(cfg);
    state.defender_pos = grid[0].position;
    state.defender_vel = grid[0].velocity;
    SurvivalVector q = SurvivalVector::ones(n, m);
    IndexSet iset = IndexSet::all_alive(n, m);
    AccelCache cache = initial_cache(state, EffectivenessWeights::ones(n, m), cfg);
    const EffectivenessWeights unit = EffectivenessWeights::ones(n, m);

    if (rec) {
        rec->q.reserve(cfg.n_steps + 1);
        rec->states.reserve(cfg.n_steps + 1);
        rec->isets.reserve(cfg.n_steps + 1);
        rec->q.push_back(q);
        rec->states.push_back(state);
        rec->isets.push_back(iset);
    }

    for (std::size_t k = 0; k < cfg.n_steps; ++k) {
        // attrition uses positions at t_k, then motion advances to t_{k+1}
        const DamageRates rates = damage_rates(state, cfg);
        if (model == ModelKind::P3) {
            q = survival_step(q, rates, iset.as_weights(), cfg.dt);
            iset = threshold_update(iset, q, cfg.survival_threshold);
        } else {
            q = survival_step(q, rates, survival_weights(q), cfg.dt);
        }

        DefenderKinematics next{grid[k + 1].position, grid[k + 1].velocity};
        try {
            switch (model) {
                case ModelKind::P1: verlet_step(state, cache, unit, next, cfg); break;
                case ModelKind::P2: verlet_step(state, cache, survival_weights(q), next, cfg); break;
                case ModelKind::P3: verlet_step(state, cache, iset.as_weights(), next, cfg); break;
            }
        } catch (const IntegrationError& e) {
            throw IntegrationError(std::string(e.what()) + " (model " + to_string(model) + ")",
                                   e.step(), e.agent());
        }

        if (rec) {
            rec->q.push_back(q);
            rec->states.push_back(state);
            rec->isets.push_back(iset);
        }
    }
    return 1.0 - q.q_hvu;
}

}  // namespace

EngagementResult propagate(ModelKind model, const ScenarioConfig& cfg, const ControlPoints& cp) {
    Recorder rec;
    EngagementResult result;
    result.cost = run(model, cfg, cp, &rec);
    result.q_series = std::move(rec.q);
    result.state_series = std::move(rec.states);
    result.iset_series = std::move(rec.isets);
    result.constraints = constraint_residuals(cfg, cp);
    return result;
}

double propagate_cost(ModelKind model, const ScenarioConfig& cfg, const ControlPoints& cp) {
    return run(model, cfg, cp, nullptr);
}

ConstraintReport constraint_residuals(const ScenarioConfig& cfg, const ControlPoints& cp) {
    check_compatible(cfg, cp);
    const auto grid = TrajectoryEvaluator(cp).on_grid(cfg.n_steps);
    ConstraintReport r;
    r.min_separation = std::numeric_limits<double>::infinity();
    for (const auto& s : grid) {
        for (const auto& u : s.control) {
            const double a = u.cwiseAbs().maxCoeff();
            r.max_control = std::max(r.max_control, a);
        }
        for (std::size_t j = 0; j < s.position.size(); ++j)
            for (std::size_t l = j + 1; l < s.position.size(); ++l)
                r.min_separation = std::min(r.min_separation, (s.position[j] - s.position[l]).norm());
    }
    r.control_violation = std::max(0.0, r.max_control - cfg.u_max);
    if (std::isfinite(r.min_separation))
        r.separation_violation = std::max(0.0, cfg.d_min - r.min_separation);
    return r;
}

void write_engagement_csv(std::ostream& out, const EngagementResult& result,
                          const ScenarioConfig& cfg, bool with_positions) {
    out << "t,q0,mean_q_attackers,mean_q_defenders,attackers_alive,defenders_alive,hvu_alive";
    if (with_positions) {
        for (std::size_t i = 0; i < cfg.n_attackers; ++i)
            out << ",ax" << i << ",ay" << i << ",az" << i;
        for (std::size_t k = 0; k < cfg.n_defenders; ++k)
            out << ",dx" << k << ",dy" << k << ",dz" << k;
    }
    out << '\n';
    auto mean = [](const std::vector<double>& v) {
        return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    for (std::size_t k = 0; k < result.q_series.size(); ++k) {
        const auto& q = result.q_series[k];
        const auto& is = result.iset_series[k];
        out << format_double(static_cast<double>(k) * cfg.dt) << ',' << format_double(q.q_hvu)
            << ',' << format_double(mean(q.q_attackers)) << ',' << format_double(mean(q.q_defenders))
            << ',' << is.attackers_alive() << ',' << is.defenders_alive() << ','
            << (is.hvu_alive ? 1 : 0);
        if (with_positions) {
            const auto& s = result.state_series[k];
            for (const auto& p : s.attacker_pos)
                out << ',' << format_double(p.x()) << ',' << format_double(p.y()) << ','
                    << format_double(p.z());
            for (const auto& p : s.defender_pos)
                out << ',' << format_double(p.x()) << ',' << format_double(p.y()) << ','
                    << format_double(p.z());
        }
        out << '\n';
    }
}

}  // namespace swarmdef
