#include "swarmdef/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace swarmdef {

namespace {

// Profiles without the domain check; r is already softened.
double inter_profile(double r, double d0, double d1, double k_rep, double k_att) {
    if (r <= d0) return k_rep * (d0 / r - 1.0);
    if (r <= d1) {
        const double w = d1 - d0;
        return -k_att * 4.0 * (r - d0) * (d1 - r) / (w * w);
    }
    return 0.0;
}

double defender_profile(double r, double s0, double k_dref) {
    return r <= s0 ? k_dref * (s0 / r - 1.0) : 0.0;
}

}  // namespace

double f_inter(double r, double d0, double d1, double k_rep, double k_att) {
    if (!(r > 0.0)) throw DomainError("f_inter: distance must be > 0");
    return inter_profile(std::max(r, kSofteningRadius), d0, d1, k_rep, k_att);
}

double f_def(double r, double s0, double k_dref) {
    if (!(r > 0.0)) throw DomainError("f_def: distance must be > 0");
    return defender_profile(std::max(r, kSofteningRadius), s0, k_dref);
}

SwarmState initial_state(const ScenarioConfig& cfg) {
    SwarmState s;
    for (const auto& a : cfg.initial_attackers) {
        s.attacker_pos.push_back(a.position);
        s.attacker_vel.push_back(a.velocity);
    }
    for (const auto& d : cfg.initial_defenders) {
        s.defender_pos.push_back(d.position);
        s.defender_vel.push_back(d.velocity);
    }
    s.hvu_pos = cfg.hvu_position;
    return s;
}

Vec3List conservative_accelerations(const SwarmState& state, const EffectivenessWeights& weights,
                                    const ScenarioConfig& cfg) {
    const std::size_t n = state.n_attackers();
    const std::size_t m = state.n_defenders();
    Vec3List acc(n, Vec3::Zero());
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& xi = state.attacker_pos[i];
        Vec3 a = Vec3::Zero();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || weights.attacker_w[j] == 0.0) continue;
            const Vec3 xij = xi - state.attacker_pos[j];
            const double r = xij.norm();
            if (r > cfg.d1) continue;
            const double rs = std::max(r, kSofteningRadius);
            const double f = inter_profile(rs, cfg.d0, cfg.d1, cfg.k_rep, cfg.k_att);
            a += (weights.attacker_w[j] * f / rs) * xij;
        }
        for (std::size_t k = 0; k < m; ++k) {
            if (weights.defender_w[k] == 0.0) continue;
            const Vec3 sik = xi - state.defender_pos[k];
            const double r = sik.norm();
            if (r > cfg.s0) continue;
            const double rs = std::max(r, kSofteningRadius);
            const double f = defender_profile(rs, cfg.s0, cfg.k_dref);
            a += (weights.defender_w[k] * f / rs) * sik;
        }
        const Vec3 hi = state.hvu_pos - xi;
        const double hn = hi.norm();
        if (hn > 0.0) a += (cfg.leader_gain / hn) * hi;
        acc[i] = a;
    }
    return acc;
}

Vec3List attacker_accelerations(const SwarmState& state, const EffectivenessWeights& weights,
                                const ScenarioConfig& cfg) {
    Vec3List acc = conservative_accelerations(state, weights, cfg);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= cfg.damping * state.attacker_vel[i];
    return acc;
}

AccelCache initial_cache(const SwarmState& state, const EffectivenessWeights& weights,
                         const ScenarioConfig& cfg) {
    return {attacker_accelerations(state, weights, cfg)};
}

void verlet_step(SwarmState& state, AccelCache& cache, const EffectivenessWeights& weights,
                 const DefenderKinematics& defender_next, const ScenarioConfig& cfg,
                 std::span<const char> frozen) {
    const double dt = cfg.dt;
    const std::size_t n = state.n_attackers();
    auto is_frozen = [&](std::size_t i) { return !frozen.empty() && frozen[i]; };

    for (std::size_t i = 0; i < n; ++i) {
        if (is_frozen(i)) continue;
        state.attacker_pos[i] += dt * state.attacker_vel[i] + (0.5 * dt * dt) * cache.attacker_acc[i];
    }
    state.defender_pos = defender_next.position;
    state.defender_vel = defender_next.velocity;

    // The damping term depends on the new velocity; for linear damping the
    // trapezoidal velocity update can be solved in closed form.
    const Vec3List cons = conservative_accelerations(state, weights, cfg);
    const double denom = 1.0 + 0.5 * cfg.damping * dt;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_frozen(i)) {
            state.attacker_vel[i].setZero();
            cache.attacker_acc[i].setZero();
            continue;
        }
        const Vec3 v_new =
            (state.attacker_vel[i] + (0.5 * dt) * (cache.attacker_acc[i] + cons[i])) / denom;
        state.attacker_vel[i] = v_new;
        cache.attacker_acc[i] = cons[i] - cfg.damping * v_new;
        if (!state.attacker_pos[i].allFinite() || !v_new.allFinite())
            throw IntegrationError("integration blow-up at attacker " + std::to_string(i) +
                                       ", step " + std::to_string(state.time_index + 1),
                                   state.time_index + 1, i);
    }
    ++state.time_index;
}

}  // namespace swarmdef
