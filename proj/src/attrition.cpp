#include "swarmdef/attrition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace swarmdef {

std::size_t IndexSet::attackers_alive() const {
    return static_cast<std::size_t>(std::count(attacker_alive.begin(), attacker_alive.end(), 1));
}

std::size_t IndexSet::defenders_alive() const {
    return static_cast<std::size_t>(std::count(defender_alive.begin(), defender_alive.end(), 1));
}

EffectivenessWeights IndexSet::as_weights() const {
    EffectivenessWeights w;
    w.attacker_w.reserve(attacker_alive.size());
    w.defender_w.reserve(defender_alive.size());
    for (char a : attacker_alive) w.attacker_w.push_back(a ? 1.0 : 0.0);
    for (char d : defender_alive) w.defender_w.push_back(d ? 1.0 : 0.0);
    return w;
}

double phi(double x) {
    if (x < 0.0 || std::isnan(x)) throw DomainError("phi: argument must be >= 0");
    return std::erfc(x / std::numbers::sqrt2);
}

double phi_gaussian(double x) {
    if (x < 0.0 || std::isnan(x)) throw DomainError("phi_gaussian: argument must be >= 0");
    return std::exp(-0.5 * x * x);
}

DamageRates damage_rates(const SwarmState& state, const ScenarioConfig& cfg,
                         DamageFunction damage) {
    const std::size_t n = state.n_attackers();
    const std::size_t m = state.n_defenders();
    DamageRates r;
    r.att.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    r.def.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    r.hvu.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        for (std::size_t k = 0; k < m; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            const double d2 = (state.attacker_pos[i] - state.defender_pos[k]).squaredNorm();
            r.att(ii, kk) = cfg.lambda_d * damage(d2 / cfg.sigma_d);
            r.def(kk, ii) = cfg.lambda_a * damage(d2 / cfg.sigma_a);
        }
        const double h2 = (state.hvu_pos - state.attacker_pos[i]).squaredNorm();
        r.hvu(ii) = cfg.lambda_a * damage(h2 / cfg.sigma_a);
    }
    return r;
}

namespace {

double factor(double rate, double weight, double dt, const char* what, std::size_t target,
              std::size_t shooter) {
    const double f = 1.0 - rate * weight * dt;
    if (f < 0.0)
        throw ConfigError(std::string("survival factor negative for ") + what + " " +
                          std::to_string(target) + " vs shooter " + std::to_string(shooter) +
                          ": dt too large for the rates");
    return std::min(f, 1.0);
}

}  // namespace

SurvivalVector survival_step(const SurvivalVector& q, const DamageRates& rates,
                             const EffectivenessWeights& eff, double dt) {
    const std::size_t n = q.q_attackers.size();
    const std::size_t m = q.q_defenders.size();
    SurvivalVector out = q;
    for (std::size_t j = 0; j < n; ++j) {
        double p = q.q_attackers[j];
        for (std::size_t k = 0; k < m; ++k)
            p *= factor(rates.att(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)),
                        eff.defender_w[k], dt, "attacker", j, k);
        out.q_attackers[j] = p;
    }
    for (std::size_t k = 0; k < m; ++k) {
        double p = q.q_defenders[k];
        for (std::size_t j = 0; j < n; ++j)
            p *= factor(rates.def(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)),
                        eff.attacker_w[j], dt, "defender", k, j);
        out.q_defenders[k] = p;
    }
    double p = q.q_hvu;
    for (std::size_t j = 0; j < n; ++j)
        p *= factor(rates.hvu(static_cast<Eigen::Index>(j)), eff.attacker_w[j], dt, "hvu", 0, j);
    out.q_hvu = p;
    return out;
}

IndexSet threshold_update(const IndexSet& iset, const SurvivalVector& q, double threshold) {
    IndexSet out = iset;
    if (threshold <= 0.0) return out;
    for (std::size_t j = 0; j < out.attacker_alive.size(); ++j)
        if (out.attacker_alive[j] && q.q_attackers[j] <= threshold) out.attacker_alive[j] = 0;
    for (std::size_t k = 0; k < out.defender_alive.size(); ++k)
        if (out.defender_alive[k] && q.q_defenders[k] <= threshold) out.defender_alive[k] = 0;
    if (out.hvu_alive && q.q_hvu <= threshold) out.hvu_alive = false;
    return out;
}

namespace {

bool removed(double q_prev, double q_next, CounterRng& rng, std::uint64_t slot) {
    if (!(q_prev > 0.0))
        throw ConsistencyError("mc_removal: alive agent in slot " + std::to_string(slot) +
                               " has zero survival probability");
    const double omega = rng.uniform(slot);
    return omega > q_next / q_prev;
}

}  // namespace

IndexSet mc_removal(const IndexSet& iset, const SurvivalVector& q_prev,
                    const SurvivalVector& q_next, CounterRng& rng) {
    IndexSet out = iset;
    const std::size_t n = iset.attacker_alive.size();
    if (out.hvu_alive && removed(q_prev.q_hvu, q_next.q_hvu, rng, 0)) out.hvu_alive = false;
    for (std::size_t j = 0; j < n; ++j)
        if (out.attacker_alive[j] &&
            removed(q_prev.q_attackers[j], q_next.q_attackers[j], rng, 1 + j))
            out.attacker_alive[j] = 0;
    for (std::size_t k = 0; k < out.defender_alive.size(); ++k)
        if (out.defender_alive[k] &&
            removed(q_prev.q_defenders[k], q_next.q_defenders[k], rng, 1 + n + k))
            out.defender_alive[k] = 0;
    ++rng.step;
    return out;
}

}  // namespace swarmdef
