#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "swarmdef/dynamics.hpp"
#include "swarmdef/rng.hpp"
#include "swarmdef/scenario.hpp"

namespace swarmdef {

/// Survival probabilities of the HVU, every attacker, and every defender.
struct SurvivalVector {
    double q_hvu = 1.0;
    std::vector<double> q_attackers;
    std::vector<double> q_defenders;

    static SurvivalVector ones(std::size_t n_attackers, std::size_t n_defenders) {
        return {1.0, std::vector<double>(n_attackers, 1.0), std::vector<double>(n_defenders, 1.0)};
    }
    bool operator==(const SurvivalVector&) const = default;
};

/// Alive flags. Once an entry turns false it stays false.
struct IndexSet {
    std::vector<char> attacker_alive;
    std::vector<char> defender_alive;
    bool hvu_alive = true;

    static IndexSet all_alive(std::size_t n_attackers, std::size_t n_defenders) {
        return {std::vector<char>(n_attackers, 1), std::vector<char>(n_defenders, 1), true};
    }
    std::size_t attackers_alive() const;
    std::size_t defenders_alive() const;
    /// Binary effectiveness weights (1 alive, 0 dead).
    EffectivenessWeights as_weights() const;

    bool operator==(const IndexSet&) const = default;
};

/// Pairwise attrition rates at one instant.
struct DamageRates {
    Eigen::MatrixXd att;    // N x M: rate at which defender k destroys attacker i
    Eigen::MatrixXd def;    // M x N: rate at which attacker i destroys defender k
    Eigen::VectorXd hvu;    // N:     rate at which attacker i destroys the HVU
};

/// Weapon damage profile: 1 at 0, smoothly decreasing to 0.
using DamageFunction = double (*)(double);

/// Complementary standard normal, 2 * (1 - Phi(x)) = erfc(x / sqrt 2).
/// Throws DomainError for x < 0.
double phi(double x);

/// Gaussian alternative exp(-x^2 / 2); same endpoint behavior as phi.
double phi_gaussian(double x);

DamageRates damage_rates(const SwarmState& state, const ScenarioConfig& cfg,
                         DamageFunction damage = phi);

/// Product-form survival recursion over one time step. `eff` weights the
/// firing side: survival probabilities (P1/P2), threshold indicators (P3)
/// or alive masks (Monte Carlo). Throws ConfigError when a factor
/// 1 - rate*weight*dt would go negative.
SurvivalVector survival_step(const SurvivalVector& q, const DamageRates& rates,
                             const EffectivenessWeights& eff, double dt);

/// Marks every alive party with q <= threshold as dead. A threshold of 0
/// disables removal.
IndexSet threshold_update(const IndexSet& iset, const SurvivalVector& q, double threshold);

/// Stochastic removal: each alive party draws omega uniform on (0,1) and is
/// removed iff omega > q_next / q_prev. Draw slots are 0 for the HVU,
/// 1..N for attackers and N+1..N+M for defenders; the stream's step counter
/// advances by one per call.
IndexSet mc_removal(const IndexSet& iset, const SurvivalVector& q_prev,
                    const SurvivalVector& q_next, CounterRng& rng);

}  // namespace swarmdef
