#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "swarmdef/scenario.hpp"
#include "swarmdef/types.hpp"

namespace swarmdef {

/// Positions and velocities of every agent at one time step. Array sizes are
/// fixed for the whole run; attrition is expressed through weights.
struct SwarmState {
    Vec3List attacker_pos;
    Vec3List attacker_vel;
    Vec3List defender_pos;
    Vec3List defender_vel;
    Vec3 hvu_pos = Vec3::Zero();
    std::size_t time_index = 0;

    std::size_t n_attackers() const { return attacker_pos.size(); }
    std::size_t n_defenders() const { return defender_pos.size(); }

    bool operator==(const SwarmState&) const = default;
};

/// Per-agent multipliers on force and fire contributions, each in [0, 1].
struct EffectivenessWeights {
    std::vector<double> attacker_w;
    std::vector<double> defender_w;

    static EffectivenessWeights ones(std::size_t n_attackers, std::size_t n_defenders) {
        return {std::vector<double>(n_attackers, 1.0), std::vector<double>(n_defenders, 1.0)};
    }
};

/// Attacker accelerations at the current state, carried between Verlet steps.
struct AccelCache {
    Vec3List attacker_acc;
};

/// Kinematic defender state prescribed for a time step.
struct DefenderKinematics {
    Vec3List position;
    Vec3List velocity;
};

/// Radii below this are evaluated at this value in every 1/r term.
inline constexpr double kSofteningRadius = 1e-6;

/// Attacker-attacker force magnitude along x_i - x_j (positive = repulsive).
/// Throws DomainError for r <= 0.
double f_inter(double r, double d0, double d1, double k_rep, double k_att);
inline double f_inter(double r, const ScenarioConfig& cfg) {
    return f_inter(r, cfg.d0, cfg.d1, cfg.k_rep, cfg.k_att);
}

/// Defender repulsion magnitude on an attacker. Throws DomainError for r <= 0.
double f_def(double r, double s0, double k_dref);
inline double f_def(double r, const ScenarioConfig& cfg) { return f_def(r, cfg.s0, cfg.k_dref); }

SwarmState initial_state(const ScenarioConfig& cfg);

/// Full attacker acceleration: weighted neighbor and defender forces, the
/// virtual-leader pull toward the HVU, and linear damping.
Vec3List attacker_accelerations(const SwarmState& state, const EffectivenessWeights& weights,
                                const ScenarioConfig& cfg);

/// Same as attacker_accelerations without the -b*v damping term.
Vec3List conservative_accelerations(const SwarmState& state, const EffectivenessWeights& weights,
                                    const ScenarioConfig& cfg);

AccelCache initial_cache(const SwarmState& state, const EffectivenessWeights& weights,
                         const ScenarioConfig& cfg);

/// One velocity-Verlet step for the attackers. `weights` are the
/// effectiveness weights valid at the new time level. Attackers flagged in
/// `frozen` keep their position and have zero velocity. Defender kinematics
/// are overwritten from `defender_next`.
void verlet_step(SwarmState& state, AccelCache& cache, const EffectivenessWeights& weights,
                 const DefenderKinematics& defender_next, const ScenarioConfig& cfg,
                 std::span<const char> frozen = {});

}  // namespace swarmdef
