#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "swarmdef/types.hpp"

namespace swarmdef {

struct AgentInit {
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();

    bool operator==(const AgentInit&) const = default;
};

/// All physical and numerical parameters of one engagement.
///
/// Units are dimensionless but must be mutually consistent. The HVU is
/// stationary at `hvu_position`.
struct ScenarioConfig {
    std::size_t n_attackers = 0;
    std::size_t n_defenders = 0;
    Vec3 hvu_position = Vec3::Zero();

    // attacker-attacker interaction: repulsive below d0, attractive up to d1
    double d0 = 0.0;
    double d1 = 0.0;
    double k_rep = 0.0;
    double k_att = 0.0;
    // defender repulsion on attackers, active below s0
    double s0 = 0.0;
    double k_dref = 0.0;

    double leader_gain = 0.0;  // K
    double damping = 0.0;      // b

    double lambda_a = 0.0;
    double lambda_d = 0.0;
    double sigma_a = 0.0;
    double sigma_d = 0.0;

    double dt = 0.0;
    std::size_t n_steps = 0;
    double u_max = 0.0;
    double d_min = 0.0;
    double survival_threshold = 0.5;
    int bernstein_order = 0;

    std::vector<AgentInit> initial_attackers;
    std::vector<AgentInit> initial_defenders;
    std::uint64_t rng_seed = 0;

    double horizon() const { return dt * static_cast<double>(n_steps); }

    bool operator==(const ScenarioConfig&) const = default;
};

/// Throws ValidationError naming the first violated constraint.
void validate(const ScenarioConfig& cfg);

/// Strict JSON load: unknown fields and missing required fields are errors.
ScenarioConfig load_scenario(std::string_view json_text);
ScenarioConfig load_scenario_file(const std::string& path);

std::string save_scenario(const ScenarioConfig& cfg);

/// Positions drawn uniformly inside a sphere, deterministic in `seed`, with
/// pairwise separation at least `d_min`. Velocities are zero.
std::vector<AgentInit> default_initializer(std::size_t n, double radius, const Vec3& center,
                                           std::uint64_t seed, double d_min = 0.0);

/// Largest pairwise distance among the HVU and all initial agent positions.
double spatial_extent(const ScenarioConfig& cfg);

}  // namespace swarmdef
