#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swarmdef/attrition.hpp"
#include "swarmdef/bernstein.hpp"
#include "swarmdef/dynamics.hpp"
#include "swarmdef/scenario.hpp"

namespace swarmdef {

/// Deterministic approximation of the stochastic engagement.
///   P1: forces unweighted, fire weighted by survival probability.
///   P2: forces and fire weighted by survival probability.
///   P3: forces and fire weighted by 0/1 indicators from a survival threshold.
enum class ModelKind { P1, P2, P3 };

std::string to_string(ModelKind model);
ModelKind parse_model(const std::string& name);

struct ConstraintReport {
    double control_violation = 0.0;     // max (|u_component| - u_max)+
    double separation_violation = 0.0;  // max (d_min - |s_j - s_l|)+
    double max_control = 0.0;           // max |u_component| on the grid
    double min_separation = 0.0;        // min pairwise defender distance (inf for M = 1)
};

struct EngagementResult {
    double cost = 0.0;  // 1 - Q0(t_f)
    std::vector<SurvivalVector> q_series;
    std::vector<SwarmState> state_series;
    std::vector<IndexSet> iset_series;
    ConstraintReport constraints;
};

/// Checks control points against the scenario: defender count, order and
/// horizon. Throws ConfigError on mismatch.
void check_compatible(const ScenarioConfig& cfg, const ControlPoints& cp);

/// Forward propagation of one engagement on the grid t_k = k*dt.
EngagementResult propagate(ModelKind model, const ScenarioConfig& cfg, const ControlPoints& cp);

/// Same recursion as propagate, returning only the cost.
double propagate_cost(ModelKind model, const ScenarioConfig& cfg, const ControlPoints& cp);

/// Control-bound and separation residuals on every grid point.
ConstraintReport constraint_residuals(const ScenarioConfig& cfg, const ControlPoints& cp);

/// One row per time step: t, q0, mean attacker/defender survival, alive
/// counts; per-agent positions appended when `with_positions`.
void write_engagement_csv(std::ostream& out, const EngagementResult& result,
                          const ScenarioConfig& cfg, bool with_positions = false);

/// Shortest round-trip decimal form; used by every CSV/JSON writer.
std::string format_double(double value);

}  // namespace swarmdef
