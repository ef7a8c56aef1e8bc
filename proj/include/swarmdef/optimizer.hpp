#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swarmdef/bernstein.hpp"
#include "swarmdef/ocp.hpp"
#include "swarmdef/scenario.hpp"

namespace swarmdef {

enum class GradientMode { FiniteDifference, SimultaneousPerturbation, PatternSearch };

std::string to_string(GradientMode mode);
GradientMode parse_gradient_mode(const std::string& name);

struct OptimizerOptions {
    int max_iterations = 100;  // per penalty stage
    GradientMode gradient_mode = GradientMode::FiniteDifference;
    double fd_step = 1e-4;     // relative, in scaled coordinates
    double penalty_initial = 10.0;
    double penalty_growth = 10.0;
    double penalty_max = 1e6;
    double convergence_tol = 1e-6;
    std::uint64_t step_seed = 0;
    double initial_step = 0.05;  // scaled units; first trial step / pattern size

    void validate() const;
};

enum class InitStrategy { Hold, RadialPicket, LineToThreat };

InitStrategy parse_init_strategy(const std::string& name);

/// Initial guess; the first control point of every defender is pinned to
/// its initial position.
ControlPoints initialize_control_points(const ScenarioConfig& cfg, InitStrategy strategy);

/// Raw cost plus mu * (control_violation^2 + separation_violation^2).
double penalized_objective(ModelKind model, const ScenarioConfig& cfg, const ControlPoints& cp,
                           double mu);

struct TraceEntry {
    int stage = 0;
    int iteration = 0;
    double mu = 0.0;
    double penalized = 0.0;
    double cost = 0.0;
    double control_violation = 0.0;
    double separation_violation = 0.0;
    double step_norm = 0.0;
};

struct OptimizationTrace {
    std::vector<TraceEntry> iterates;
    ControlPoints best_cp;
    double best_cost = 0.0;
    double best_violation = 0.0;
    bool feasible = false;   // best iterate satisfies constraints to kFeasibilityTol
    std::size_t evaluations = 0;
};

inline constexpr double kFeasibilityTol = 1e-3;

OptimizationTrace optimize(ModelKind model, const ScenarioConfig& cfg, const ControlPoints& init,
                           const OptimizerOptions& opts);

std::string trace_to_json(const OptimizationTrace& trace, ModelKind model,
                          const OptimizerOptions& opts);

}  // namespace swarmdef
