#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "swarmdef/montecarlo.hpp"
#include "swarmdef/ocp.hpp"
#include "swarmdef/optimizer.hpp"
#include "swarmdef/scenario.hpp"

namespace swarmdef {

struct ModelSeries {
    std::vector<double> q0;
    std::vector<double> mean_q_attackers;
    std::vector<double> mean_q_defenders;
};

/// P1/P2/P3 deterministic series and the Monte Carlo ensemble for one set
/// of defender trajectories, all on the same time grid.
struct ComparisonReport {
    std::vector<double> t;
    ModelSeries p1, p2, p3;
    MCStats mc;
};

ModelSeries series_of(const EngagementResult& result);

ComparisonReport run_comparison(const ScenarioConfig& cfg, const ControlPoints& cp,
                                std::size_t n_runs, std::uint64_t base_seed);

void write_comparison_csv(std::ostream& out, const ComparisonReport& report);

enum class WeaponConfig { Symmetric, AType, BType };

std::string to_string(WeaponConfig w);
WeaponConfig parse_weapon_config(const std::string& name);

/// Range advantage of 10% in distance: sigma divides a squared distance, so
/// the favored side's sigma is scaled by 1.1^2.
inline constexpr double kRangeAdvantageSigmaFactor = 1.1 * 1.1;

ScenarioConfig apply_weapon_config(const ScenarioConfig& base, WeaponConfig w);

struct TradeoffSettings {
    double spawn_radius = 1.0;  // defender initial positions sampled in this ball
    InitStrategy init = InitStrategy::RadialPicket;
};

/// Scenario with `m` defenders resampled around the HVU (seed = base rng_seed).
ScenarioConfig scenario_with_defenders(const ScenarioConfig& base, std::size_t m,
                                       const TradeoffSettings& settings);

struct TradeoffRow {
    ModelKind model = ModelKind::P1;
    std::size_t n_defenders = 0;
    WeaponConfig weapon = WeaponConfig::Symmetric;
    double cost = 1.0;
    bool feasible = false;
    std::size_t evaluations = 0;
    double seconds = 0.0;
    std::string error;  // empty unless the row's optimization failed
};

std::vector<TradeoffRow> tradeoff_sweep(const ScenarioConfig& base, ModelKind model,
                                        const std::vector<std::size_t>& m_values,
                                        WeaponConfig weapon, const OptimizerOptions& opts,
                                        const TradeoffSettings& settings);

/// `with_timing` adds the (non-deterministic) wall-clock column values;
/// without it the seconds column is written as 0.
void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffRow>& rows,
                        bool with_timing = false);

/// Smallest M whose optimized cost is below `threshold`; 0 if none.
std::size_t minimal_sufficient(const std::vector<TradeoffRow>& rows, double threshold);

/// Command-line entry point; returns the process exit status.
int cli_main(int argc, char** argv);

}  // namespace swarmdef
