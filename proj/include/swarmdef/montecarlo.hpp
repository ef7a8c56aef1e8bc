#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "swarmdef/attrition.hpp"
#include "swarmdef/bernstein.hpp"
#include "swarmdef/scenario.hpp"

namespace swarmdef {

enum class Side { Hvu, Attacker, Defender };

struct RemovalEvent {
    std::size_t step = 0;  // agent is dead from time level `step` on
    std::size_t agent = 0;
    Side side = Side::Attacker;

    bool operator==(const RemovalEvent&) const = default;
};

/// One stochastic enactment of the engagement with fixed defender trajectories.
struct MCRunRecord {
    std::uint64_t seed = 0;
    bool hvu_survived = true;
    std::size_t attackers_alive = 0;
    std::size_t defenders_alive = 0;
    std::vector<double> q0_series;           // product recursion under alive masks
    std::vector<std::size_t> attackers_alive_series;
    std::vector<std::size_t> defenders_alive_series;
    std::vector<char> hvu_alive_series;
    std::vector<RemovalEvent> removals;

    bool operator==(const MCRunRecord&) const = default;
};

struct MCStats {
    std::size_t n_runs = 0;
    std::uint64_t base_seed = 0;
    std::vector<double> attacker_alive_fraction;  // per step, ensemble mean
    std::vector<double> defender_alive_fraction;
    std::vector<double> hvu_survival;             // per step frequency
    std::vector<double> hvu_halfwidth;            // 95% normal-approximation half-width
    std::vector<double> attacker_halfwidth;
    std::vector<double> defender_halfwidth;

    bool operator==(const MCStats&) const = default;
};

/// Per step: damage rates at t_k, survival recursion with alive-mask
/// weights, stochastic removal, then motion with dead agents inert.
MCRunRecord mc_run(const ScenarioConfig& cfg, const ControlPoints& cp, std::uint64_t seed);

/// n_runs replicas with seeds base_seed + i, reduced in replica order.
MCStats mc_ensemble(const ScenarioConfig& cfg, const ControlPoints& cp, std::size_t n_runs,
                    std::uint64_t base_seed);

/// Fixed-order reduction of already computed runs (exposed for testing).
MCStats aggregate(const std::vector<MCRunRecord>& runs, const ScenarioConfig& cfg,
                  std::uint64_t base_seed);

void write_mc_csv(std::ostream& out, const MCStats& stats, const ScenarioConfig& cfg);
std::string mc_summary_json(const MCStats& stats);

}  // namespace swarmdef
