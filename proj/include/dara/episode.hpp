#pragma once

#include <cstdint>

#include "dara/link_sim.hpp"
#include "dara/scenario.hpp"

namespace dara {

/// Drives one episode: decide -> simulate -> notify for every interval.
/// Per-interval frame randomness derives from (seed, interval index), so two
/// agents run with the same seed face the same channel realization.
/// Throws ContractViolation if the agent returns an MCS outside 0-7.
EpisodeLog run_episode(const ScenarioConfig& scenario, const Channel& channel, RateAgent& agent, std::uint64_t seed);
EpisodeLog run_episode(const ScenarioConfig& scenario, RateAgent& agent, std::uint64_t seed);

}  // namespace dara
