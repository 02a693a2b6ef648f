#include "dara/episode.hpp"

#include <string>

namespace dara {

EpisodeLog run_episode(const ScenarioConfig& scenario, const Channel& channel, RateAgent& agent, std::uint64_t seed) {
  const std::size_t n = scenario.num_intervals();
  EpisodeLog log;
  log.scenario = scenario.name;
  log.agent = agent.name();
  log.seed = seed;
  log.intervals.reserve(n);
  log.rewards.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * scenario.link.interval_s;
    const IntervalStats* previous = log.intervals.empty() ? nullptr : &log.intervals.back();
    const int mcs = agent.decide(previous);
    if (!is_valid_mcs(mcs)) {
      throw ContractViolation("agent '" + agent.name() + "' returned MCS " + std::to_string(mcs) + " at interval " +
                              std::to_string(i));
    }
    Rng frames(derive_seed(seed, "frames", i));
    IntervalStats stats = simulate_interval(channel.snr_at(t), mcs, scenario.link, frames);
    stats.interval_index = static_cast<int>(i);
    stats.time_s = t;
    log.rewards.push_back(compute_reward(stats, scenario.reward_mode));
    log.intervals.push_back(std::move(stats));
    agent.notify(log.intervals.back(), i + 1 == n);
  }
  return log;
}

EpisodeLog run_episode(const ScenarioConfig& scenario, RateAgent& agent, std::uint64_t seed) {
  const Channel channel = scenario.build_channel(seed);
  return run_episode(scenario, channel, agent, seed);
}

}  // namespace dara
