#pragma once

#include <cstdint>
#include <vector>

#include "dara/adam.hpp"
#include "dara/checkpoint.hpp"
#include "dara/exploration.hpp"
#include "dara/link_sim.hpp"
#include "dara/mlp.hpp"
#include "dara/replay_buffer.hpp"
#include "dara/scenario.hpp"

namespace dara {

/// Learning agent used during a training session. Each decide() picks an
/// epsilon-greedy MCS from the last observation; each notify() stores the
/// resulting trajectory and, on the training cadence, runs one DQN update.
class DaraTrainer final : public RateAgent {
 public:
  DaraTrainer(const DaraHyper& hyper, RewardMode reward_mode, std::uint64_t seed, std::uint64_t epsilon_horizon);

  std::string name() const override { return "dara-train"; }
  int decide(const IntervalStats* previous) override;
  void notify(const IntervalStats& stats, bool episode_done) override;

  const Mlp& net() const { return net_; }
  const Mlp& target_net() const { return target_; }
  const AdamState& adam() const { return adam_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  std::uint64_t train_step() const { return train_step_; }
  std::uint64_t trajectories_pushed() const { return pushed_; }
  double current_epsilon() const { return epsilon_value(schedule_, train_step_); }
  const std::vector<double>& losses() const { return losses_; }

  Checkpoint checkpoint() const;

 private:
  DaraHyper hyper_;
  RewardMode reward_mode_;
  EpsilonSchedule schedule_;
  Mlp net_;
  Mlp target_;
  AdamState adam_;
  ReplayBuffer buffer_;
  Rng explore_rng_;
  Rng replay_rng_;
  std::uint64_t train_step_ = 0;
  std::uint64_t pushed_ = 0;
  double pending_state_ = 0.0;
  int pending_action_ = 0;
  std::vector<double> losses_;
};

/// Greedy (epsilon = 0) policy from a trained network. Never learns.
class DaraPolicyAgent final : public RateAgent {
 public:
  /// Throws std::invalid_argument unless the net maps 1 input to 8 outputs.
  explicit DaraPolicyAgent(Mlp net);

  std::string name() const override { return "dara"; }
  int decide(const IntervalStats* previous) override;

  const Mlp& net() const { return net_; }

 private:
  Mlp net_;
};

struct TrainReport {
  Checkpoint checkpoint;
  std::vector<double> losses;  // one per training step
  std::uint64_t trajectories = 0;
  std::uint64_t training_steps = 0;
  double final_epsilon = 1.0;
};

/// Number of DQN updates a session of the given shape will perform.
std::uint64_t planned_training_steps(const DaraHyper& hyper, std::size_t intervals_per_episode);

/// Runs hyper.episodes episodes of the scenario, learning online, and returns
/// the final policy. Episode e sees the channel realization of
/// derive_seed(seed, "episode", e). Deterministic given seed.
TrainReport train_session(const ScenarioConfig& scenario, std::uint64_t seed);

/// One greedy episode; no replay writes, no parameter updates.
EpisodeLog eval_session(const ScenarioConfig& scenario, const Checkpoint& checkpoint, std::uint64_t seed);

}  // namespace dara
