#include "dara/session.hpp"

#include <stdexcept>
#include <string>

#include "dara/adapters.hpp"
#include "dara/dqn.hpp"
#include "dara/episode.hpp"

namespace dara {

namespace {

std::vector<std::size_t> network_dims(const DaraHyper& hyper) {
  std::vector<std::size_t> dims{1};
  dims.insert(dims.end(), hyper.hidden_layers.begin(), hyper.hidden_layers.end());
  dims.push_back(static_cast<std::size_t>(kNumMcs));
  return dims;
}

Mlp initial_network(const DaraHyper& hyper, std::uint64_t seed) {
  Rng init(derive_seed(seed, "init"));
  return Mlp::glorot(network_dims(hyper), init);
}

}  // namespace

DaraTrainer::DaraTrainer(const DaraHyper& hyper, RewardMode reward_mode, std::uint64_t seed,
                         std::uint64_t epsilon_horizon)
    : hyper_(hyper),
      reward_mode_(reward_mode),
      schedule_{hyper.eps_start, hyper.eps_end, epsilon_horizon == 0 ? 1 : epsilon_horizon, hyper.eps_power},
      net_(initial_network(hyper, seed)),
      target_(net_),
      adam_(net_.num_params(), hyper.learning_rate),
      buffer_(hyper.buffer_capacity),
      explore_rng_(derive_seed(seed, "explore")),
      replay_rng_(derive_seed(seed, "replay")) {
  hyper_.validate();
  schedule_.validate();
}

int DaraTrainer::decide(const IntervalStats* previous) {
  pending_state_ = previous == nullptr ? 0.0 : observe(*previous).scaled_snr;
  pending_action_ = select_action(net_, pending_state_, current_epsilon(), explore_rng_);
  return pending_action_;
}

void DaraTrainer::notify(const IntervalStats& stats, bool episode_done) {
  buffer_.push(Trajectory{pending_state_, pending_action_, compute_reward(stats, reward_mode_),
                          observe(stats).scaled_snr, episode_done});
  ++pushed_;
  if (pushed_ % hyper_.train_every != 0) return;
  const auto batch = buffer_.sample(hyper_.batch_size, replay_rng_);
  if (!batch) return;
  const DqnLoss result = dqn_loss_and_grads(net_, target_, *batch, hyper_.gamma);
  adam_step(net_.params(), result.grads, adam_);
  ++train_step_;
  losses_.push_back(result.loss);
  if (train_step_ % hyper_.target_sync_period == 0) target_sync(net_, target_);
}

Checkpoint DaraTrainer::checkpoint() const {
  Checkpoint ckpt;
  ckpt.net = net_;
  ckpt.adam = adam_;
  ckpt.train_step = train_step_;
  ckpt.gamma = hyper_.gamma;
  return ckpt;
}

DaraPolicyAgent::DaraPolicyAgent(Mlp net) : net_(std::move(net)) {
  if (net_.input_size() != 1 || net_.output_size() != static_cast<std::size_t>(kNumMcs)) {
    throw std::invalid_argument("policy network must map one observation to " + std::to_string(kNumMcs) + " Q-values");
  }
}

int DaraPolicyAgent::decide(const IntervalStats* previous) {
  const double state = previous == nullptr ? 0.0 : observe(*previous).scaled_snr;
  return greedy_action(net_, state);
}

std::uint64_t planned_training_steps(const DaraHyper& hyper, std::size_t intervals_per_episode) {
  const std::uint64_t pushes = static_cast<std::uint64_t>(hyper.episodes) * intervals_per_episode;
  const std::uint64_t k = hyper.train_every;
  if (pushes < hyper.batch_size) return 0;
  // Pushes p in [batch_size, pushes] with p % k == 0.
  return pushes / k - (hyper.batch_size - 1) / k;
}

TrainReport train_session(const ScenarioConfig& scenario, std::uint64_t seed) {
  const ScenarioConfig resolved = scenario.resolved();
  resolved.validate();
  const DaraHyper& hyper = resolved.dara;
  const std::uint64_t horizon =
      hyper.eps_horizon != 0 ? hyper.eps_horizon : planned_training_steps(hyper, resolved.num_intervals());
  DaraTrainer trainer(hyper, resolved.reward_mode, seed, horizon);
  for (std::size_t e = 0; e < hyper.episodes; ++e) {
    run_episode(resolved, trainer, derive_seed(seed, "episode", e));
  }
  TrainReport report;
  report.checkpoint = trainer.checkpoint();
  report.losses = trainer.losses();
  report.trajectories = trainer.trajectories_pushed();
  report.training_steps = trainer.train_step();
  report.final_epsilon = trainer.current_epsilon();
  return report;
}

EpisodeLog eval_session(const ScenarioConfig& scenario, const Checkpoint& checkpoint, std::uint64_t seed) {
  const ScenarioConfig resolved = scenario.resolved();
  resolved.validate();
  DaraPolicyAgent agent(checkpoint.net);
  return run_episode(resolved, agent, seed);
}

}  // namespace dara
