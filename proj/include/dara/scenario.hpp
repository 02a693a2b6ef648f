#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dara/adapters.hpp"
#include "dara/channel.hpp"
#include "dara/link_sim.hpp"
#include "dara/ra_classic.hpp"
#include "dara/replay_buffer.hpp"

namespace dara {

/// DQN agent hyperparameters.
struct DaraHyper {
  double gamma = 0.9;
  double learning_rate = 1e-2;
  std::size_t batch_size = 64;
  std::size_t buffer_capacity = kDefaultReplayCapacity;
  double eps_start = 1.0;
  double eps_end = 0.1;
  double eps_power = 1.0;
  /// Training steps over which epsilon decays; 0 means "all training steps
  /// of the session".
  std::uint64_t eps_horizon = 0;
  std::size_t episodes = 50;
  std::size_t train_every = 1;
  std::size_t target_sync_period = 100;
  std::vector<std::size_t> hidden_layers{32, 32};

  void validate() const;
};

struct PathLossSource {
  MobilityModel mobility;
  /// Pins the mobility draws; otherwise they derive from the episode seed.
  std::optional<std::uint64_t> mobility_seed;
};

struct TraceFileSource {
  std::string path;
};

struct SyntheticTraceSource {
  SyntheticTraceParams params;
  std::uint64_t seed = 1;
};

/// A trace already in memory (a resolved file or synthetic source).
struct InlineTraceSource {
  SnrTrace trace;
};

using ChannelSource = std::variant<PathLossSource, TraceFileSource, SyntheticTraceSource, InlineTraceSource>;

/// Complete description of one experiment.
struct ScenarioConfig {
  std::string name = "scenario";
  ChannelSource channel = PathLossSource{MobilityModel{StaticPosition{5.0}}, std::nullopt};
  TraceInterpolation interpolation = TraceInterpolation::StepHold;
  Direction direction = Direction::AtoB;
  RadioConstants radio;
  LinkConfig link;
  double duration_s = 60.0;
  RewardMode reward_mode = RewardMode::IndexRatio;
  MinstrelParams minstrel;
  double ideal_target_ber = 1e-6;
  DaraHyper dara;
  std::string agent = "ideal";
  std::uint64_t seed = 1;

  void validate() const;
  std::size_t num_intervals() const;

  /// Copy with file and synthetic traces loaded into memory.
  ScenarioConfig resolved() const;

  /// Channel realization for one episode; path-loss mobility draws derive
  /// from episode_seed unless pinned.
  Channel build_channel(std::uint64_t episode_seed) const;
};

}  // namespace dara
