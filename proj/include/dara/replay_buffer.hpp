#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dara/rng.hpp"

namespace dara {

/// One transition: scaled SNR before the interval, the MCS used, the reward
/// earned and the scaled SNR observed afterwards.
struct Trajectory {
  double state = 0.0;
  int action = 0;
  double reward = 0.0;
  double next_state = 0.0;
  bool terminal = false;

  bool operator==(const Trajectory&) const = default;
};

inline constexpr std::size_t kDefaultReplayCapacity = 1'000'000;

/// Fixed-capacity FIFO ring; the oldest trajectory is evicted first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = kDefaultReplayCapacity);

  void push(const Trajectory& trajectory);

  /// Uniform draws with replacement; nullopt while fewer than batch_size
  /// trajectories are stored.
  std::optional<std::vector<Trajectory>> sample(std::size_t batch_size, Rng& rng) const;

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool ready(std::size_t batch_size) const { return batch_size > 0 && size() >= batch_size; }

  /// i-th oldest stored trajectory.
  const Trajectory& at(std::size_t i) const;

 private:
  std::size_t capacity_;
  std::vector<Trajectory> items_;
  std::size_t head_ = 0;  // index of the oldest item once full
};

}  // namespace dara
