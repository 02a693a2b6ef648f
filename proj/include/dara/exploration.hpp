#pragma once

#include <cstdint>

#include "dara/mlp.hpp"
#include "dara/rng.hpp"

namespace dara {

/// eps(t) = end + (start - end) * max(0, 1 - t/T)^power
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.1;
  std::uint64_t horizon = 1;
  double power = 1.0;

  void validate() const;
};

double epsilon_value(const EpsilonSchedule& schedule, std::uint64_t step);

/// Index of the largest Q-value; ties resolve to the lowest index.
int greedy_action(const Mlp& net, double state);

/// Epsilon-greedy over the network's outputs. Consumes one uniform draw,
/// plus one integer draw when exploring.
int select_action(const Mlp& net, double state, double epsilon, Rng& rng);

}  // namespace dara
