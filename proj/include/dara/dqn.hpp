#pragma once

#include <span>
#include <vector>

#include "dara/mlp.hpp"
#include "dara/replay_buffer.hpp"

namespace dara {

struct DqnLoss {
  double loss = 0.0;
  std::vector<double> grads;  // same layout as Mlp::params()
};

/// Mean squared TD error over the batch with y = r + gamma * max_a' Q_target(s', a')
/// (y = r on terminal transitions). The target network is held constant.
DqnLoss dqn_loss_and_grads(const Mlp& net, const Mlp& target_net, std::span<const Trajectory> batch, double gamma);

/// Hard copy of every parameter. Throws std::invalid_argument on shape mismatch.
void target_sync(const Mlp& net, Mlp& target_net);

}  // namespace dara
