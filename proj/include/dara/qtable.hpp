#pragma once

#include <cstddef>
#include <vector>

namespace dara {

/// Tabular action values over discretized states.
struct QTable {
  QTable(std::size_t num_states, std::size_t num_actions, double alpha, double gamma);

  double& at(std::size_t s, std::size_t a) { return values[s * num_actions + a]; }
  double at(std::size_t s, std::size_t a) const { return values[s * num_actions + a]; }
  double max_value(std::size_t s) const;

  std::size_t num_states;
  std::size_t num_actions;
  double alpha;
  double gamma;
  std::vector<double> values;
};

/// Q(s,a) <- (1 - alpha) Q(s,a) + alpha [r + gamma max_a' Q(s_new, a')]
void qtable_update(QTable& table, std::size_t s, std::size_t a, double reward, std::size_t s_new);

}  // namespace dara
