#include "dara/qtable.hpp"

#include <algorithm>
#include <stdexcept>

namespace dara {

QTable::QTable(std::size_t states, std::size_t actions, double a, double g)
    : num_states(states), num_actions(actions), alpha(a), gamma(g), values(states * actions, 0.0) {
  if (states == 0 || actions == 0) throw std::invalid_argument("QTable needs states and actions");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
}

double QTable::max_value(std::size_t s) const {
  const auto first = values.begin() + static_cast<std::ptrdiff_t>(s * num_actions);
  return *std::max_element(first, first + static_cast<std::ptrdiff_t>(num_actions));
}

void qtable_update(QTable& table, std::size_t s, std::size_t a, double reward, std::size_t s_new) {
  if (s >= table.num_states || s_new >= table.num_states || a >= table.num_actions) {
    throw std::out_of_range("qtable_update index");
  }
  const double target = reward + table.gamma * table.max_value(s_new);
  double& q = table.at(s, a);
  q = (1.0 - table.alpha) * q + table.alpha * target;
}

}  // namespace dara
