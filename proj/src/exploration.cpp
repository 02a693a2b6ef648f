#include "dara/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dara {

void EpsilonSchedule::validate() const {
  if (!(start >= 0.0 && start <= 1.0 && end >= 0.0 && end <= start)) {
    throw std::invalid_argument("epsilon schedule needs 0 <= end <= start <= 1");
  }
  if (horizon == 0) throw std::invalid_argument("epsilon horizon must be positive");
  if (!(power > 0.0)) throw std::invalid_argument("epsilon decay power must be positive");
}

double epsilon_value(const EpsilonSchedule& schedule, std::uint64_t step) {
  const double remaining =
      std::max(0.0, 1.0 - static_cast<double>(step) / static_cast<double>(schedule.horizon));
  return schedule.end + (schedule.start - schedule.end) * std::pow(remaining, schedule.power);
}

int greedy_action(const Mlp& net, double state) {
  const auto q = mlp_forward(net, state);
  return static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
}

int select_action(const Mlp& net, double state, double epsilon, Rng& rng) {
  if (rng.uniform() < epsilon) return static_cast<int>(rng.below(net.output_size()));
  return greedy_action(net, state);
}

}  // namespace dara
