#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dara {

struct AdamState {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step = 0;

  AdamState() = default;
  explicit AdamState(std::size_t num_params, double lr = 1e-2)
      : learning_rate(lr), first_moment(num_params, 0.0), second_moment(num_params, 0.0) {}

  bool operator==(const AdamState&) const = default;
};

/// Bias-corrected Adam update in place. Throws std::invalid_argument when
/// params, grads and moments differ in length.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

}  // namespace dara
