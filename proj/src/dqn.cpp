#include "dara/dqn.hpp"

#include <algorithm>
#include <stdexcept>

namespace dara {

DqnLoss dqn_loss_and_grads(const Mlp& net, const Mlp& target_net, std::span<const Trajectory> batch, double gamma) {
  if (batch.empty()) throw std::invalid_argument("dqn batch must not be empty");
  if (net.dims() != target_net.dims()) throw std::invalid_argument("online and target networks differ in shape");
  DqnLoss out;
  out.grads.assign(net.num_params(), 0.0);
  const double scale = 1.0 / static_cast<double>(batch.size());
  Mlp::Trace trace;
  std::vector<double> grad_output(net.output_size(), 0.0);
  for (const auto& t : batch) {
    if (t.action < 0 || static_cast<std::size_t>(t.action) >= net.output_size()) {
      throw std::out_of_range("trajectory action outside the network's action space");
    }
    double target = t.reward;
    if (!t.terminal) {
      const auto next_q = mlp_forward(target_net, t.next_state);
      target += gamma * *std::max_element(next_q.begin(), next_q.end());
    }
    const double input[] = {t.state};
    const auto q = net.forward(input, trace);
    const double error = q[static_cast<std::size_t>(t.action)] - target;
    out.loss += scale * error * error;
    std::fill(grad_output.begin(), grad_output.end(), 0.0);
    grad_output[static_cast<std::size_t>(t.action)] = 2.0 * scale * error;
    net.backward(trace, grad_output, out.grads);
  }
  return out;
}

void target_sync(const Mlp& net, Mlp& target_net) {
  if (net.dims() != target_net.dims()) throw std::invalid_argument("target_sync: network shapes differ");
  std::copy(net.params().begin(), net.params().end(), target_net.params().begin());
}

}  // namespace dara
