#include "dara/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "dara/phy_model.hpp"

namespace dara {

Mlp::Mlp(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw std::invalid_argument("Mlp needs at least two layer sizes");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    if (dims_[l] == 0 || dims_[l + 1] == 0) throw std::invalid_argument("Mlp layer sizes must be positive");
    total += dims_[l + 1] * dims_[l] + dims_[l + 1];
  }
  params_.assign(total, 0.0);
}

Mlp Mlp::glorot(std::vector<std::size_t> dims, Rng& rng) {
  Mlp net(std::move(dims));
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const double limit = std::sqrt(6.0 / static_cast<double>(net.dims_[l] + net.dims_[l + 1]));
    for (double& w : net.weights(l)) w = rng.uniform(-limit, limit);
  }
  return net;
}

std::size_t Mlp::weight_offset(std::size_t layer) const {
  if (layer >= num_layers()) throw std::out_of_range("Mlp layer index");
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layer; ++l) offset += dims_[l + 1] * dims_[l] + dims_[l + 1];
  return offset;
}

std::size_t Mlp::bias_offset(std::size_t layer) const {
  return weight_offset(layer) + dims_[layer + 1] * dims_[layer];
}

std::span<double> Mlp::weights(std::size_t layer) {
  return std::span<double>(params_).subspan(weight_offset(layer), dims_[layer + 1] * dims_[layer]);
}

std::span<const double> Mlp::weights(std::size_t layer) const {
  return std::span<const double>(params_).subspan(weight_offset(layer), dims_[layer + 1] * dims_[layer]);
}

std::span<double> Mlp::bias(std::size_t layer) {
  return std::span<double>(params_).subspan(bias_offset(layer), dims_[layer + 1]);
}

std::span<const double> Mlp::bias(std::size_t layer) const {
  return std::span<const double>(params_).subspan(bias_offset(layer), dims_[layer + 1]);
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Trace scratch;
  return forward(input, scratch);
}

std::vector<double> Mlp::forward(std::span<const double> input, Trace& trace) const {
  if (input.size() != input_size()) throw std::invalid_argument("Mlp input size mismatch");
  trace.inputs.resize(num_layers());
  trace.pre_activations.resize(num_layers());
  std::vector<double> activation(input.begin(), input.end());
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const std::size_t in = dims_[l];
    const std::size_t out = dims_[l + 1];
    const auto w = weights(l);
    const auto b = bias(l);
    std::vector<double> z(b.begin(), b.end());
    for (std::size_t o = 0; o < out; ++o) {
      const double* row = w.data() + o * in;
      for (std::size_t i = 0; i < in; ++i) z[o] += row[i] * activation[i];
    }
    trace.inputs[l] = std::move(activation);
    trace.pre_activations[l] = z;
    const bool hidden = l + 1 < num_layers();
    if (hidden) {
      for (double& v : z) v = v > 0.0 ? v : 0.0;
    }
    activation = std::move(z);
  }
  return activation;
}

void Mlp::backward(const Trace& trace, std::span<const double> grad_output, std::span<double> grad) const {
  if (grad.size() != params_.size()) throw std::invalid_argument("gradient size mismatch");
  if (grad_output.size() != output_size()) throw std::invalid_argument("output gradient size mismatch");
  std::vector<double> delta(grad_output.begin(), grad_output.end());
  for (std::size_t l = num_layers(); l-- > 0;) {
    const std::size_t in = dims_[l];
    const std::size_t out = dims_[l + 1];
    if (l + 1 < num_layers()) {
      const auto& z = trace.pre_activations[l];
      for (std::size_t o = 0; o < out; ++o) {
        if (z[o] <= 0.0) delta[o] = 0.0;
      }
    }
    const auto& x = trace.inputs[l];
    const std::size_t w_off = weight_offset(l);
    const std::size_t b_off = w_off + out * in;
    for (std::size_t o = 0; o < out; ++o) {
      grad[b_off + o] += delta[o];
      double* row = grad.data() + w_off + o * in;
      for (std::size_t i = 0; i < in; ++i) row[i] += delta[o] * x[i];
    }
    if (l == 0) break;
    const auto w = weights(l);
    std::vector<double> upstream(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double* row = w.data() + o * in;
      for (std::size_t i = 0; i < in; ++i) upstream[i] += row[i] * delta[o];
    }
    delta = std::move(upstream);
  }
}

std::vector<std::size_t> default_q_dims() { return {1, 32, 32, static_cast<std::size_t>(kNumMcs)}; }

std::vector<double> mlp_forward(const Mlp& net, double state) {
  const double input[] = {state};
  return net.forward(input);
}

}  // namespace dara
