#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dara/rng.hpp"

namespace dara {

/// Fully connected network, rectifier on hidden layers, identity output.
///
/// All parameters live in one flat vector so the optimizer and the
/// checkpoint code can treat them uniformly. Layer l occupies
///   W_l: dims[l+1] x dims[l], row-major (out x in)
///   b_l: dims[l+1]
/// in that order.
class Mlp {
 public:
  /// Zero-initialized network. Needs at least an input and an output layer.
  explicit Mlp(std::vector<std::size_t> dims);

  /// Uniform(+-sqrt(6/(fan_in+fan_out))) weights, zero biases.
  static Mlp glorot(std::vector<std::size_t> dims, Rng& rng);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t num_layers() const { return dims_.size() - 1; }
  std::size_t input_size() const { return dims_.front(); }
  std::size_t output_size() const { return dims_.back(); }
  std::size_t num_params() const { return params_.size(); }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;

  std::size_t weight_offset(std::size_t layer) const;
  std::size_t bias_offset(std::size_t layer) const;

  /// Per-layer inputs and pre-activations recorded for backprop.
  struct Trace {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> pre_activations;
  };

  std::vector<double> forward(std::span<const double> input) const;
  std::vector<double> forward(std::span<const double> input, Trace& trace) const;

  /// Accumulates d(loss)/d(params) into grad given d(loss)/d(output).
  void backward(const Trace& trace, std::span<const double> grad_output, std::span<double> grad) const;

  bool operator==(const Mlp&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> params_;
};

/// Default Q-network shape: scalar observation, two hidden layers of 32, one
/// output per MCS.
std::vector<std::size_t> default_q_dims();

std::vector<double> mlp_forward(const Mlp& net, double state);

}  // namespace dara
