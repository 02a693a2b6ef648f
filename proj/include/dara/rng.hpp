#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace dara {

/// xoshiro256** seeded through splitmix64.
///
/// Every stochastic part of the lab (mobility draws, per-frame jitter,
/// exploration, replay sampling, weight init) pulls from one of these. The
/// generator algorithm and the derivation scheme in derive_seed() are the
/// reproducibility contract: the same seed gives the same bits on every
/// platform. Distribution helpers are hand-written for the same reason.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  /// Box-Muller; consumes two uniforms per call.
  double normal(double mean, double sigma);
  bool bernoulli(double p);

  /// Independent child stream keyed by (name, index), derived from the seed
  /// this generator was constructed with (not its current position).
  Rng substream(std::string_view name, std::uint64_t index = 0) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic seed for a named substream of a master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

}  // namespace dara
