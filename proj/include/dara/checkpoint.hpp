#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "dara/adam.hpp"
#include "dara/mlp.hpp"

namespace dara {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  Mlp net{default_q_dims()};
  AdamState adam;
  std::uint64_t train_step = 0;
  double gamma = 0.9;
};

inline constexpr const char* kCheckpointMagic = "DARA-CKPT v1";

/// Text format:
///   DARA-CKPT v1
///   <layer dims, space separated>
///   <train_step> <gamma>
///   W0 <out>x<in> <values...>
///   b0 <out> <values...>
///   ...
///   ADAM
///   <step> <learning_rate> <beta1> <beta2> <epsilon>
///   m.W0 ... / v.W0 ...   (same tensor convention)
/// Values are written as shortest round-trip decimals.
void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);

void checkpoint_save(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint checkpoint_load(const std::filesystem::path& path);

}  // namespace dara
