#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dara/phy_model.hpp"

namespace dara {

struct StaticPosition {
  double distance_m;
};

/// Receiver walks away from the transmitter at constant speed, then parks.
struct LinearAway {
  double start_m;
  double speed_m_per_s;
  double max_m;
};

/// Receiver jumps to a fresh uniform distance at every period boundary.
struct RandomTeleport {
  double min_m;
  double max_m;
  double period_s;
};

struct MobilityModel {
  std::variant<StaticPosition, LinearAway, RandomTeleport> kind;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Distance from the transmitter at time_s. RandomTeleport draws are a pure
/// function of (rng_seed, period index), so queries can come in any order.
double position_at(const MobilityModel& model, double time_s);

struct SnrSample {
  double time_s;
  double snr_ab_db;
  double snr_ba_db;

  bool operator==(const SnrSample&) const = default;
};

struct SnrTrace {
  std::vector<SnrSample> samples;
  std::string source;

  /// Throws TraceError if the trace is empty, non-finite or out of order.
  void validate() const;
};

class TraceError : public std::runtime_error {
 public:
  TraceError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr const char* kTraceHeader = "time_s,snr_ab_db,snr_ba_db";

SnrTrace parse_trace(std::istream& in, const std::string& source = "<stream>");
SnrTrace load_trace(const std::filesystem::path& path);
void write_trace(std::ostream& out, const SnrTrace& trace);
void save_trace(const std::filesystem::path& path, const SnrTrace& trace);

struct SyntheticTraceParams {
  double duration_s = 120.0;
  double mean_gap_db = 0.0;
  double walk_sigma_db = 1.0;
  double min_db = 5.0;
  double max_db = 45.0;
  double sample_period_s = 0.1;
  /// Start of the walk; midpoint of the bounds when unset.
  std::optional<double> start_db;
  /// Per-sample noise on the reverse column; 0.1 x walk_sigma_db when unset.
  std::optional<double> gap_jitter_db;

  void validate() const;
};

/// Bounded (reflecting) Gaussian random walk for snr_ab; snr_ba trails it by
/// mean_gap_db plus small per-sample noise.
SnrTrace gen_synthetic_trace(const SyntheticTraceParams& params, std::uint64_t seed);

enum class TraceInterpolation { StepHold, Linear };

/// A->B traffic uses snr_ab as the data direction; B->A swaps the columns.
enum class Direction { AtoB, BtoA };

struct DirectionalSnr {
  double forward_db;  // data frames, transmitter -> receiver
  double reverse_db;  // ACKs, receiver -> transmitter
};

/// Per-interval mean SNR source. Immutable after construction.
class Channel {
 public:
  static Channel path_loss(const RadioConstants& radio, const MobilityModel& mobility);
  static Channel trace(SnrTrace trace, TraceInterpolation interpolation, Direction direction);

  DirectionalSnr snr_at(double time_s) const;

  bool is_path_loss() const { return std::holds_alternative<PathLoss>(source_); }

 private:
  struct PathLoss {
    RadioConstants radio;
    MobilityModel mobility;
  };
  struct Replay {
    SnrTrace trace;
    TraceInterpolation interpolation;
    Direction direction;
  };

  explicit Channel(std::variant<PathLoss, Replay> source) : source_(std::move(source)) {}

  std::variant<PathLoss, Replay> source_;
};

}  // namespace dara
