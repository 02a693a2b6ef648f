#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dara/channel.hpp"
#include "dara/phy_model.hpp"
#include "dara/rng.hpp"

namespace dara {

/// Analytic MAC timing for back-to-back saturated transmissions.
struct MacTiming {
  std::size_t payload_bytes = 1500;
  double preamble_us = 40.0;
  double sifs_us = 16.0;
  double difs_us = 34.0;
  double ack_us = 68.0;
  // A retransmission occupies a slot like any fresh frame, so the
  // per-interval counters do not depend on it.
  int max_retries = 0;

  void validate() const;
  double payload_bits() const { return 8.0 * static_cast<double>(payload_bytes); }
};

/// Seconds of channel time one frame exchange takes (data + SIFS + ACK + DIFS).
double frame_airtime(int mcs, const MacTiming& timing);

struct IntervalStats {
  int interval_index = 0;
  double time_s = 0.0;
  int mcs = 0;
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  /// One sample per acknowledged frame: the SNR the transmitter measured on the ACK.
  std::vector<double> ack_snr_samples;
  std::uint64_t delivered_bits = 0;
  double interval_s = 0.0;
  /// Channel means for the interval. forward_snr_db doubles as the
  /// out-of-band receiver report that the Ideal manager consumes.
  double forward_snr_db = 0.0;
  double reverse_snr_db = 0.0;

  /// Mean of ack_snr_samples in dB, or 0 when no frame was acknowledged.
  double mean_ack_snr_db() const;
};

struct LinkConfig {
  MacTiming timing;
  ErrorModel error_model = ErrorModel::nist();
  double interval_s = 0.1;
  /// Standard deviation of per-frame SNR around the interval mean.
  double frame_jitter_db = 0.5;

  void validate() const;
};

/// Simulates one decision interval at a fixed MCS. Each frame succeeds
/// independently; every success yields one ACK SNR sample drawn from the
/// reverse direction.
IntervalStats simulate_interval(const DirectionalSnr& snr, int mcs, const LinkConfig& link, Rng& rng);

/// Rate adaptation agent as seen by the episode driver.
class RateAgent {
 public:
  virtual ~RateAgent() = default;

  virtual std::string name() const = 0;
  /// MCS for the next interval; previous is null on the first interval.
  virtual int decide(const IntervalStats* previous) = 0;
  /// Outcome of the interval just simulated. episode_done marks the last one.
  virtual void notify(const IntervalStats& stats, bool episode_done) {
    (void)stats;
    (void)episode_done;
  }
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct EpisodeLog {
  std::string scenario;
  std::string agent;
  std::uint64_t seed = 0;
  std::vector<IntervalStats> intervals;
  std::vector<double> rewards;
};

std::vector<double> throughput_series(const EpisodeLog& log);

struct CdfPoint {
  double value;
  double probability;
};

/// Empirical CDF with one point per distinct value; last probability is 1.
std::vector<CdfPoint> cdf(std::span<const double> series);

/// Nearest-rank percentile of an ascending series.
double nearest_rank_percentile(std::span<const double> sorted, double percent);

inline constexpr std::array<double, 5> kSummaryPercentiles{10.0, 25.0, 50.0, 75.0, 90.0};

struct Summary {
  double avg_throughput_bps = 0.0;
  double avg_reward = 0.0;
  std::array<double, kSummaryPercentiles.size()> percentiles_bps{};
  std::size_t intervals = 0;
};

Summary summarize(const EpisodeLog& log);

void write_episode_csv(std::ostream& out, const EpisodeLog& log);
void write_cdf_csv(std::ostream& out, std::span<const CdfPoint> points);
void write_summary(std::ostream& out, const EpisodeLog& log, const Summary& summary);

}  // namespace dara
