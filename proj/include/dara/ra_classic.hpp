#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>

#include "dara/link_sim.hpp"
#include "dara/phy_model.hpp"
#include "dara/rng.hpp"

namespace dara {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int constant_rate_decide(int fixed_mcs);

class ConstantRateAgent final : public RateAgent {
 public:
  explicit ConstantRateAgent(int mcs);
  std::string name() const override;
  int decide(const IntervalStats* previous) override;

 private:
  int mcs_;
};

using SnrThresholds = std::array<double, kNumMcs>;

/// Bit error probability of an MCS at an SNR in dB.
using BerCurve = std::function<double(int mcs, double snr_db)>;

/// Smallest SNR per MCS (bisection to 0.01 dB over [-30, 100] dB) at which
/// the curve's BER is <= target_ber. Throws ConfigError when a curve never
/// crosses the target.
SnrThresholds ideal_thresholds(const BerCurve& ber, double target_ber);
SnrThresholds ideal_thresholds(const ErrorModel& model, double target_ber = 1e-6);

struct IdealState {
  SnrThresholds thresholds{};
  std::optional<double> last_feedback_snr;
};

/// Highest MCS whose threshold the feedback satisfies; MCS 0 without
/// feedback or below every threshold.
int ideal_select(const SnrThresholds& thresholds, std::optional<double> feedback_db);

/// Updates the state with the previous interval's out-of-band report and
/// returns the MCS for the next one.
int ideal_decide(IdealState& state, const IntervalStats* previous);

/// Oracle baseline: reads the receiver-side forward SNR out of band.
class IdealAgent final : public RateAgent {
 public:
  explicit IdealAgent(const SnrThresholds& thresholds);
  std::string name() const override { return "ideal"; }
  int decide(const IntervalStats* previous) override;

  const IdealState& state() const { return state_; }

 private:
  IdealState state_;
};

struct MinstrelParams {
  double ewma_weight = 0.75;
  double probe_fraction = 0.1;
  /// A rate not used for longer than this is force-probed.
  double stale_after_s = 10.0;

  void validate() const;
};

struct MinstrelRateStats {
  double ewma_success = 0.0;
  double expected_throughput_bps = 0.0;
  std::uint64_t window_attempts = 0;
  std::uint64_t window_successes = 0;
  std::optional<double> last_sample_time;
};

struct MinstrelTable {
  std::array<MinstrelRateStats, kNumMcs> rates{};
};

/// Folds one interval's counters into the EWMA of the MCS it used.
void minstrel_update(MinstrelTable& table, const IntervalStats& stats, double now, const MinstrelParams& params);

/// MCS with the highest expected throughput; ties go to the lower index.
int minstrel_best_rate(const MinstrelTable& table);

/// Least recently sampled MCS; never-sampled rates first, ties to the lower index.
int minstrel_probe_rate(const MinstrelTable& table);

/// Forced probe if some rate is stale, random probe with probe_fraction,
/// otherwise the best expected-throughput rate.
int minstrel_decide(const MinstrelTable& table, Rng& rng, double now, const MinstrelParams& params);

/// Interval-granularity approximation of Minstrel HT over the 8 SISO rates.
class MinstrelAgent final : public RateAgent {
 public:
  MinstrelAgent(const MinstrelParams& params, std::uint64_t seed);
  std::string name() const override { return "minstrel"; }
  int decide(const IntervalStats* previous) override;
  void notify(const IntervalStats& stats, bool episode_done) override;

  const MinstrelTable& table() const { return table_; }

 private:
  MinstrelParams params_;
  MinstrelTable table_;
  Rng rng_;
};

}  // namespace dara
