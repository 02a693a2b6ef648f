#pragma once

#include <cstdint>

#include "dara/link_sim.hpp"

namespace dara {

/// How the MCS is normalized in the reward.
enum class RewardMode {
  IndexRatio,  // n / 7, so MCS 0 always earns 0
  RateRatio,   // phy_rate(n) / phy_rate(7), MCS 0 earns 0.1
};

/// Observation SNR scale: dB / 100.
inline constexpr double kObservationScaleDb = 100.0;

struct Observation {
  double scaled_snr = 0.0;
};

/// Mean ACK SNR of the interval scaled into [0, 1]. An interval without a
/// single acknowledged frame reads as 0.
Observation observe(const IntervalStats& stats);

/// normalized_mcs x frame success ratio; 0 when nothing was attempted.
double compute_reward(int mcs, std::uint64_t attempts, std::uint64_t successes,
                      RewardMode mode = RewardMode::IndexRatio);

double compute_reward(const IntervalStats& stats, RewardMode mode = RewardMode::IndexRatio);

}  // namespace dara
