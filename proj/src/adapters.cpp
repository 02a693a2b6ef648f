#include "dara/adapters.hpp"

#include <algorithm>
#include <stdexcept>

namespace dara {

Observation observe(const IntervalStats& stats) {
  if (stats.ack_snr_samples.empty()) return {0.0};
  return {std::clamp(stats.mean_ack_snr_db() / kObservationScaleDb, 0.0, 1.0)};
}

double compute_reward(int mcs, std::uint64_t attempts, std::uint64_t successes, RewardMode mode) {
  if (successes > attempts) throw std::invalid_argument("successes exceed attempts");
  const McsEntry& entry = mcs_entry(mcs);
  if (attempts == 0) return 0.0;
  const double normalized = mode == RewardMode::IndexRatio
                                ? static_cast<double>(entry.index) / (kNumMcs - 1)
                                : entry.phy_rate_bps / mcs_phy_rate(kNumMcs - 1);
  return normalized * static_cast<double>(successes) / static_cast<double>(attempts);
}

double compute_reward(const IntervalStats& stats, RewardMode mode) {
  return compute_reward(stats.mcs, stats.attempts, stats.successes, mode);
}

}  // namespace dara
