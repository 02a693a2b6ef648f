#include "dara/ra_classic.hpp"

#include <string>

namespace dara {

namespace {

constexpr double kThresholdLowDb = -30.0;
constexpr double kThresholdHighDb = 100.0;
constexpr double kThresholdResolutionDb = 0.01;
// Interval timestamps are sums of 0.1-ish steps; compare times with slack.
constexpr double kTimeSlack = 1e-9;

}  // namespace

int constant_rate_decide(int fixed_mcs) {
  mcs_entry(fixed_mcs);
  return fixed_mcs;
}

ConstantRateAgent::ConstantRateAgent(int mcs) : mcs_(constant_rate_decide(mcs)) {}

std::string ConstantRateAgent::name() const { return "const:" + std::to_string(mcs_); }

int ConstantRateAgent::decide(const IntervalStats* /*previous*/) { return constant_rate_decide(mcs_); }

SnrThresholds ideal_thresholds(const BerCurve& ber, double target_ber) {
  if (!(target_ber > 0.0 && target_ber < 0.5)) throw ConfigError("target BER must lie in (0, 0.5)");
  SnrThresholds thresholds{};
  for (int mcs = 0; mcs < kNumMcs; ++mcs) {
    double lo = kThresholdLowDb;
    double hi = kThresholdHighDb;
    if (ber(mcs, hi) > target_ber) {
      throw ConfigError("BER curve of MCS " + std::to_string(mcs) + " never reaches the target");
    }
    if (ber(mcs, lo) <= target_ber) {
      thresholds[static_cast<std::size_t>(mcs)] = lo;
      continue;
    }
    // Invariant: ber(lo) > target >= ber(hi).
    while (hi - lo > kThresholdResolutionDb) {
      const double mid = 0.5 * (lo + hi);
      (ber(mcs, mid) <= target_ber ? hi : lo) = mid;
    }
    thresholds[static_cast<std::size_t>(mcs)] = hi;
  }
  return thresholds;
}

SnrThresholds ideal_thresholds(const ErrorModel& model, double target_ber) {
  return ideal_thresholds([&model](int mcs, double snr_db) { return model.bit_error(snr_db, mcs); }, target_ber);
}

int ideal_select(const SnrThresholds& thresholds, std::optional<double> feedback_db) {
  if (!feedback_db) return 0;
  int chosen = 0;
  for (int mcs = 0; mcs < kNumMcs; ++mcs) {
    if (thresholds[static_cast<std::size_t>(mcs)] <= *feedback_db) chosen = mcs;
  }
  return chosen;
}

int ideal_decide(IdealState& state, const IntervalStats* previous) {
  if (previous != nullptr) state.last_feedback_snr = previous->forward_snr_db;
  return ideal_select(state.thresholds, state.last_feedback_snr);
}

IdealAgent::IdealAgent(const SnrThresholds& thresholds) {
  for (int m = 1; m < kNumMcs; ++m) {
    if (!(thresholds[static_cast<std::size_t>(m)] > thresholds[static_cast<std::size_t>(m - 1)])) {
      throw ConfigError("Ideal thresholds must be strictly increasing in MCS");
    }
  }
  state_.thresholds = thresholds;
}

int IdealAgent::decide(const IntervalStats* previous) { return ideal_decide(state_, previous); }

void MinstrelParams::validate() const {
  if (!(ewma_weight >= 0.0 && ewma_weight <= 1.0)) throw ConfigError("minstrel EWMA weight must lie in [0, 1]");
  if (!(probe_fraction >= 0.0 && probe_fraction <= 1.0)) throw ConfigError("minstrel probe fraction must lie in [0, 1]");
  if (!(stale_after_s > 0.0)) throw ConfigError("minstrel staleness window must be positive");
}

void minstrel_update(MinstrelTable& table, const IntervalStats& stats, double now, const MinstrelParams& params) {
  auto& rate = table.rates.at(static_cast<std::size_t>(stats.mcs));
  rate.window_attempts += stats.attempts;
  rate.window_successes += stats.successes;
  if (rate.window_attempts > 0) {
    const double ratio = static_cast<double>(rate.window_successes) / static_cast<double>(rate.window_attempts);
    rate.ewma_success = params.ewma_weight * rate.ewma_success + (1.0 - params.ewma_weight) * ratio;
    rate.last_sample_time = now;
  }
  rate.expected_throughput_bps = mcs_phy_rate(stats.mcs) * rate.ewma_success;
  rate.window_attempts = 0;
  rate.window_successes = 0;
}

int minstrel_best_rate(const MinstrelTable& table) {
  int best = 0;
  for (int m = 1; m < kNumMcs; ++m) {
    if (table.rates[static_cast<std::size_t>(m)].expected_throughput_bps >
        table.rates[static_cast<std::size_t>(best)].expected_throughput_bps) {
      best = m;
    }
  }
  return best;
}

int minstrel_probe_rate(const MinstrelTable& table) {
  int oldest = 0;
  for (int m = 1; m < kNumMcs; ++m) {
    const auto& candidate = table.rates[static_cast<std::size_t>(m)].last_sample_time;
    const auto& current = table.rates[static_cast<std::size_t>(oldest)].last_sample_time;
    if (!current) continue;
    if (!candidate || *candidate < *current) oldest = m;
  }
  return oldest;
}

int minstrel_decide(const MinstrelTable& table, Rng& rng, double now, const MinstrelParams& params) {
  // Always consume one draw so the stream position does not depend on the table.
  const bool probe_draw = rng.uniform() < params.probe_fraction;
  const int oldest = minstrel_probe_rate(table);
  const auto& last = table.rates[static_cast<std::size_t>(oldest)].last_sample_time;
  const bool stale = !last || now - *last > params.stale_after_s + kTimeSlack;
  if (stale || probe_draw) return oldest;
  return minstrel_best_rate(table);
}

MinstrelAgent::MinstrelAgent(const MinstrelParams& params, std::uint64_t seed) : params_(params), rng_(seed) {
  params_.validate();
}

int MinstrelAgent::decide(const IntervalStats* previous) {
  const double now = previous == nullptr ? 0.0 : previous->time_s + previous->interval_s;
  return minstrel_decide(table_, rng_, now, params_);
}

void MinstrelAgent::notify(const IntervalStats& stats, bool /*episode_done*/) {
  minstrel_update(table_, stats, stats.time_s + stats.interval_s, params_);
}

}  // namespace dara
