#include "dara/link_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "dara/text_io.hpp"

namespace dara {

void MacTiming::validate() const {
  if (payload_bytes == 0) throw std::invalid_argument("payload_bytes must be positive");
  if (!(preamble_us > 0.0) || !(sifs_us > 0.0) || !(difs_us > 0.0) || !(ack_us > 0.0)) {
    throw std::invalid_argument("MAC durations must be positive");
  }
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
}

double frame_airtime(int mcs, const MacTiming& timing) {
  const double fixed_us = timing.preamble_us + timing.sifs_us + timing.ack_us + timing.difs_us;
  return fixed_us * 1e-6 + timing.payload_bits() / mcs_phy_rate(mcs);
}

double IntervalStats::mean_ack_snr_db() const {
  if (ack_snr_samples.empty()) return 0.0;
  return std::accumulate(ack_snr_samples.begin(), ack_snr_samples.end(), 0.0) /
         static_cast<double>(ack_snr_samples.size());
}

void LinkConfig::validate() const {
  timing.validate();
  if (!(interval_s > 0.0)) throw std::invalid_argument("interval_s must be positive");
  if (!(frame_jitter_db >= 0.0)) throw std::invalid_argument("frame_jitter_db must be >= 0");
}

IntervalStats simulate_interval(const DirectionalSnr& snr, int mcs, const LinkConfig& link, Rng& rng) {
  if (!(link.interval_s > 0.0)) throw std::invalid_argument("interval_s must be positive");
  IntervalStats stats;
  stats.mcs = mcs;
  stats.interval_s = link.interval_s;
  stats.forward_snr_db = snr.forward_db;
  stats.reverse_snr_db = snr.reverse_db;
  // The epsilon absorbs representation error when the interval is an exact
  // multiple of the airtime.
  stats.attempts = static_cast<std::uint64_t>(std::floor(link.interval_s / frame_airtime(mcs, link.timing) + 1e-9));
  stats.ack_snr_samples.reserve(stats.attempts);
  for (std::uint64_t i = 0; i < stats.attempts; ++i) {
    const double frame_snr = rng.normal(snr.forward_db, link.frame_jitter_db);
    const double p = link.error_model.frame_success(frame_snr, mcs, link.timing.payload_bytes);
    if (rng.uniform() < p) {
      ++stats.successes;
      stats.ack_snr_samples.push_back(rng.normal(snr.reverse_db, link.frame_jitter_db));
    }
  }
  stats.delivered_bits = stats.successes * link.timing.payload_bytes * 8;
  return stats;
}

std::vector<double> throughput_series(const EpisodeLog& log) {
  std::vector<double> series;
  series.reserve(log.intervals.size());
  for (const auto& s : log.intervals) series.push_back(static_cast<double>(s.delivered_bits) / s.interval_s);
  return series;
}

std::vector<CdfPoint> cdf(std::span<const double> series) {
  if (series.empty()) throw std::domain_error("cdf of an empty series");
  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CdfPoint> points;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    points.push_back({sorted[i], i + 1 == sorted.size() ? 1.0 : static_cast<double>(i + 1) / n});
  }
  return points;
}

double nearest_rank_percentile(std::span<const double> sorted, double percent) {
  if (sorted.empty()) throw std::domain_error("percentile of an empty series");
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(percent / 100.0 * n - 1e-12));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

Summary summarize(const EpisodeLog& log) {
  if (log.intervals.empty()) throw std::domain_error("summary of an empty episode");
  auto series = throughput_series(log);
  Summary summary;
  summary.intervals = series.size();
  summary.avg_throughput_bps = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
  if (!log.rewards.empty()) {
    summary.avg_reward =
        std::accumulate(log.rewards.begin(), log.rewards.end(), 0.0) / static_cast<double>(log.rewards.size());
  }
  std::sort(series.begin(), series.end());
  for (std::size_t i = 0; i < kSummaryPercentiles.size(); ++i) {
    summary.percentiles_bps[i] = nearest_rank_percentile(series, kSummaryPercentiles[i]);
  }
  return summary;
}

void write_episode_csv(std::ostream& out, const EpisodeLog& log) {
  out << "interval,time_s,mcs,attempts,successes,obs_snr_db,reward,throughput_mbps\n";
  for (std::size_t i = 0; i < log.intervals.size(); ++i) {
    const auto& s = log.intervals[i];
    const double reward = i < log.rewards.size() ? log.rewards[i] : 0.0;
    const double mbps = static_cast<double>(s.delivered_bits) / s.interval_s / 1e6;
    out << s.interval_index << ',' << format_sig(s.time_s) << ',' << s.mcs << ',' << s.attempts << ','
        << s.successes << ',' << format_sig(s.mean_ack_snr_db()) << ',' << format_sig(reward) << ','
        << format_sig(mbps) << '\n';
  }
}

void write_cdf_csv(std::ostream& out, std::span<const CdfPoint> points) {
  out << "value_mbps,cum_prob\n";
  for (const auto& p : points) out << format_sig(p.value / 1e6) << ',' << format_sig(p.probability) << '\n';
}

void write_summary(std::ostream& out, const EpisodeLog& log, const Summary& summary) {
  out << "scenario=" << log.scenario << '\n';
  out << "agent=" << log.agent << '\n';
  out << "seed=" << log.seed << '\n';
  out << "intervals=" << summary.intervals << '\n';
  out << "avg_throughput_mbps=" << format_sig(summary.avg_throughput_bps / 1e6) << '\n';
  out << "avg_reward=" << format_sig(summary.avg_reward) << '\n';
  for (std::size_t i = 0; i < kSummaryPercentiles.size(); ++i) {
    out << 'p' << static_cast<int>(kSummaryPercentiles[i]) << "_mbps=" << format_sig(summary.percentiles_bps[i] / 1e6)
        << '\n';
  }
}

}  // namespace dara
