#include <doctest.h>

#include <cmath>

#include "dara/episode.hpp"
#include "dara/ra_classic.hpp"

using namespace dara;

namespace {

IntervalStats report(double forward_db) {
  IntervalStats s;
  s.forward_snr_db = forward_db;
  s.reverse_snr_db = forward_db;
  return s;
}

IntervalStats window(int mcs, std::uint64_t attempts, std::uint64_t successes) {
  IntervalStats s;
  s.mcs = mcs;
  s.attempts = attempts;
  s.successes = successes;
  return s;
}

// Every rate sampled at `when`, each with the given EWMA.
MinstrelTable filled_table(double when, const std::array<double, kNumMcs>& ewma) {
  MinstrelTable t;
  for (int m = 0; m < kNumMcs; ++m) {
    auto& r = t.rates[static_cast<std::size_t>(m)];
    r.ewma_success = ewma[static_cast<std::size_t>(m)];
    r.expected_throughput_bps = mcs_phy_rate(m) * r.ewma_success;
    r.last_sample_time = when;
  }
  return t;
}

ScenarioConfig step_up_scenario() {
  SnrTrace trace;
  for (int i = 0; i < 600; ++i) {
    const double snr = i < 300 ? 5.0 : 35.0;
    trace.samples.push_back({i * 0.1, snr, snr});
  }
  ScenarioConfig sc;
  sc.channel = InlineTraceSource{trace};
  sc.duration_s = 60.0;
  sc.link.frame_jitter_db = 0.0;
  return sc;
}

int intervals_to_reach(const EpisodeLog& log, int from, int mcs) {
  for (std::size_t i = static_cast<std::size_t>(from); i < log.intervals.size(); ++i) {
    if (log.intervals[i].mcs == mcs) return static_cast<int>(i) - from;
  }
  return static_cast<int>(log.intervals.size());
}

}  // namespace

TEST_CASE("constant rate") {
  ConstantRateAgent seven(7);
  ConstantRateAgent zero(0);
  const auto r = report(60.0);
  CHECK(seven.decide(nullptr) == 7);
  CHECK(seven.decide(&r) == 7);
  CHECK(zero.decide(&r) == 0);
  CHECK(constant_rate_decide(3) == 3);
  CHECK_THROWS(ConstantRateAgent(8));
}

TEST_CASE("ideal thresholds") {
  const auto t = ideal_thresholds(ErrorModel::nist(), 1e-6);
  for (int m = 1; m < kNumMcs; ++m) CHECK(t[static_cast<std::size_t>(m)] > t[static_cast<std::size_t>(m - 1)]);

  // erfc(sqrt(g)) = 2e-6  ->  g = 11.29.., 10.5298 dB
  const auto bpsk = ideal_thresholds([](int, double snr) { return uncoded_ber(Modulation::Bpsk, db_to_linear(snr)); }, 1e-6);
  CHECK(bpsk[0] >= 10.5298);
  CHECK(bpsk[0] - 10.5298 <= 0.01);

  const auto stricter = ideal_thresholds(ErrorModel::nist(), 1e-8);
  for (int m = 0; m < kNumMcs; ++m) CHECK(stricter[static_cast<std::size_t>(m)] >= t[static_cast<std::size_t>(m)]);

  CHECK_THROWS_AS(ideal_thresholds([](int, double) { return 0.3; }, 1e-6), ConfigError);
  CHECK_THROWS_AS(ideal_thresholds(ErrorModel::nist(), 0.0), ConfigError);
}

TEST_CASE("ideal decide") {
  const auto t = ideal_thresholds(ErrorModel::nist(), 1e-6);
  IdealState state{t, std::nullopt};
  CHECK(ideal_decide(state, nullptr) == 0);
  const auto high = report(t[7] + 0.01);
  CHECK(ideal_decide(state, &high) == 7);
  const auto low = report(t[0] - 1.0);
  CHECK(ideal_decide(state, &low) == 0);
  const auto mid = report(0.5 * (t[3] + t[4]));
  CHECK(ideal_decide(state, &mid) == 3);
  CHECK_THROWS_AS(IdealAgent({1, 2, 3, 3, 5, 6, 7, 8}), ConfigError);
}

TEST_CASE("ideal decide is monotone and settles on a static channel") {
  const auto t = ideal_thresholds(ErrorModel::nist(), 1e-6);
  int last = 0;
  for (double snr = -10.0; snr <= 40.0; snr += 0.01) {
    const int m = ideal_select(t, snr);
    CHECK(m >= last);
    last = m;
  }
  ScenarioConfig sc;
  sc.channel = PathLossSource{MobilityModel{StaticPosition{200.0}}, std::nullopt};
  sc.duration_s = 5.0;
  sc.link.frame_jitter_db = 0.0;
  IdealAgent agent(t);
  const auto log = run_episode(sc, agent, 3);
  for (std::size_t i = 2; i < log.intervals.size(); ++i) CHECK(log.intervals[i].mcs == log.intervals[1].mcs);
}

TEST_CASE("minstrel ewma update") {
  MinstrelParams params;
  MinstrelTable table;
  table.rates[2].ewma_success = 0.5;
  minstrel_update(table, window(2, 10, 10), 1.0, params);
  CHECK(table.rates[2].ewma_success == doctest::Approx(0.625));
  CHECK(table.rates[2].expected_throughput_bps == doctest::Approx(0.625 * mcs_phy_rate(2)));
  CHECK(table.rates[2].window_attempts == 0);
  CHECK(table.rates[2].last_sample_time == 1.0);

  minstrel_update(table, window(2, 0, 0), 2.0, params);
  CHECK(table.rates[2].ewma_success == doctest::Approx(0.625));
  CHECK(table.rates[2].last_sample_time == 1.0);

  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const auto attempts = rng.below(300);
    const auto successes = attempts == 0 ? 0 : rng.below(attempts + 1);
    minstrel_update(table, window(4, attempts, successes), i, params);
    CHECK(table.rates[4].ewma_success >= 0.0);
    CHECK(table.rates[4].ewma_success <= 1.0);
    CHECK(table.rates[4].expected_throughput_bps >= 0.0);
  }
}

TEST_CASE("minstrel decide") {
  MinstrelParams params;
  params.stale_after_s = 0.1;
  Rng rng(1);

  MinstrelParams no_probe = params;
  no_probe.probe_fraction = 0.0;
  auto fresh = filled_table(1.0, {1, 1, 1, 1, 0.9, 0.2, 0.1, 0});
  CHECK(minstrel_decide(fresh, rng, 1.05, no_probe) == 4);

  auto stale = fresh;
  stale.rates[6].last_sample_time = 0.8;
  CHECK(minstrel_decide(stale, rng, 1.0, no_probe) == 6);

  auto tie = filled_table(1.0, {0, 0, 0, 0, 0, 0, 0, 0});
  tie.rates[2].expected_throughput_bps = 5e6;
  tie.rates[5].expected_throughput_bps = 5e6;
  CHECK(minstrel_best_rate(tie) == 2);
  CHECK(minstrel_decide(tie, rng, 1.0, no_probe) == 2);

  MinstrelTable empty;
  CHECK(minstrel_probe_rate(empty) == 0);
}

TEST_CASE("minstrel exploit choice has maximal expected throughput") {
  ScenarioConfig sc;
  sc.channel = PathLossSource{MobilityModel{RandomTeleport{1.0, 600.0, 2.0}}, std::nullopt};
  sc.duration_s = 30.0;
  MinstrelAgent agent(sc.minstrel, 4);
  MinstrelParams exploit = sc.minstrel;
  exploit.probe_fraction = 0.0;
  exploit.stale_after_s = 1e9;
  const auto log = run_episode(sc, agent, 4);
  (void)log;
  const int best = minstrel_best_rate(agent.table());
  Rng rng(0);
  CHECK(minstrel_decide(agent.table(), rng, 31.0, exploit) == best);
  for (int m = 0; m < kNumMcs; ++m) {
    CHECK(agent.table().rates[static_cast<std::size_t>(best)].expected_throughput_bps >=
          agent.table().rates[static_cast<std::size_t>(m)].expected_throughput_bps);
  }
}

TEST_CASE("minstrel reacts no faster than ideal on a step up") {
  const auto sc = step_up_scenario();
  IdealAgent ideal(ideal_thresholds(sc.link.error_model, sc.ideal_target_ber));
  const int ideal_lag = intervals_to_reach(run_episode(sc, ideal, 1), 300, 7);
  CHECK(ideal_lag <= 1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    MinstrelAgent minstrel(sc.minstrel, seed);
    CHECK(intervals_to_reach(run_episode(sc, minstrel, 1), 300, 7) >= ideal_lag);
  }
}
