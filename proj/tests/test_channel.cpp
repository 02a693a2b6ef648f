#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dara/channel.hpp"
#include "support.hpp"

using namespace dara;

namespace {

MobilityModel teleport(std::uint64_t seed) { return MobilityModel{RandomTeleport{1.0, 600.0, 2.0}, seed}; }

SnrTrace two_point(double ab0, double ba0, double ab1, double ba1) {
  return SnrTrace{{{0.0, ab0, ba0}, {10.0, ab1, ba1}}, "test"};
}

}  // namespace

TEST_CASE("position_at examples") {
  CHECK(position_at(MobilityModel{StaticPosition{5.0}}, 37.0) == 5.0);
  CHECK(position_at(MobilityModel{LinearAway{5.0, 1.0, 600.0}}, 10.0) == doctest::Approx(15.0));
  CHECK(position_at(MobilityModel{LinearAway{5.0, 1.0, 600.0}}, 1000.0) == 600.0);
  const auto m = teleport(9);
  CHECK(position_at(m, 0.5) == position_at(m, 1.5));
  CHECK(position_at(m, 1.5) != position_at(m, 2.5));
  CHECK(position_at(m, 2.5) >= 1.0);
  CHECK(position_at(m, 2.5) <= 600.0);
}

TEST_CASE("teleport draws are uniform") {
  const auto m = teleport(1234);
  const int n = 10000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += position_at(m, 2.0 * k + 1.0);
  const double mean = sum / n;
  const double sigma = (600.0 - 1.0) / std::sqrt(12.0) / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean - 300.5) < 3.0 * sigma);
}

TEST_CASE("path-loss channel is symmetric and deterministic") {
  const auto ch = Channel::path_loss(RadioConstants{}, MobilityModel{StaticPosition{5.0}});
  const auto s = ch.snr_at(3.0);
  CHECK(std::abs(s.forward_db - 53.3) < 0.05);
  CHECK(s.forward_db == s.reverse_db);
  const auto a = Channel::path_loss(RadioConstants{}, teleport(5));
  const auto b = Channel::path_loss(RadioConstants{}, teleport(5));
  for (double t = 0.0; t < 30.0; t += 0.7) {
    CHECK(a.snr_at(t).forward_db == b.snr_at(t).forward_db);
    CHECK(a.snr_at(t).forward_db == a.snr_at(t).reverse_db);
  }
}

TEST_CASE("trace channel interpolation") {
  const auto hold = Channel::trace(two_point(30, 20, 30, 20), TraceInterpolation::StepHold, Direction::AtoB);
  CHECK(hold.snr_at(5.0).forward_db == 30.0);
  CHECK(hold.snr_at(5.0).reverse_db == 20.0);
  const auto lin = Channel::trace(two_point(10, 10, 20, 20), TraceInterpolation::Linear, Direction::AtoB);
  CHECK(lin.snr_at(5.0).forward_db == doctest::Approx(15.0));
  CHECK(lin.snr_at(5.0).reverse_db == doctest::Approx(15.0));
  CHECK(lin.snr_at(50.0).forward_db == 20.0);
  const auto step = Channel::trace(two_point(10, 1, 20, 2), TraceInterpolation::StepHold, Direction::AtoB);
  CHECK(step.snr_at(9.99).forward_db == 10.0);
  CHECK(step.snr_at(10.0).forward_db == 20.0);
}

TEST_CASE("B to A swaps the columns") {
  const auto ch = Channel::trace(two_point(30, 20, 30, 20), TraceInterpolation::StepHold, Direction::BtoA);
  CHECK(ch.snr_at(1.0).forward_db == 20.0);
  CHECK(ch.snr_at(1.0).reverse_db == 30.0);
}

TEST_CASE("parse_trace") {
  std::istringstream ok("time_s,snr_ab_db,snr_ba_db\n0.0,30.0,25.0\n0.1,29.5,24.0\n");
  const auto trace = parse_trace(ok);
  REQUIRE(trace.samples.size() == 2);
  CHECK(trace.samples[1].snr_ab_db == 29.5);

  std::istringstream empty("time_s,snr_ab_db,snr_ba_db\n");
  CHECK_THROWS_WITH_AS(parse_trace(empty), doctest::Contains("no samples"), TraceError);

  std::istringstream order("time_s,snr_ab_db,snr_ba_db\n0.0,1,1\n0.2,1,1\n0.1,1,1\n");
  try {
    parse_trace(order);
    FAIL("expected a parse error");
  } catch (const TraceError& e) {
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }

  std::istringstream junk("time_s,snr_ab_db,snr_ba_db\n0.0,abc,1\n");
  CHECK_THROWS_AS(parse_trace(junk), TraceError);
}

TEST_CASE("load_trace names a missing file") {
  CHECK_THROWS_WITH(load_trace("/nonexistent/trace.csv"), doctest::Contains("/nonexistent/trace.csv"));
}

TEST_CASE("synthetic traces") {
  SyntheticTraceParams p;
  p.duration_s = 20.0;
  p.walk_sigma_db = 0.0;
  auto flat = gen_synthetic_trace(p, 1);
  for (const auto& s : flat.samples) {
    CHECK(s.snr_ab_db == flat.samples.front().snr_ab_db);
    CHECK(s.snr_ab_db == s.snr_ba_db);
  }
  p.mean_gap_db = 5.0;
  for (const auto& s : gen_synthetic_trace(p, 1).samples) CHECK(s.snr_ab_db - s.snr_ba_db == 5.0);

  SyntheticTraceParams walk;
  walk.duration_s = 60.0;
  walk.walk_sigma_db = 3.0;
  const auto a = gen_synthetic_trace(walk, 42);
  const auto b = gen_synthetic_trace(walk, 42);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != gen_synthetic_trace(walk, 43).samples);
  for (const auto& s : a.samples) {
    CHECK(s.snr_ab_db >= walk.min_db);
    CHECK(s.snr_ab_db <= walk.max_db);
  }
  CHECK_NOTHROW(a.validate());
}

TEST_CASE("trace files round-trip byte for byte") {
  SyntheticTraceParams p;
  p.duration_s = 30.0;
  p.mean_gap_db = 3.0;
  const auto trace = gen_synthetic_trace(p, 77);
  const auto dir = testing::scratch_dir("trace_roundtrip");
  save_trace(dir / "a.csv", trace);
  const auto loaded = load_trace(dir / "a.csv");
  CHECK(loaded.samples == trace.samples);
  save_trace(dir / "b.csv", loaded);
  CHECK(testing::read_file(dir / "a.csv") == testing::read_file(dir / "b.csv"));
  CHECK(testing::read_file(dir / "a.csv").starts_with("time_s,snr_ab_db,snr_ba_db\n"));
}
