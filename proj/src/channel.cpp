#include "dara/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dara/rng.hpp"
#include "dara/text_io.hpp"

namespace dara {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double reflect_into(double value, double lo, double hi) {
  if (hi <= lo) return lo;
  // A single reflection is enough unless the step exceeds the band width.
  for (int i = 0; i < 64 && (value < lo || value > hi); ++i) {
    if (value > hi) value = 2.0 * hi - value;
    if (value < lo) value = 2.0 * lo - value;
  }
  return std::clamp(value, lo, hi);
}

}  // namespace

void MobilityModel::validate() const {
  std::visit(Overloaded{
                 [](const StaticPosition& m) {
                   if (!(m.distance_m > 0.0)) throw std::invalid_argument("static distance must be positive");
                 },
                 [](const LinearAway& m) {
                   if (!(m.start_m > 0.0)) throw std::invalid_argument("linear_away start must be positive");
                   if (!(m.speed_m_per_s >= 0.0)) throw std::invalid_argument("linear_away speed must be >= 0");
                   if (!(m.max_m >= m.start_m)) throw std::invalid_argument("linear_away max must be >= start");
                 },
                 [](const RandomTeleport& m) {
                   if (!(m.min_m > 0.0)) throw std::invalid_argument("random_teleport min must be positive");
                   if (!(m.max_m >= m.min_m)) throw std::invalid_argument("random_teleport max must be >= min");
                   if (!(m.period_s > 0.0)) throw std::invalid_argument("random_teleport period must be positive");
                 },
             },
             kind);
}

double position_at(const MobilityModel& model, double time_s) {
  if (time_s < 0.0) throw std::domain_error("time must be non-negative");
  return std::visit(Overloaded{
                        [](const StaticPosition& m) { return m.distance_m; },
                        [time_s](const LinearAway& m) {
                          return std::min(m.start_m + m.speed_m_per_s * time_s, m.max_m);
                        },
                        [&model, time_s](const RandomTeleport& m) {
                          const auto period = static_cast<std::uint64_t>(std::floor(time_s / m.period_s));
                          Rng rng(derive_seed(model.rng_seed, "teleport", period));
                          return rng.uniform(m.min_m, m.max_m);
                        },
                    },
                    model.kind);
}

void SnrTrace::validate() const {
  if (samples.empty()) throw TraceError("no samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.time_s) || !std::isfinite(s.snr_ab_db) || !std::isfinite(s.snr_ba_db)) {
      throw TraceError("non-finite value in sample " + std::to_string(i));
    }
    if (i > 0 && !(s.time_s > samples[i - 1].time_s)) {
      throw TraceError("timestamps must be strictly increasing (sample " + std::to_string(i) + ")");
    }
  }
}

SnrTrace parse_trace(std::istream& in, const std::string& source) {
  SnrTrace trace;
  trace.source = source;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw TraceError("empty file, expected header '" + std::string(kTraceHeader) + "'", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw TraceError("expected header '" + std::string(kTraceHeader) + "'", line_no);

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3) throw TraceError("expected 3 comma-separated fields", line_no);
    const auto t = parse_double(fields[0]);
    const auto ab = parse_double(fields[1]);
    const auto ba = parse_double(fields[2]);
    if (!t || !ab || !ba) throw TraceError("malformed number", line_no);
    if (!std::isfinite(*t) || !std::isfinite(*ab) || !std::isfinite(*ba)) throw TraceError("non-finite value", line_no);
    if (!trace.samples.empty() && !(*t > trace.samples.back().time_s)) {
      throw TraceError("timestamps must be strictly increasing", line_no);
    }
    trace.samples.push_back({*t, *ab, *ba});
  }
  if (trace.samples.empty()) throw TraceError("no samples");
  return trace;
}

SnrTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot open trace file '" + path.string() + "'");
  try {
    return parse_trace(in, path.string());
  } catch (const TraceError& e) {
    throw TraceError(path.string() + ": " + e.what());
  }
}

void write_trace(std::ostream& out, const SnrTrace& trace) {
  trace.validate();
  out << kTraceHeader << '\n';
  for (const auto& s : trace.samples) {
    out << format_exact(s.time_s) << ',' << format_exact(s.snr_ab_db) << ',' << format_exact(s.snr_ba_db) << '\n';
  }
}

void save_trace(const std::filesystem::path& path, const SnrTrace& trace) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw TraceError("cannot write trace file '" + path.string() + "'");
  write_trace(out, trace);
  if (!out) throw TraceError("write failed for '" + path.string() + "'");
}

void SyntheticTraceParams::validate() const {
  if (!(duration_s > 0.0)) throw std::invalid_argument("synthetic trace duration must be positive");
  if (!(sample_period_s > 0.0)) throw std::invalid_argument("synthetic trace sample period must be positive");
  if (!(walk_sigma_db >= 0.0)) throw std::invalid_argument("walk sigma must be >= 0");
  if (!(max_db >= min_db)) throw std::invalid_argument("synthetic trace bounds must satisfy min <= max");
  if (gap_jitter_db && !(*gap_jitter_db >= 0.0)) throw std::invalid_argument("gap jitter must be >= 0");
}

SnrTrace gen_synthetic_trace(const SyntheticTraceParams& params, std::uint64_t seed) {
  params.validate();
  Rng walk(derive_seed(seed, "trace-walk"));
  Rng gap(derive_seed(seed, "trace-gap"));
  const double jitter = params.gap_jitter_db.value_or(0.1 * params.walk_sigma_db);
  const auto steps = static_cast<std::size_t>(std::floor(params.duration_s / params.sample_period_s + 1e-9));

  SnrTrace trace;
  trace.source = "synthetic(seed=" + std::to_string(seed) + ")";
  trace.samples.reserve(steps + 1);
  double level = std::clamp(params.start_db.value_or(0.5 * (params.min_db + params.max_db)), params.min_db,
                            params.max_db);
  for (std::size_t k = 0; k <= steps; ++k) {
    // Nanosecond grid keeps timestamps short and strictly increasing.
    const double t = std::round(static_cast<double>(k) * params.sample_period_s * 1e9) / 1e9;
    const double reverse = level - params.mean_gap_db + gap.normal(0.0, 1.0) * jitter;
    trace.samples.push_back({t, level, reverse});
    level = reflect_into(level + walk.normal(0.0, 1.0) * params.walk_sigma_db, params.min_db, params.max_db);
  }
  return trace;
}

Channel Channel::path_loss(const RadioConstants& radio, const MobilityModel& mobility) {
  radio.validate();
  mobility.validate();
  return Channel(PathLoss{radio, mobility});
}

Channel Channel::trace(SnrTrace trace, TraceInterpolation interpolation, Direction direction) {
  trace.validate();
  return Channel(Replay{std::move(trace), interpolation, direction});
}

DirectionalSnr Channel::snr_at(double time_s) const {
  return std::visit(
      Overloaded{
          [time_s](const PathLoss& p) {
            const double snr = snr_from_distance(p.radio, position_at(p.mobility, time_s));
            return DirectionalSnr{snr, snr};
          },
          [time_s](const Replay& r) {
            const auto& samples = r.trace.samples;
            const auto after = std::upper_bound(samples.begin(), samples.end(), time_s,
                                                [](double t, const SnrSample& s) { return t < s.time_s; });
            double ab = 0.0;
            double ba = 0.0;
            if (after == samples.begin()) {
              ab = samples.front().snr_ab_db;
              ba = samples.front().snr_ba_db;
            } else if (after == samples.end()) {
              ab = samples.back().snr_ab_db;
              ba = samples.back().snr_ba_db;
            } else {
              const SnrSample& lo = *(after - 1);
              const SnrSample& hi = *after;
              if (r.interpolation == TraceInterpolation::StepHold) {
                ab = lo.snr_ab_db;
                ba = lo.snr_ba_db;
              } else {
                const double w = (time_s - lo.time_s) / (hi.time_s - lo.time_s);
                ab = lo.snr_ab_db + w * (hi.snr_ab_db - lo.snr_ab_db);
                ba = lo.snr_ba_db + w * (hi.snr_ba_db - lo.snr_ba_db);
              }
            }
            return r.direction == Direction::AtoB ? DirectionalSnr{ab, ba} : DirectionalSnr{ba, ab};
          },
      },
      source_);
}

}  // namespace dara
