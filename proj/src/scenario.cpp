#include "dara/scenario.hpp"

#include <cmath>

namespace dara {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void DaraHyper::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (buffer_capacity == 0 || batch_size > buffer_capacity) throw ConfigError("batch_size must not exceed buffer_capacity");
  if (!(eps_start >= 0.0 && eps_start <= 1.0 && eps_end >= 0.0 && eps_end <= eps_start)) {
    throw ConfigError("epsilon schedule needs 0 <= eps_end <= eps_start <= 1");
  }
  if (!(eps_power > 0.0)) throw ConfigError("eps_power must be positive");
  if (episodes == 0) throw ConfigError("episodes must be positive");
  if (train_every == 0) throw ConfigError("train_every must be positive");
  if (target_sync_period == 0) throw ConfigError("target_sync_period must be positive");
  for (auto width : hidden_layers) {
    if (width == 0) throw ConfigError("hidden layer widths must be positive");
  }
}

void ScenarioConfig::validate() const {
  radio.validate();
  link.validate();
  if (!(duration_s >= link.interval_s)) throw ConfigError("duration_s must be >= interval_s");
  if (!(ideal_target_ber > 0.0 && ideal_target_ber < 0.5)) throw ConfigError("ideal_target_ber must lie in (0, 0.5)");
  minstrel.validate();
  dara.validate();
  std::visit(Overloaded{
                 [](const PathLossSource& s) { s.mobility.validate(); },
                 [](const TraceFileSource& s) {
                   if (s.path.empty()) throw ConfigError("trace_path must not be empty");
                 },
                 [](const SyntheticTraceSource& s) { s.params.validate(); },
                 [](const InlineTraceSource& s) { s.trace.validate(); },
             },
             channel);
}

std::size_t ScenarioConfig::num_intervals() const {
  return static_cast<std::size_t>(std::floor(duration_s / link.interval_s + 1e-9));
}

ScenarioConfig ScenarioConfig::resolved() const {
  ScenarioConfig copy = *this;
  if (const auto* file = std::get_if<TraceFileSource>(&channel)) {
    copy.channel = InlineTraceSource{load_trace(file->path)};
  } else if (const auto* synth = std::get_if<SyntheticTraceSource>(&channel)) {
    copy.channel = InlineTraceSource{gen_synthetic_trace(synth->params, synth->seed)};
  }
  return copy;
}

Channel ScenarioConfig::build_channel(std::uint64_t episode_seed) const {
  return std::visit(Overloaded{
                        [&](const PathLossSource& s) {
                          MobilityModel mobility = s.mobility;
                          mobility.rng_seed = s.mobility_seed.value_or(derive_seed(episode_seed, "mobility"));
                          return Channel::path_loss(radio, mobility);
                        },
                        [&](const TraceFileSource& s) {
                          return Channel::trace(load_trace(s.path), interpolation, direction);
                        },
                        [&](const SyntheticTraceSource& s) {
                          return Channel::trace(gen_synthetic_trace(s.params, s.seed), interpolation, direction);
                        },
                        [&](const InlineTraceSource& s) { return Channel::trace(s.trace, interpolation, direction); },
                    },
                    channel);
}

}  // namespace dara
