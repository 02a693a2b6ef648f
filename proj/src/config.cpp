#include "dara/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "dara/text_io.hpp"

namespace dara {

ParseError::ParseError(const std::string& message, std::string key, std::size_t line)
    : ConfigError(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
      key_(std::move(key)),
      line_(line) {}

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
  bool used = false;
};

class Entries {
 public:
  void add(std::string key, std::string value, std::size_t line) {
    auto [it, fresh] = map_.try_emplace(std::move(key), Entry{std::move(value), line, false});
    if (!fresh) throw ParseError("duplicate key '" + it->first + "'", it->first, line);
  }

  bool has(const std::string& key) const { return map_.count(key) != 0; }

  bool has_prefix(std::string_view prefix) const {
    for (const auto& [key, entry] : map_) {
      if (key.starts_with(prefix)) return true;
    }
    return false;
  }

  const Entry* find(const std::string& key) {
    auto it = map_.find(key);
    if (it == map_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  const Entry& require(const std::string& key, const std::string& context) {
    const Entry* entry = find(key);
    if (entry == nullptr) throw ParseError("missing required key '" + key + "' for " + context, key);
    return *entry;
  }

  std::size_t line_of(const std::string& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? 0 : it->second.line;
  }

  void reject_unused() const {
    for (const auto& [key, entry] : map_) {
      if (!entry.used) throw ParseError("unknown key '" + key + "'", key, entry.line);
    }
  }

 private:
  std::map<std::string, Entry> map_;
};

double to_double(const std::string& key, const Entry& entry) {
  const auto value = parse_double(entry.value);
  if (!value) throw ParseError("key '" + key + "': expected a number, got '" + entry.value + "'", key, entry.line);
  return *value;
}

std::uint64_t to_count(const std::string& key, const Entry& entry) {
  const auto value = parse_integer(entry.value);
  if (!value || *value < 0) {
    throw ParseError("key '" + key + "': expected a non-negative integer, got '" + entry.value + "'", key, entry.line);
  }
  return static_cast<std::uint64_t>(*value);
}

std::vector<double> to_list(const std::string& key, const Entry& entry) {
  std::vector<double> values;
  for (auto token : split(entry.value, ',')) {
    const auto value = parse_double(trim(token));
    if (!value) throw ParseError("key '" + key + "': malformed list '" + entry.value + "'", key, entry.line);
    values.push_back(*value);
  }
  return values;
}

[[noreturn]] void bad_choice(const std::string& key, const Entry& entry, const std::string& allowed) {
  throw ParseError("key '" + key + "': unknown value '" + entry.value + "' (expected " + allowed + ")", key, entry.line);
}

void set_double(Entries& entries, const std::string& key, double& target, double scale = 1.0) {
  if (const Entry* e = entries.find(key)) target = to_double(key, *e) * scale;
}

template <class Int>
void set_count(Entries& entries, const std::string& key, Int& target) {
  if (const Entry* e = entries.find(key)) target = static_cast<Int>(to_count(key, *e));
}

const char* const kMobilityKeys[] = {"distance_m", "start_m", "speed_m_per_s", "max_m", "min_m", "period_s", "mobility_seed"};

MobilityModel parse_mobility(Entries& entries) {
  const Entry& kind = entries.require("kind", "the path-loss channel");
  const std::string context = "kind=" + kind.value;
  auto need = [&](const std::string& key) { return to_double(key, entries.require(key, context)); };
  MobilityModel model;
  std::vector<std::string> allowed;
  if (kind.value == "static") {
    model.kind = StaticPosition{need("distance_m")};
    allowed = {"distance_m"};
  } else if (kind.value == "linear_away") {
    LinearAway walk{need("start_m"), need("speed_m_per_s"), 1e9};
    set_double(entries, "max_m", walk.max_m);
    model.kind = walk;
    allowed = {"start_m", "speed_m_per_s", "max_m"};
  } else if (kind.value == "random_teleport") {
    model.kind = RandomTeleport{need("min_m"), need("max_m"), need("period_s")};
    allowed = {"min_m", "max_m", "period_s"};
  } else {
    bad_choice("kind", kind, "static, linear_away or random_teleport");
  }
  for (const char* key : kMobilityKeys) {
    const std::string k = key;
    if (k == "mobility_seed") continue;
    if (entries.has(k) && std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ParseError("key '" + k + "' does not apply to " + context, k, entries.line_of(k));
    }
  }
  return model;
}

SyntheticTraceSource parse_synthetic(Entries& entries) {
  SyntheticTraceSource source;
  auto& p = source.params;
  set_double(entries, "synth_duration_s", p.duration_s);
  set_double(entries, "synth_gap_db", p.mean_gap_db);
  set_double(entries, "synth_walk_sigma_db", p.walk_sigma_db);
  set_double(entries, "synth_min_db", p.min_db);
  set_double(entries, "synth_max_db", p.max_db);
  set_double(entries, "synth_sample_period_s", p.sample_period_s);
  if (const Entry* e = entries.find("synth_start_db")) p.start_db = to_double("synth_start_db", *e);
  if (const Entry* e = entries.find("synth_gap_jitter_db")) p.gap_jitter_db = to_double("synth_gap_jitter_db", *e);
  set_count(entries, "synth_seed", source.seed);
  return source;
}

void parse_channel(Entries& entries, ScenarioConfig& config, const std::filesystem::path& base_dir) {
  const bool mobility = entries.has("kind");
  const bool trace = entries.has("trace_path");
  const bool synthetic = entries.has_prefix("synth_");
  std::vector<std::string> sources;
  if (mobility) sources.push_back("kind");
  if (trace) sources.push_back("trace_path");
  if (synthetic) sources.push_back("synth_*");
  if (sources.size() > 1) {
    std::string list;
    for (const auto& s : sources) list += (list.empty() ? "" : ", ") + s;
    throw ParseError("conflicting channel sources: " + list, sources[1], entries.line_of(sources[1]));
  }
  if (sources.empty()) {
    for (const char* key : kMobilityKeys) {
      if (entries.has(key)) throw ParseError("missing required key 'kind' for mobility key '" + std::string(key) + "'", "kind");
    }
    throw ParseError("missing required key 'kind' (or trace_path, or synth_* keys) for the channel source", "kind");
  }

  if (mobility) {
    PathLossSource source{parse_mobility(entries), std::nullopt};
    if (const Entry* e = entries.find("mobility_seed")) source.mobility_seed = to_count("mobility_seed", *e);
    config.channel = source;
  } else if (trace) {
    std::filesystem::path path = entries.find("trace_path")->value;
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    config.channel = TraceFileSource{path.string()};
  } else {
    config.channel = parse_synthetic(entries);
  }
  if (mobility && entries.has("interpolation")) {
    throw ParseError("key 'interpolation' only applies to trace channels", "interpolation", entries.line_of("interpolation"));
  }
}

void parse_choices(Entries& entries, ScenarioConfig& config) {
  if (const Entry* e = entries.find("interpolation")) {
    if (e->value == "step") {
      config.interpolation = TraceInterpolation::StepHold;
    } else if (e->value == "linear") {
      config.interpolation = TraceInterpolation::Linear;
    } else {
      bad_choice("interpolation", *e, "step or linear");
    }
  }
  if (const Entry* e = entries.find("direction")) {
    const auto& v = e->value;
    if (v == "A->B" || v == "A→B" || v == "AtoB" || v == "ab") {
      config.direction = Direction::AtoB;
    } else if (v == "B->A" || v == "B→A" || v == "BtoA" || v == "ba") {
      config.direction = Direction::BtoA;
    } else {
      bad_choice("direction", *e, "A->B or B->A");
    }
  }
  if (const Entry* e = entries.find("reward")) {
    if (e->value == "index") {
      config.reward_mode = RewardMode::IndexRatio;
    } else if (e->value == "rate") {
      config.reward_mode = RewardMode::RateRatio;
    } else {
      bad_choice("reward", *e, "index or rate");
    }
  }
  const Entry* model = entries.find("error_model");
  const Entry* thresholds = entries.find("thresholds_db");
  if (model != nullptr && model->value == "threshold") {
    if (thresholds == nullptr) throw ParseError("missing required key 'thresholds_db' for error_model=threshold", "thresholds_db");
    const auto values = to_list("thresholds_db", *thresholds);
    if (values.size() != static_cast<std::size_t>(kNumMcs)) {
      throw ParseError("key 'thresholds_db': expected " + std::to_string(kNumMcs) + " values", "thresholds_db",
                       thresholds->line);
    }
    SnrThresholds t{};
    std::copy(values.begin(), values.end(), t.begin());
    config.link.error_model = ErrorModel::threshold_step(t);
  } else if (model != nullptr && model->value != "nist") {
    bad_choice("error_model", *model, "nist or threshold");
  } else if (thresholds != nullptr) {
    throw ParseError("key 'thresholds_db' requires error_model=threshold", "thresholds_db", thresholds->line);
  }
}

void parse_numbers(Entries& entries, ScenarioConfig& config) {
  if (const Entry* e = entries.find("name")) config.name = e->value;
  if (const Entry* e = entries.find("agent")) config.agent = e->value;
  set_count(entries, "seed", config.seed);

  auto& radio = config.radio;
  set_double(entries, "tx_power_dbm", radio.tx_power_dbm);
  set_double(entries, "tx_gain_dbi", radio.tx_gain_dbi);
  set_double(entries, "rx_gain_dbi", radio.rx_gain_dbi);
  set_double(entries, "frequency_mhz", radio.frequency_hz, 1e6);
  set_double(entries, "bandwidth_mhz", radio.bandwidth_hz, 1e6);
  set_double(entries, "noise_figure_db", radio.noise_figure_db);

  auto& link = config.link;
  set_double(entries, "interval_s", link.interval_s);
  set_double(entries, "frame_jitter_db", link.frame_jitter_db);
  set_count(entries, "payload_bytes", link.timing.payload_bytes);
  set_double(entries, "preamble_us", link.timing.preamble_us);
  set_double(entries, "sifs_us", link.timing.sifs_us);
  set_double(entries, "difs_us", link.timing.difs_us);
  set_double(entries, "ack_us", link.timing.ack_us);
  set_count(entries, "max_retries", link.timing.max_retries);

  set_double(entries, "duration_s", config.duration_s);
  set_double(entries, "ideal_target_ber", config.ideal_target_ber);
  set_double(entries, "minstrel_ewma_weight", config.minstrel.ewma_weight);
  set_double(entries, "minstrel_probe_fraction", config.minstrel.probe_fraction);
  set_double(entries, "minstrel_stale_after_s", config.minstrel.stale_after_s);

  auto& d = config.dara;
  set_double(entries, "gamma", d.gamma);
  set_double(entries, "learning_rate", d.learning_rate);
  set_count(entries, "batch_size", d.batch_size);
  set_count(entries, "buffer_capacity", d.buffer_capacity);
  set_double(entries, "eps_start", d.eps_start);
  set_double(entries, "eps_end", d.eps_end);
  set_double(entries, "eps_power", d.eps_power);
  set_count(entries, "eps_horizon", d.eps_horizon);
  set_count(entries, "episodes", d.episodes);
  set_count(entries, "train_every", d.train_every);
  set_count(entries, "target_sync_period", d.target_sync_period);
  if (const Entry* e = entries.find("hidden_layers")) {
    d.hidden_layers.clear();
    for (double width : to_list("hidden_layers", *e)) {
      if (!(width >= 1.0) || width != static_cast<double>(static_cast<std::size_t>(width))) {
        throw ParseError("key 'hidden_layers': widths must be positive integers", "hidden_layers", e->line);
      }
      d.hidden_layers.push_back(static_cast<std::size_t>(width));
    }
  }
}

}  // namespace

ScenarioConfig parse_scenario_config(std::string_view text, const std::filesystem::path& base_dir) {
  Entries entries;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value', got '" + std::string(line) + "'", "", line_no);
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", "", line_no);
    entries.add(std::string(key), std::string(value), line_no);
  }

  ScenarioConfig config;
  parse_channel(entries, config, base_dir);
  parse_choices(entries, config);
  parse_numbers(entries, config);
  entries.reject_unused();
  config.validate();
  return config;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_scenario_config(text.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace dara
