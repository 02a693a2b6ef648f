#include "dara/expcli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "dara/config.hpp"
#include "dara/episode.hpp"
#include "dara/ra_classic.hpp"
#include "dara/session.hpp"
#include "dara/text_io.hpp"

namespace dara {

namespace {

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  body(out);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::filesystem::path with_suffix(const std::filesystem::path& base, const std::string& suffix) {
  return std::filesystem::path(base.string() + suffix);
}

// Single-line error reporting for every command.
int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const std::exception& e) {
    std::string message = e.what();
    for (char& c : message) {
      if (c == '\n' || c == '\r') c = ' ';
    }
    err << "error: " << message << '\n';
    return 1;
  }
}

std::string file_slug(std::size_t index, const std::string& spec) {
  std::string slug = std::to_string(index) + "-";
  for (char c : spec) {
    const bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '.';
    slug += plain ? c : '_';
  }
  return slug;
}

EpisodeLog concatenate(const std::vector<EpisodeLog>& logs) {
  EpisodeLog all;
  if (logs.empty()) return all;
  all.scenario = logs.front().scenario;
  all.agent = logs.front().agent;
  all.seed = logs.front().seed;
  for (const auto& log : logs) {
    all.intervals.insert(all.intervals.end(), log.intervals.begin(), log.intervals.end());
    all.rewards.insert(all.rewards.end(), log.rewards.begin(), log.rewards.end());
  }
  return all;
}

void write_eval_outputs(const std::filesystem::path& prefix, const EpisodeLog& log) {
  const auto series = throughput_series(log);
  const auto points = cdf(series);
  write_file(with_suffix(prefix, ".intervals.csv"), [&](std::ostream& o) { write_episode_csv(o, log); });
  write_file(with_suffix(prefix, ".cdf.csv"), [&](std::ostream& o) { write_cdf_csv(o, points); });
  write_file(with_suffix(prefix, ".summary.txt"), [&](std::ostream& o) { write_summary(o, log, summarize(log)); });
}

}  // namespace

AgentSpec parse_agent_spec(std::string_view text) {
  AgentSpec spec;
  spec.text = std::string(text);
  if (text == "ideal") {
    spec.kind = AgentSpec::Kind::Ideal;
  } else if (text == "minstrel") {
    spec.kind = AgentSpec::Kind::Minstrel;
  } else if (text == "dara") {
    spec.kind = AgentSpec::Kind::DaraTrain;
  } else if (text.starts_with("dara:") && text.size() > 5) {
    spec.kind = AgentSpec::Kind::DaraCheckpoint;
    spec.checkpoint_path = std::string(text.substr(5));
  } else if (text.starts_with("const:")) {
    const auto mcs = parse_integer(text.substr(6));
    if (!mcs || !is_valid_mcs(static_cast<int>(*mcs))) {
      throw ConfigError("unknown agent spec '" + spec.text + "' (const needs an MCS in 0-7)");
    }
    spec.kind = AgentSpec::Kind::Constant;
    spec.mcs = static_cast<int>(*mcs);
  } else {
    throw ConfigError("unknown agent spec '" + spec.text + "' (expected dara, dara:<ckpt>, ideal, minstrel or const:<m>)");
  }
  return spec;
}

std::uint64_t agent_seed(std::uint64_t seed, const AgentSpec& spec) { return derive_seed(seed, "agent:" + spec.text); }

std::uint64_t dara_train_seed(std::uint64_t seed) { return derive_seed(seed, "train"); }

std::unique_ptr<RateAgent> make_agent(const AgentSpec& spec, const ScenarioConfig& scenario, std::uint64_t seed,
                                      const Checkpoint* trained) {
  switch (spec.kind) {
    case AgentSpec::Kind::Ideal:
      return std::make_unique<IdealAgent>(ideal_thresholds(scenario.link.error_model, scenario.ideal_target_ber));
    case AgentSpec::Kind::Minstrel:
      return std::make_unique<MinstrelAgent>(scenario.minstrel, agent_seed(seed, spec));
    case AgentSpec::Kind::Constant:
      return std::make_unique<ConstantRateAgent>(spec.mcs);
    case AgentSpec::Kind::DaraCheckpoint:
      return std::make_unique<DaraPolicyAgent>(checkpoint_load(spec.checkpoint_path).net);
    case AgentSpec::Kind::DaraTrain:
      if (trained == nullptr) throw std::logic_error("agent 'dara' needs a trained checkpoint");
      return std::make_unique<DaraPolicyAgent>(trained->net);
  }
  throw std::logic_error("unhandled agent kind");
}

double percent_diff(double dara_bps, double other_bps) {
  if (other_bps == 0.0) throw std::domain_error("percent difference against zero throughput");
  return (dara_bps - other_bps) / other_bps * 100.0;
}

Comparison run_comparison(const ScenarioConfig& scenario, const std::vector<AgentSpec>& agents,
                          const std::vector<std::uint64_t>& seeds) {
  if (agents.size() < 2) throw ConfigError("compare needs at least two agents");
  if (seeds.empty()) throw ConfigError("compare needs at least one seed");
  const ScenarioConfig resolved = scenario.resolved();

  std::optional<Checkpoint> trained;
  for (const auto& spec : agents) {
    if (spec.kind == AgentSpec::Kind::DaraTrain && !trained) {
      trained = train_session(resolved, dara_train_seed(seeds.front())).checkpoint;
    }
  }

  Comparison result;
  result.logs.resize(agents.size());
  std::size_t reference = 0;
  for (std::size_t a = 0; a < agents.size(); ++a) {
    if (agents[a].is_dara()) {
      reference = a;
      break;
    }
  }
  result.reference = agents[reference].text;

  for (const auto seed : seeds) {
    const Channel channel = resolved.build_channel(seed);
    for (std::size_t a = 0; a < agents.size(); ++a) {
      auto agent = make_agent(agents[a], resolved, seed, trained ? &*trained : nullptr);
      EpisodeLog log = run_episode(resolved, channel, *agent, seed);
      log.agent = agents[a].text;
      result.logs[a].push_back(std::move(log));
    }
  }

  for (std::size_t a = 0; a < agents.size(); ++a) {
    const Summary s = summarize(concatenate(result.logs[a]));
    result.rows.push_back({agents[a].text, s.avg_throughput_bps, s.avg_reward, std::nullopt});
  }
  const double ref_bps = result.rows[reference].avg_throughput_bps;
  for (std::size_t a = 0; a < agents.size(); ++a) {
    if (a == reference || result.rows[a].avg_throughput_bps == 0.0) continue;
    result.rows[a].diff_pct = percent_diff(ref_bps, result.rows[a].avg_throughput_bps);
  }
  return result;
}

void write_comparison_csv(std::ostream& out, const Comparison& comparison) {
  out << "agent,avg_throughput_mbps,avg_reward,diff_pct\n";
  for (const auto& row : comparison.rows) {
    out << row.agent << ',' << format_sig(row.avg_throughput_bps / 1e6) << ',' << format_sig(row.avg_reward) << ',';
    if (row.diff_pct) out << format_sig(*row.diff_pct, 4);
    out << '\n';
  }
}

void write_comparison_table(std::ostream& out, const Comparison& comparison) {
  char line[160];
  std::snprintf(line, sizeof line, "%-24s %12s %10s  %s\n", "agent", "avg Mbit/s", "avg reward",
                (comparison.reference + " vs agent").c_str());
  out << line;
  for (const auto& row : comparison.rows) {
    std::string diff = "-";
    if (row.diff_pct) {
      char cell[32];
      std::snprintf(cell, sizeof cell, "%s %.1f%%", *row.diff_pct < 0.0 ? "down" : "up", std::abs(*row.diff_pct));
      diff = cell;
    }
    std::snprintf(line, sizeof line, "%-24s %12.2f %10.4f  %s\n", row.agent.c_str(), row.avg_throughput_bps / 1e6,
                  row.avg_reward, diff.c_str());
    out << line;
  }
}

void write_channel_csv(std::ostream& out, const EpisodeLog& log) {
  out << "interval,time_s,forward_snr_db,reverse_snr_db\n";
  for (const auto& s : log.intervals) {
    out << s.interval_index << ',' << format_sig(s.time_s) << ',' << format_exact(s.forward_snr_db) << ','
        << format_exact(s.reverse_snr_db) << '\n';
  }
}

int cmd_train(const std::filesystem::path& config_path, const std::filesystem::path& out_checkpoint,
              std::uint64_t seed, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig scenario = load_scenario_config(config_path).resolved();
    const TrainReport report = train_session(scenario, seed);
    checkpoint_save(out_checkpoint, report.checkpoint);
    write_file(with_suffix(out_checkpoint, ".loss.csv"), [&](std::ostream& o) {
      o << "step,loss\n";
      for (std::size_t i = 0; i < report.losses.size(); ++i) o << i + 1 << ',' << format_exact(report.losses[i]) << '\n';
    });
    write_file(with_suffix(out_checkpoint, ".report.txt"), [&](std::ostream& o) {
      o << "scenario=" << scenario.name << '\n'
        << "seed=" << seed << '\n'
        << "episodes=" << scenario.dara.episodes << '\n'
        << "trajectories=" << report.trajectories << '\n'
        << "training_steps=" << report.training_steps << '\n'
        << "final_epsilon=" << format_exact(report.final_epsilon) << '\n';
    });
    out << "trained " << report.training_steps << " steps, final epsilon " << format_sig(report.final_epsilon)
        << ", checkpoint " << out_checkpoint.string() << '\n';
  });
}

int cmd_eval(const std::filesystem::path& config_path, std::string_view agent, const std::filesystem::path& out_prefix,
             std::uint64_t seed, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const AgentSpec spec = parse_agent_spec(agent);
    const ScenarioConfig scenario = load_scenario_config(config_path).resolved();
    std::optional<Checkpoint> trained;
    if (spec.kind == AgentSpec::Kind::DaraTrain) trained = train_session(scenario, dara_train_seed(seed)).checkpoint;
    auto rate_agent = make_agent(spec, scenario, seed, trained ? &*trained : nullptr);
    EpisodeLog log = run_episode(scenario, *rate_agent, seed);
    log.agent = spec.text;
    write_eval_outputs(out_prefix, log);
    write_summary(out, log, summarize(log));
  });
}

int cmd_compare(const std::filesystem::path& config_path, const std::vector<std::string>& agents,
                const std::vector<std::uint64_t>& seeds, const std::filesystem::path& out_dir, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    std::vector<AgentSpec> specs;
    for (const auto& a : agents) specs.push_back(parse_agent_spec(a));
    const ScenarioConfig scenario = load_scenario_config(config_path);
    const Comparison comparison = run_comparison(scenario, specs, seeds);
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "comparison.csv", [&](std::ostream& o) { write_comparison_csv(o, comparison); });
    write_file(out_dir / "comparison.txt", [&](std::ostream& o) { write_comparison_table(o, comparison); });
    for (std::size_t a = 0; a < specs.size(); ++a) {
      const std::string slug = file_slug(a, specs[a].text);
      const auto& logs = comparison.logs[a];
      const auto points = cdf(throughput_series(concatenate(logs)));
      write_file(out_dir / (slug + ".cdf.csv"), [&](std::ostream& o) { write_cdf_csv(o, points); });
      for (const auto& log : logs) {
        const std::string stem = slug + ".seed" + std::to_string(log.seed);
        write_file(out_dir / (stem + ".intervals.csv"), [&](std::ostream& o) { write_episode_csv(o, log); });
        write_file(out_dir / (stem + ".channel.csv"), [&](std::ostream& o) { write_channel_csv(o, log); });
      }
    }
    write_comparison_table(out, comparison);
  });
}

int cmd_tracegen(const SyntheticTraceParams& params, const std::filesystem::path& out_path, std::uint64_t seed,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SnrTrace trace = gen_synthetic_trace(params, seed);
    save_trace(out_path, trace);
    out << "wrote " << trace.samples.size() << " samples to " << out_path.string() << '\n';
  });
}

}  // namespace dara
