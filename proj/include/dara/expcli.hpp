#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dara/channel.hpp"
#include "dara/checkpoint.hpp"
#include "dara/link_sim.hpp"
#include "dara/scenario.hpp"

namespace dara {

/// Parsed agent spec: dara:<ckpt> | dara | ideal | minstrel | const:<m>.
/// Plain "dara" means train on the scenario first, then evaluate greedily.
struct AgentSpec {
  enum class Kind { Ideal, Minstrel, Constant, DaraCheckpoint, DaraTrain };
  Kind kind = Kind::Ideal;
  int mcs = 0;
  std::string checkpoint_path;
  std::string text;

  bool is_dara() const { return kind == Kind::DaraCheckpoint || kind == Kind::DaraTrain; }
};

/// Throws ConfigError("unknown agent spec ...") on anything else.
AgentSpec parse_agent_spec(std::string_view text);

/// Agent-private randomness; depends on the spec text, not its position in a list.
std::uint64_t agent_seed(std::uint64_t seed, const AgentSpec& spec);

/// Seed of the training session behind a plain "dara" spec.
std::uint64_t dara_train_seed(std::uint64_t seed);

/// DaraTrain specs need the trained checkpoint; the others ignore it.
std::unique_ptr<RateAgent> make_agent(const AgentSpec& spec, const ScenarioConfig& scenario, std::uint64_t seed,
                                      const Checkpoint* trained = nullptr);

/// Table II style difference of another agent against DARA, in percent:
/// (dara - other) / other * 100. Negative means DARA is lower.
double percent_diff(double dara_bps, double other_bps);

struct ComparisonRow {
  std::string agent;
  double avg_throughput_bps = 0.0;
  double avg_reward = 0.0;
  /// Empty for the reference row.
  std::optional<double> diff_pct;
};

struct Comparison {
  /// First DARA agent if any, otherwise the first agent.
  std::string reference;
  std::vector<ComparisonRow> rows;
  /// logs[agent][seed]
  std::vector<std::vector<EpisodeLog>> logs;
};

/// Runs every agent on every seed. All agents see the channel realization of
/// the seed; agent randomness comes from agent_seed(). Plain "dara" trains
/// once, with dara_train_seed(seeds.front()).
Comparison run_comparison(const ScenarioConfig& scenario, const std::vector<AgentSpec>& agents,
                          const std::vector<std::uint64_t>& seeds);

void write_comparison_csv(std::ostream& out, const Comparison& comparison);
void write_comparison_table(std::ostream& out, const Comparison& comparison);

/// Per-interval channel means as seen by one run.
void write_channel_csv(std::ostream& out, const EpisodeLog& log);

// Commands. Each returns an exit status; failures print a single line to err.

/// Writes <out>, <out>.loss.csv and <out>.report.txt.
int cmd_train(const std::filesystem::path& config_path, const std::filesystem::path& out_checkpoint,
              std::uint64_t seed, std::ostream& out, std::ostream& err);

/// Writes <prefix>.intervals.csv, <prefix>.cdf.csv and <prefix>.summary.txt.
int cmd_eval(const std::filesystem::path& config_path, std::string_view agent, const std::filesystem::path& out_prefix,
             std::uint64_t seed, std::ostream& out, std::ostream& err);

/// Writes comparison.csv, comparison.txt and per-agent CDF, interval and
/// channel CSVs into out_dir.
int cmd_compare(const std::filesystem::path& config_path, const std::vector<std::string>& agents,
                const std::vector<std::uint64_t>& seeds, const std::filesystem::path& out_dir, std::ostream& out,
                std::ostream& err);

int cmd_tracegen(const SyntheticTraceParams& params, const std::filesystem::path& out_path, std::uint64_t seed,
                 std::ostream& out, std::ostream& err);

}  // namespace dara
