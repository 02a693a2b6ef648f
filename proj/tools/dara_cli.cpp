// dara_cli: train / eval / compare / tracegen front end.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dara/config.hpp"
#include "dara/expcli.hpp"

namespace {

// --seed wins; otherwise the config's own seed key; otherwise 1.
std::uint64_t pick_seed(const std::optional<std::uint64_t>& flag, const std::string& config_path) {
  if (flag) return *flag;
  try {
    return dara::load_scenario_config(config_path).seed;
  } catch (const std::exception&) {
    return 1;  // the command itself reports the config error
  }
}

std::string pick_agent(const std::string& flag, const std::string& config_path) {
  if (!flag.empty()) return flag;
  try {
    return dara::load_scenario_config(config_path).agent;
  } catch (const std::exception&) {
    return "ideal";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep-RL rate adaptation experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;

  auto* train = app.add_subcommand("train", "train a DQN policy and write a checkpoint");
  train->add_option("--config", config, "scenario config file")->required();
  train->add_option("--out", out, "checkpoint path")->required();
  train->add_option("--seed", seed, "master seed (default: config seed)");

  std::string agent;
  auto* eval = app.add_subcommand("eval", "run one agent for one episode");
  eval->add_option("--config", config, "scenario config file")->required();
  eval->add_option("--agent", agent, "dara:<ckpt> | dara | ideal | minstrel | const:<m>");
  eval->add_option("--out", out, "output prefix")->required();
  eval->add_option("--seed", seed, "master seed (default: config seed)");

  std::vector<std::string> agents;
  std::vector<std::uint64_t> seeds;
  auto* compare = app.add_subcommand("compare", "run several agents on identical channels");
  compare->add_option("--config", config, "scenario config file")->required();
  compare->add_option("--agents", agents, "agent specs")->required()->delimiter(',');
  compare->add_option("--seeds", seeds, "channel seeds (default: config seed)")->delimiter(',');
  compare->add_option("--seed", seed, "single channel seed");
  compare->add_option("--out", out, "output directory")->required();

  dara::SyntheticTraceParams params;
  double start_db = 0.0;
  double gap_jitter_db = 0.0;
  std::uint64_t trace_seed = 1;
  auto* tracegen = app.add_subcommand("tracegen", "write a synthetic SNR trace");
  tracegen->add_option("--out", out, "trace path")->required();
  tracegen->add_option("--seed", trace_seed, "walk seed");
  tracegen->add_option("--duration", params.duration_s, "seconds")->capture_default_str();
  tracegen->add_option("--gap", params.mean_gap_db, "mean forward-reverse gap, dB")->capture_default_str();
  tracegen->add_option("--walk-sigma", params.walk_sigma_db, "random walk step sigma, dB")->capture_default_str();
  tracegen->add_option("--min", params.min_db, "lower reflecting bound, dB")->capture_default_str();
  tracegen->add_option("--max", params.max_db, "upper reflecting bound, dB")->capture_default_str();
  tracegen->add_option("--period", params.sample_period_s, "sample period, s")->capture_default_str();
  auto* start_opt = tracegen->add_option("--start", start_db, "walk start, dB (default: mid-range)");
  auto* jitter_opt = tracegen->add_option("--gap-jitter", gap_jitter_db, "per-sample gap noise, dB");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (*train) return dara::cmd_train(config, out, pick_seed(seed, config), std::cout, std::cerr);
  if (*eval) return dara::cmd_eval(config, pick_agent(agent, config), out, pick_seed(seed, config), std::cout, std::cerr);
  if (*compare) {
    if (seeds.empty()) seeds.push_back(pick_seed(seed, config));
    return dara::cmd_compare(config, agents, seeds, out, std::cout, std::cerr);
  }
  if (*tracegen) {
    if (start_opt->count() > 0) params.start_db = start_db;
    if (jitter_opt->count() > 0) params.gap_jitter_db = gap_jitter_db;
    return dara::cmd_tracegen(params, out, trace_seed, std::cout, std::cerr);
  }
  return 2;
}
