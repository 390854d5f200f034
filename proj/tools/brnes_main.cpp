#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "brnes/report.hpp"
#include "brnes/simulate.hpp"

namespace {

double parse_epsilon(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

void dump_qtables(const brnes::RunResult& run, const std::filesystem::path& dir) {
  for (std::size_t i = 0; i < run.final_tables.size(); ++i) {
    const auto path = dir / ("qtable_agent" + std::to_string(i) + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    brnes::write_qtable_csv(run.final_tables[i], out);
  }
}

int execute(const brnes::ScenarioConfig& base, int seeds, const std::string& out_dir,
            bool with_qtables) {
  base.validate();
  const std::vector<brnes::RunResult> runs = brnes::run_seeds(base, seeds);
  brnes::emit_experiment(base, runs, out_dir);
  if (with_qtables) {
    for (const brnes::RunResult& run : runs) {
      dump_qtables(run, std::filesystem::path(out_dir) /
                            ("seed_" + std::to_string(run.config.master_seed)));
    }
  }
  const brnes::MetricsRecord& last = runs.front().records.back();
  std::printf("wrote %d run(s) to %s (final sg %.2f, reward %.2f on seed %llu)\n", seeds,
              out_dir.c_str(), last.sg, last.reward,
              static_cast<unsigned long long>(runs.front().config.master_seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BRNES experience-sharing simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario and write CSV metrics");
  std::string scale = "medium";
  std::string variant = "brnes";
  std::string attack = "none";
  std::string epsilon = "1.0";
  std::string out_dir = "out";
  std::string config_path;
  double attackers = 0.0;
  int episodes = 1000;
  int seeds = 10;
  std::uint64_t seed = 1;
  int height = 0, width = 0, agents = 0, obstacles = -1;
  bool with_qtables = false;
  run->add_option("--scale", scale, "small|medium|large|custom")
      ->check(CLI::IsMember({"small", "medium", "large", "custom"}));
  run->add_option("--variant", variant, "brnes|no-defense|ldp-only")
      ->check(CLI::IsMember({"brnes", "no-defense", "ldp-only"}));
  run->add_option("--attackers", attackers, "attacker fraction of the agents");
  run->add_option("--attack", attack, "none|byzantine|inference")
      ->check(CLI::IsMember({"none", "byzantine", "inference"}));
  run->add_option("--epsilon", epsilon, "privacy budget (number or 'inf')");
  run->add_option("--episodes", episodes, "episodes per run");
  run->add_option("--seeds", seeds, "number of seeded runs");
  run->add_option("--seed", seed, "base master seed");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--config", config_path, "JSON file overriding table parameters");
  run->add_option("--height", height, "custom grid height");
  run->add_option("--width", width, "custom grid width");
  run->add_option("--agents", agents, "custom agent count");
  run->add_option("--obstacles", obstacles, "custom obstacle count");
  run->add_flag("--dump-qtables", with_qtables, "also write per-agent Q-table snapshots");
  bool log_advice = false;
  run->add_flag("--log-advice", log_advice, "record every advisor contact in advice_log.csv");

  auto* replay = app.add_subcommand("replay", "Re-run the scenario recorded in a manifest");
  std::string manifest_path;
  std::string replay_out = "replay_out";
  bool replay_qtables = false;
  replay->add_option("--manifest", manifest_path, "manifest.json of a previous run")
      ->required();
  replay->add_option("--out", replay_out, "output directory");
  replay->add_flag("--dump-qtables", replay_qtables, "also write per-agent Q-table snapshots");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      brnes::ScenarioConfig cfg =
          brnes::ScenarioConfig::preset(brnes::scale_from_string(scale));
      cfg.variant = brnes::variant_from_string(variant);
      cfg.attacker_kind = brnes::attacker_kind_from_string(attack);
      cfg.attacker_fraction = attackers;
      cfg.privacy_epsilon = parse_epsilon(epsilon);
      cfg.episodes = episodes;
      cfg.master_seed = seed;
      if (height > 0) cfg.height = height;
      if (width > 0) cfg.width = width;
      if (agents > 0) cfg.n_agents = agents;
      if (obstacles >= 0) cfg.n_obstacles = obstacles;
      cfg.log_advice = log_advice;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot read config: " + config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        brnes::apply_config_overrides(cfg, ss.str());
      }
      return execute(cfg, seeds, out_dir, with_qtables);
    }

    int seeds_recorded = 1;
    const brnes::ScenarioConfig cfg = brnes::read_manifest(manifest_path, &seeds_recorded);
    return execute(cfg, seeds_recorded, replay_out, replay_qtables);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
