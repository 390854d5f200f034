#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "brnes/report.hpp"
#include "brnes/simulate.hpp"
#include "doctest.h"

using namespace brnes;

namespace {

ScenarioConfig tiny_config() {
  ScenarioConfig cfg = ScenarioConfig::preset(Scale::Small);
  cfg.episodes = 30;
  cfg.master_seed = 7;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
    return r;
  };
  const std::vector<double> rx = ranks(xs), ry = ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

}  // namespace

TEST_CASE("presets match the three experiment scales") {
  const ScenarioConfig s = ScenarioConfig::preset(Scale::Small);
  CHECK(s.height == 5);
  CHECK(s.width == 5);
  CHECK(s.n_agents == 5);
  CHECK(s.n_obstacles == 1);
  CHECK(s.grid().effective_step_cap() == 2500);

  const ScenarioConfig m = ScenarioConfig::preset(Scale::Medium);
  CHECK(m.height == 10);
  CHECK(m.n_agents == 10);
  CHECK(m.n_obstacles == 3);
  CHECK(m.grid().effective_step_cap() == 10000);

  const ScenarioConfig l = ScenarioConfig::preset(Scale::Large);
  CHECK(l.height == 30);
  CHECK(l.n_agents == 20);
  CHECK(l.n_obstacles == 5);

  CHECK(m.grid().goal == Cell{9, 0});
}

TEST_CASE("variant resolution drives the defense switches") {
  ScenarioConfig cfg = tiny_config();
  cfg.variant = Variant::Brnes;
  CHECK(cfg.zone_enabled());
  CHECK(cfg.ldp_advisor_side());
  CHECK_FALSE(cfg.ldp_advisee_side());
  CHECK(cfg.aggregation_weight() == doctest::Approx(0.85));

  cfg.variant = Variant::LdpOnly;
  CHECK_FALSE(cfg.zone_enabled());
  CHECK_FALSE(cfg.ldp_advisor_side());
  CHECK(cfg.ldp_advisee_side());
  CHECK(cfg.aggregation_weight() == 0.0);

  cfg.variant = Variant::NoDefense;
  CHECK_FALSE(cfg.zone_enabled());
  CHECK_FALSE(cfg.ldp_advisor_side());
  CHECK_FALSE(cfg.ldp_advisee_side());
  CHECK(cfg.aggregation_weight() == 0.0);
}

TEST_CASE("invalid scenario configs fail before any episode") {
  ScenarioConfig cfg = tiny_config();
  cfg.episodes = 0;
  CHECK_THROWS_AS(run_scenario(cfg), std::invalid_argument);

  cfg = tiny_config();
  cfg.attacker_fraction = 1.5;
  CHECK_THROWS_AS(run_scenario(cfg), std::invalid_argument);

  cfg = tiny_config();
  cfg.height = 2;
  cfg.width = 2;
  CHECK_THROWS_AS(run_scenario(cfg), std::invalid_argument);
}

TEST_CASE("runs are deterministic given the master seed") {
  const ScenarioConfig cfg = tiny_config();
  const RunResult a = run_scenario(cfg);
  const RunResult b = run_scenario(cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].sg == b.records[i].sg);
    CHECK(a.records[i].reward == b.records[i].reward);
    CHECK(a.records[i].delta_q_mean == b.records[i].delta_q_mean);
    CHECK(a.records[i].tg_cumulative == b.records[i].tg_cumulative);
    CHECK(a.records[i].advice_requests == b.records[i].advice_requests);
    CHECK(a.records[i].advice_responses == b.records[i].advice_responses);
  }
  CHECK(a.heatmap == b.heatmap);
}

TEST_CASE("heatmap mass equals the steps taken") {
  const RunResult r = run_scenario(tiny_config());
  const std::uint64_t mass = std::accumulate(r.heatmap.begin(), r.heatmap.end(), 0ull);
  CHECK(mass == r.total_agent_steps);
  CHECK(r.total_agent_steps > 0);

  // Visit ledgers are the per-agent decomposition of the heatmap.
  for (std::size_t s = 0; s < r.heatmap.size(); ++s) {
    std::uint64_t from_ledgers = 0;
    for (const AgentSummary& a : r.agents) from_ledgers += a.visit_counts[s];
    CHECK(from_ledgers == r.heatmap[s]);
  }
}

TEST_CASE("metrics invariants: sg cap, non-decreasing modeled time") {
  ScenarioConfig cfg = tiny_config();
  cfg.episodes = 60;
  const RunResult r = run_scenario(cfg);
  const double cap = static_cast<double>(cfg.grid().effective_step_cap());
  double prev_tg = 0.0;
  for (const MetricsRecord& rec : r.records) {
    CHECK(rec.sg <= cap);
    CHECK(rec.tg_cumulative >= prev_tg);
    prev_tg = rec.tg_cumulative;
  }
}

TEST_CASE("sg and reward anti-correlate across episodes") {
  ScenarioConfig cfg = ScenarioConfig::preset(Scale::Small);
  cfg.episodes = 300;
  cfg.master_seed = 11;
  const RunResult r = run_scenario(cfg);
  std::vector<double> sg, reward;
  for (const MetricsRecord& rec : r.records) {
    sg.push_back(rec.sg);
    reward.push_back(rec.reward);
  }
  CHECK(spearman(sg, reward) < 0.0);
}

TEST_CASE("convergence series smoothing") {
  std::vector<MetricsRecord> records(6);
  const double raw[6] = {4.0, 2.0, 0.0, 6.0, 2.0, 1.0};
  for (int i = 0; i < 6; ++i) {
    records[i].episode = i + 1;
    records[i].delta_q_mean = raw[i];
  }

  const std::vector<double> identity = convergence_series(records, 1);
  for (int i = 0; i < 6; ++i) CHECK(identity[i] == raw[i]);

  const std::vector<double> w2 = convergence_series(records, 2);
  CHECK(w2[0] == doctest::Approx(4.0));
  CHECK(w2[1] == doctest::Approx(3.0));
  CHECK(w2[3] == doctest::Approx(3.0));

  for (auto& rec : records) rec.delta_q_mean = 0.0;  // no learning, e.g. alpha -> 0
  for (double v : convergence_series(records, 3)) CHECK(v == 0.0);

  CHECK_THROWS_AS((void)convergence_series(records, 0), std::invalid_argument);
}

TEST_CASE("first_sustained_below finds the stabilization index") {
  CHECK(first_sustained_below({1.0, 0.2, 0.01, 0.02, -0.03}, 0.05) == 2);
  CHECK(first_sustained_below({0.01, 0.02, 0.9}, 0.05) == 3);  // never sustained
  CHECK(first_sustained_below({0.01, 0.02, 0.03}, 0.05) == 0);
}

TEST_CASE("csv emission shapes and byte determinism") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "brnes_test_emit";
  std::filesystem::remove_all(dir);

  ScenarioConfig cfg = tiny_config();
  cfg.episodes = 25;
  const RunResult run = run_scenario(cfg);
  emit_run(run, dir.string());

  const std::string metrics = slurp(dir / "metrics.csv");
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 26);  // header + rows
  CHECK(metrics.rfind("episode,sg,reward,delta_q_mean,tg_cumulative,"
                      "advice_requests,advice_responses\n", 0) == 0);

  const std::string heatmap = slurp(dir / "heatmap.csv");
  CHECK(std::count(heatmap.begin(), heatmap.end(), '\n') == 26);  // header + 25 cells
  std::uint64_t mass = 0;
  {
    std::istringstream in(heatmap);
    std::string line;
    std::getline(in, line);
    int x, y;
    std::uint64_t v;
    char c1, c2;
    while (std::getline(in, line)) {
      std::istringstream row(line);
      row >> x >> c1 >> y >> c2 >> v;
      mass += v;
    }
  }
  CHECK(mass == run.total_agent_steps);

  // Replaying the manifest reproduces the files byte for byte.
  int seeds = 0;
  const ScenarioConfig replayed_cfg =
      read_manifest((dir / "manifest.json").string(), &seeds);
  CHECK(seeds == 1);
  const RunResult replay = run_scenario(replayed_cfg);
  const std::filesystem::path dir2 = dir / "replay";
  emit_run(replay, dir2.string());
  CHECK(slurp(dir2 / "metrics.csv") == metrics);
  CHECK(slurp(dir2 / "heatmap.csv") == heatmap);

  CHECK_THROWS_WITH_AS(write_metrics_csv(run.records, "/nonexistent-dir/x/metrics.csv"),
                       doctest::Contains("/nonexistent-dir/x/metrics.csv"),
                       std::runtime_error);

  std::filesystem::remove_all(dir);
}

TEST_CASE("manifest json round trip preserves every field") {
  ScenarioConfig cfg = ScenarioConfig::preset(Scale::Medium);
  cfg.variant = Variant::LdpOnly;
  cfg.attacker_kind = AttackerKind::Byzantine;
  cfg.attacker_fraction = 0.3;
  cfg.privacy_epsilon = 0.5;
  cfg.master_seed = 991;
  cfg.params.alpha = 0.2;
  cfg.budget_advisor = 777;
  cfg.bernoulli_gates = true;

  const std::string text = to_manifest_json(cfg, 10);
  int seeds = 0;
  const ScenarioConfig back = from_manifest_json(text, &seeds);
  CHECK(seeds == 10);
  CHECK(back.variant == cfg.variant);
  CHECK(back.attacker_kind == cfg.attacker_kind);
  CHECK(back.attacker_fraction == cfg.attacker_fraction);
  CHECK(back.privacy_epsilon == cfg.privacy_epsilon);
  CHECK(back.master_seed == cfg.master_seed);
  CHECK(back.params.alpha == cfg.params.alpha);
  CHECK(back.budget_advisor == cfg.budget_advisor);
  CHECK(back.bernoulli_gates == cfg.bernoulli_gates);

  ScenarioConfig inf_cfg = cfg;
  inf_cfg.privacy_epsilon = std::numeric_limits<double>::infinity();
  const ScenarioConfig inf_back = from_manifest_json(to_manifest_json(inf_cfg, 1));
  CHECK(std::isinf(inf_back.privacy_epsilon));
}

TEST_CASE("table parameter overrides") {
  ScenarioConfig cfg = tiny_config();
  apply_config_overrides(cfg, R"({"alpha": 0.25, "phi_goal": 20.0, "tau": 5,
                                  "privacy_epsilon": "inf", "budget_advisee": 123})");
  CHECK(cfg.params.alpha == 0.25);
  CHECK(cfg.rewards.phi_goal == 20.0);
  CHECK(cfg.params.tau == 5);
  CHECK(std::isinf(cfg.privacy_epsilon));
  CHECK(cfg.budget_advisee == 123);
}

TEST_CASE("aggregate csv reports mean and spread across seeds") {
  ScenarioConfig cfg = tiny_config();
  cfg.episodes = 10;
  const std::vector<RunResult> runs = run_seeds(cfg, 3);
  REQUIRE(runs.size() == 3);
  CHECK(runs[0].config.master_seed + 1 == runs[1].config.master_seed);

  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "brnes_test_agg";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_aggregate_csv(runs, (dir / "aggregate.csv").string());
  const std::string agg = slurp(dir / "aggregate.csv");
  CHECK(std::count(agg.begin(), agg.end(), '\n') == 11);
  CHECK(agg.rfind("episode,sg_mean,sg_std,reward_mean,reward_std,"
                  "delta_q_mean,delta_q_std\n", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("byzantine runs report attacker flags and keep budgets bounded") {
  ScenarioConfig cfg = ScenarioConfig::preset(Scale::Small);
  cfg.episodes = 150;
  cfg.attacker_kind = AttackerKind::Byzantine;
  cfg.attacker_fraction = 0.2;
  cfg.variant = Variant::NoDefense;
  cfg.budget_advisee = 50;  // small budgets so exhaustion is reachable
  cfg.budget_advisor = 40;
  cfg.master_seed = 3;
  const RunResult r = run_scenario(cfg);

  int n_byz = 0;
  for (const AgentSummary& a : r.agents) {
    n_byz += a.byzantine;
    CHECK(a.requests_issued <= cfg.budget_advisee);
    CHECK(a.responses_given <= cfg.budget_advisor);
    CHECK(a.advisee_budget_left <= cfg.budget_advisee);
  }
  CHECK(n_byz == 1);
}

TEST_CASE("advice traffic log captures contacts and refusals") {
  ScenarioConfig cfg = ScenarioConfig::preset(Scale::Small);
  cfg.episodes = 80;
  cfg.log_advice = true;
  cfg.params.tau = 5;
  cfg.master_seed = 13;
  const RunResult r = run_scenario(cfg);
  REQUIRE_FALSE(r.advice_log.empty());

  std::uint64_t gave = 0;
  for (const AdviceLogRecord& rec : r.advice_log) {
    CHECK(rec.advisee != rec.advisor);
    CHECK(rec.state >= 0);
    CHECK(rec.state < cfg.grid().cell_count());
    if (rec.gave_advice) {
      ++gave;
      CHECK(rec.perturbed);  // brnes variant perturbs advisor-side
    } else {
      CHECK_FALSE(rec.perturbed);
    }
  }
  std::uint64_t responses = 0;
  for (const MetricsRecord& m : r.records) responses += m.advice_responses;
  CHECK(gave == responses);

  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "brnes_test_advlog";
  std::filesystem::remove_all(dir);
  emit_run(r, dir.string());
  const std::string text = slurp(dir / "advice_log.csv");
  CHECK(text.rfind("episode,step,advisee,advisor,state,gave_advice,perturbed\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        static_cast<long>(r.advice_log.size()) + 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("inference runs produce a success series for the attacker") {
  ScenarioConfig cfg = ScenarioConfig::preset(Scale::Small);
  cfg.episodes = 120;
  cfg.attacker_kind = AttackerKind::Inference;
  cfg.attacker_fraction = 0.2;
  cfg.params.tau = 5;  // query early so the short test sees traffic
  cfg.master_seed = 5;
  const RunResult r = run_scenario(cfg);

  REQUIRE(r.inference.size() == static_cast<std::size_t>(cfg.episodes));
  int attacker = -1;
  for (const AgentSummary& a : r.agents)
    if (a.inference_attacker) attacker = a.id;
  REQUIRE(attacker >= 0);
  for (const InferenceRecord& rec : r.inference) {
    CHECK(rec.attacker_id == attacker);
    CHECK(rec.success_rate_pct >= 0.0);
    CHECK(rec.success_rate_pct <= 100.0);
  }
  // Queries accumulate over episodes.
  CHECK(r.inference.back().queries_issued >= r.inference.front().queries_issued);
}
