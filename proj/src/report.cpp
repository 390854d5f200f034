#include "brnes/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace brnes {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_metrics_csv(const std::vector<MetricsRecord>& records, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "episode,sg,reward,delta_q_mean,tg_cumulative,advice_requests,advice_responses\n";
  char buf[256];
  for (const MetricsRecord& r : records) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.6f,%llu,%llu\n", r.episode, r.sg,
                  r.reward, r.delta_q_mean, r.tg_cumulative,
                  static_cast<unsigned long long>(r.advice_requests),
                  static_cast<unsigned long long>(r.advice_responses));
    out << buf;
  }
}

void write_heatmap_csv(const GridConfig& grid, const std::vector<std::uint64_t>& heatmap,
                       const std::string& path) {
  std::ofstream out = open_out(path);
  out << "x,y,visit_count\n";
  for (int index = 0; index < grid.cell_count(); ++index) {
    const Cell c = grid.cell_at(index);
    out << c.x << ',' << c.y << ',' << heatmap[index] << '\n';
  }
}

void write_inference_csv(const std::vector<InferenceRecord>& inference, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "episode,attacker_id,success_rate_pct\n";
  char buf[128];
  for (const InferenceRecord& r : inference) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.6f\n", r.episode, r.attacker_id,
                  r.success_rate_pct);
    out << buf;
  }
}

void write_attack_metrics_csv(const std::vector<InferenceRecord>& inference,
                              const std::string& path) {
  std::ofstream out = open_out(path);
  out << "episode,attacker_id,queries_issued,qualifying_states,success_rate_pct\n";
  char buf[160];
  for (const InferenceRecord& r : inference) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%llu,%llu,%.6f\n", r.episode, r.attacker_id,
                  static_cast<unsigned long long>(r.queries_issued),
                  static_cast<unsigned long long>(r.qualifying_states), r.success_rate_pct);
    out << buf;
  }
}

void write_advice_log_csv(const std::vector<AdviceLogRecord>& log, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "episode,step,advisee,advisor,state,gave_advice,perturbed\n";
  for (const AdviceLogRecord& r : log) {
    out << r.episode << ',' << r.step << ',' << r.advisee << ',' << r.advisor << ','
        << r.state << ',' << (r.gave_advice ? 1 : 0) << ',' << (r.perturbed ? 1 : 0) << '\n';
  }
}

void emit_run(const RunResult& run, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_metrics_csv(run.records, (dir / "metrics.csv").string());
  write_heatmap_csv(run.config.grid(), run.heatmap, (dir / "heatmap.csv").string());
  if (!run.inference.empty()) {
    write_inference_csv(run.inference, (dir / "inference.csv").string());
    write_attack_metrics_csv(run.inference, (dir / "attack_metrics.csv").string());
  }
  if (!run.advice_log.empty())
    write_advice_log_csv(run.advice_log, (dir / "advice_log.csv").string());
  write_manifest(run.config, 1, (dir / "manifest.json").string());
}

void write_aggregate_csv(const std::vector<RunResult>& runs, const std::string& path) {
  if (runs.empty()) throw std::invalid_argument("write_aggregate_csv: no runs");
  const std::size_t episodes = runs.front().records.size();
  for (const RunResult& r : runs)
    if (r.records.size() != episodes)
      throw std::invalid_argument("write_aggregate_csv: episode counts differ");

  std::ofstream out = open_out(path);
  out << "episode,sg_mean,sg_std,reward_mean,reward_std,delta_q_mean,delta_q_std\n";
  const double n = static_cast<double>(runs.size());
  char buf[256];
  for (std::size_t e = 0; e < episodes; ++e) {
    double sums[3] = {0, 0, 0};
    double sqs[3] = {0, 0, 0};
    for (const RunResult& r : runs) {
      const MetricsRecord& rec = r.records[e];
      const double v[3] = {rec.sg, rec.reward, rec.delta_q_mean};
      for (int k = 0; k < 3; ++k) {
        sums[k] += v[k];
        sqs[k] += v[k] * v[k];
      }
    }
    double mean[3], sd[3];
    for (int k = 0; k < 3; ++k) {
      mean[k] = sums[k] / n;
      // Sample standard deviation; zero for a single seed.
      const double var = n > 1 ? std::max(0.0, (sqs[k] - n * mean[k] * mean[k]) / (n - 1)) : 0.0;
      sd[k] = std::sqrt(var);
    }
    std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", e + 1, mean[0],
                  sd[0], mean[1], sd[1], mean[2], sd[2]);
    out << buf;
  }
}

std::vector<RunResult> run_seeds(const ScenarioConfig& base, int seeds) {
  if (seeds < 1) throw std::invalid_argument("run_seeds: need at least one seed");
  std::vector<RunResult> runs;
  runs.reserve(seeds);
  for (int i = 0; i < seeds; ++i) {
    ScenarioConfig cfg = base;
    cfg.master_seed = base.master_seed + static_cast<std::uint64_t>(i);
    runs.push_back(run_scenario(cfg));
  }
  return runs;
}

void emit_experiment(const ScenarioConfig& base, const std::vector<RunResult>& runs,
                     const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_manifest(base, static_cast<int>(runs.size()), (dir / "manifest.json").string());
  write_aggregate_csv(runs, (dir / "aggregate.csv").string());
  for (const RunResult& run : runs) {
    emit_run(run, (dir / ("seed_" + std::to_string(run.config.master_seed))).string());
  }
}

}  // namespace brnes
