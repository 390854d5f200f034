#pragma once

#include <string>
#include <vector>

#include "brnes/simulate.hpp"

namespace brnes {

// CSV schemas: comma separators, '.' decimals, '\n'-terminated rows, floats
// printed as %.6f so replays are byte-identical.

void write_metrics_csv(const std::vector<MetricsRecord>& records, const std::string& path);
void write_heatmap_csv(const GridConfig& grid, const std::vector<std::uint64_t>& heatmap,
                       const std::string& path);
void write_inference_csv(const std::vector<InferenceRecord>& inference, const std::string& path);
void write_attack_metrics_csv(const std::vector<InferenceRecord>& inference,
                              const std::string& path);
void write_advice_log_csv(const std::vector<AdviceLogRecord>& log, const std::string& path);

// One run directory: metrics.csv, heatmap.csv, manifest.json, plus
// inference.csv and attack_metrics.csv when the run had inference attackers.
void emit_run(const RunResult& run, const std::string& out_dir);

// Per-episode mean and sample standard deviation across seeds.
void write_aggregate_csv(const std::vector<RunResult>& runs, const std::string& path);

// Run `seeds` runs with master_seed = base.master_seed + i.
std::vector<RunResult> run_seeds(const ScenarioConfig& base, int seeds);

// Top-level layout: <out>/manifest.json, <out>/aggregate.csv and one
// <out>/seed_<s>/ directory per run.
void emit_experiment(const ScenarioConfig& base, const std::vector<RunResult>& runs,
                     const std::string& out_dir);

}  // namespace brnes
