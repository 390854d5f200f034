#pragma once

#include <cstdint>
#include <vector>

#include "brnes/adversary.hpp"
#include "brnes/scenario.hpp"

namespace brnes {

struct MetricsRecord {
  int episode = 0;            // 1-based
  double sg = 0.0;            // mean steps to goal, step_cap-censored
  double reward = 0.0;        // mean total episode reward per agent
  double delta_q_mean = 0.0;  // mean signed Q-entry change per update
  // Deterministic modeled run time (seconds); what the CSVs carry.
  double tg_cumulative = 0.0;
  // Measured wall clock since run start; not emitted (not reproducible).
  double wall_seconds = 0.0;
  std::uint64_t advice_requests = 0;
  std::uint64_t advice_responses = 0;
};

struct InferenceRecord {
  int episode = 0;
  int attacker_id = 0;
  double success_rate_pct = 0.0;
  std::uint64_t queries_issued = 0;
  std::uint64_t qualifying_states = 0;
};

struct AdviceLogRecord {
  int episode = 0;  // 1-based
  long step = 0;
  int advisee = 0;
  int advisor = 0;
  int state = 0;
  bool gave_advice = false;
  bool perturbed = false;
};

struct AgentSummary {
  int id = 0;
  bool byzantine = false;
  bool inference_attacker = false;
  std::uint64_t requests_issued = 0;    // advice rounds spent
  std::uint64_t responses_given = 0;    // non-refusals served while honest
  std::uint64_t advisee_budget_left = 0;
  std::uint64_t advisor_budget_left = 0;
  std::vector<std::uint64_t> visit_counts;  // final per-state ledger
};

struct RunResult {
  ScenarioConfig config;
  std::vector<MetricsRecord> records;
  std::vector<std::uint64_t> heatmap;  // per cell index, visits summed over agents/episodes
  std::vector<InferenceRecord> inference;
  std::vector<AgentSummary> agents;
  std::vector<QTable> final_tables;
  std::vector<AdviceLogRecord> advice_log;  // only when config.log_advice
  std::uint64_t total_agent_steps = 0;
};

// Executes the configured number of episodes; fully determined by the config
// (including master_seed) except for MetricsRecord::wall_seconds.
RunResult run_scenario(const ScenarioConfig& cfg);

// Trailing moving average of delta_q_mean.
std::vector<double> convergence_series(const std::vector<MetricsRecord>& records, int window);

// Trailing moving average of sg.
std::vector<double> sg_series(const std::vector<MetricsRecord>& records, int window);

// First index i such that all later values stay strictly below `threshold`;
// returns size when never.
std::size_t first_sustained_below(const std::vector<double>& series, double threshold);

double mean_over(const std::vector<MetricsRecord>& records, std::size_t first, std::size_t last,
                 double MetricsRecord::*field);

}  // namespace brnes
