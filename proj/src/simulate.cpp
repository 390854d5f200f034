#include "brnes/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace brnes {

namespace {

// Nominal per-operation costs of the modeled clock (seconds). Only the
// relative scale matters; the column exists so replayed runs are bit-equal.
constexpr double kStepCost = 1e-6;
constexpr double kResponseCost = 5e-6;

constexpr std::uint64_t kEnvStreamTag = 1;
constexpr std::uint64_t kAgentStreamTag = 1000;

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();

  const GridConfig grid = cfg.grid();
  const int n_states = grid.cell_count();
  const int n_agents = cfg.n_agents;
  const long step_cap = grid.effective_step_cap();

  RngStream root(cfg.master_seed);
  RngStream env_rng = root.derive(kEnvStreamTag);
  std::vector<RngStream> agent_rng;
  agent_rng.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i) agent_rng.push_back(root.derive(kAgentStreamTag + i));

  std::vector<QTable> tables(n_agents, QTable(n_states));
  std::vector<AgentLedger> ledgers(
      n_agents, AgentLedger(n_states, cfg.budget_advisee, cfg.budget_advisor));

  std::vector<bool> is_attacker(n_agents, false);
  const std::vector<int> attackers =
      cfg.attacker_kind == AttackerKind::None
          ? std::vector<int>{}
          : byzantine_subset(cfg.master_seed,
                             static_cast<double>(cfg.n_attackers()) / n_agents, n_agents);
  for (int id : attackers) is_attacker[id] = true;

  const bool byzantine_run = cfg.attacker_kind == AttackerKind::Byzantine;
  const bool inference_run = cfg.attacker_kind == AttackerKind::Inference;
  const ByzantineConfig byz_cfg = cfg.byzantine();
  const PrivacyParams privacy = cfg.privacy();

  std::vector<int> tracked_advisors;
  if (inference_run) {
    if (cfg.inference_target >= 0) {
      if (cfg.inference_target >= n_agents || is_attacker[cfg.inference_target])
        throw std::invalid_argument("inference target must be an honest agent");
      tracked_advisors.push_back(cfg.inference_target);
    } else {
      for (int i = 0; i < n_agents; ++i)
        if (!is_attacker[i]) tracked_advisors.push_back(i);
    }
  }
  // attack_states[k][j]: attacker k's view of tracked advisor j.
  std::vector<std::vector<InferenceAttackState>> attack_states;
  std::vector<int> attack_state_of(n_agents, -1);
  std::vector<int> tracked_index_of(n_agents, -1);
  if (inference_run) {
    for (std::size_t j = 0; j < tracked_advisors.size(); ++j)
      tracked_index_of[tracked_advisors[j]] = static_cast<int>(j);
    for (int id : attackers) {
      attack_state_of[id] = static_cast<int>(attack_states.size());
      std::vector<InferenceAttackState> views;
      views.reserve(tracked_advisors.size());
      for (int advisor : tracked_advisors)
        views.emplace_back(advisor, n_states);
      attack_states.push_back(std::move(views));
    }
  }

  AdviseConfig advise_cfg;
  advise_cfg.ldp_enabled = cfg.ldp_advisor_side();
  advise_cfg.refuse_at_zero_budget = cfg.advisor_refuse_at_zero_budget;
  advise_cfg.bernoulli_gate = cfg.bernoulli_gates;

  HarvestConfig harvest_cfg;
  harvest_cfg.zone_enabled = cfg.zone_enabled();
  harvest_cfg.w = cfg.aggregation_weight();
  harvest_cfg.privacy = privacy;
  harvest_cfg.collect.inactive_agents_advise = cfg.inactive_agents_advise;
  harvest_cfg.collect.ldp_advisee_side = cfg.ldp_advisee_side();
  harvest_cfg.bernoulli_gate = cfg.bernoulli_gates;

  // Inference attackers maximize query volume: every step with budget left
  // is a request round, the EHC self-gate is theirs to skip.
  HarvestConfig attacker_cfg = harvest_cfg;
  attacker_cfg.gate_always_open = true;

  RunResult result;
  result.config = cfg;
  result.heatmap.assign(n_states, 0);
  result.records.reserve(cfg.episodes);

  std::vector<std::uint64_t> responses_given(n_agents, 0);
  std::vector<std::uint64_t> requests_issued(n_agents, 0);

  // Served advisor ids for the inference hook; set per harvesting advisee.
  int current_advisee = -1;
  int current_episode = 0;
  long current_step = 0;
  const bool advisor_ldp_live =
      cfg.ldp_advisor_side() && !std::isinf(cfg.privacy_epsilon);
  const bool advisee_ldp_live =
      cfg.ldp_advisee_side() && !std::isinf(cfg.privacy_epsilon);
  const Responder respond = [&](int advisor_id, const AdviceRequest& req) -> AdviceResponse {
    AdviceResponse resp;
    bool honest = true;
    if (byzantine_run && is_attacker[advisor_id]) {
      honest = false;
      resp = fabricate_advice(tables[advisor_id].row(req.state), req, grid.goal, grid,
                              byz_cfg, agent_rng[advisor_id]);
    } else {
      resp = advise(tables[advisor_id], ledgers[advisor_id], req, privacy, advise_cfg,
                    agent_rng[advisor_id]);
      if (!resp.refused()) ++responses_given[advisor_id];
    }
    if (!resp.refused() && current_advisee >= 0 && attack_state_of[current_advisee] >= 0 &&
        tracked_index_of[advisor_id] >= 0) {
      infer_step(attack_states[attack_state_of[current_advisee]][tracked_index_of[advisor_id]],
                 resp, req.state);
    }
    if (cfg.log_advice) {
      const bool gave = !resp.refused();
      result.advice_log.push_back({current_episode + 1, current_step, req.advisee_id,
                                   advisor_id, req.state, gave,
                                   gave && ((honest && advisor_ldp_live) || advisee_ldp_live)});
    }
    return resp;
  };

  const auto run_start = std::chrono::steady_clock::now();
  double modeled_seconds = 0.0;

  std::vector<long> steps_taken(n_agents, 0);
  std::vector<double> episode_reward(n_agents, 0.0);

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    current_episode = ep;
    EnvState env = reset(grid, env_rng);
    std::fill(steps_taken.begin(), steps_taken.end(), 0);
    std::fill(episode_reward.begin(), episode_reward.end(), 0.0);
    double delta_sum = 0.0;
    std::uint64_t delta_count = 0;
    std::uint64_t ep_requests = 0;
    std::uint64_t ep_responses = 0;
    std::uint64_t ep_steps = 0;

    while (!episode_done(grid, env)) {
      current_step = env.step_index;
      move_obstacles(grid, env, env_rng);
      for (int i = 0; i < n_agents; ++i) {
        if (!env.agent_active[i]) continue;
        const int s = grid.cell_index(env.agent_pos[i]);

        Action action;
        if (byzantine_run && is_attacker[i]) {
          // Byzantine agents learn from their own experience but do not
          // harvest advice.
          action = select_action(tables[i], s, cfg.params, agent_rng[i]);
        } else {
          current_advisee = i;
          const std::uint64_t budget_before = ledgers[i].advisee_budget;
          const bool querying_attacker = inference_run && is_attacker[i];
          const HarvestResult h =
              harvest(tables[i], ledgers[i], s, i, grid, n_agents, cfg.params,
                      querying_attacker ? attacker_cfg : harvest_cfg, env.agent_pos,
                      env.agent_active, respond, agent_rng[i]);
          current_advisee = -1;
          const std::uint64_t spent = budget_before - ledgers[i].advisee_budget;
          requests_issued[i] += spent;
          ep_requests += spent;
          ep_responses += h.responses;
          action = h.action;
        }

        const StepOutcome out = step(grid, env, i, action);
        const int s_next = grid.cell_index(out.next_pos);
        delta_sum += q_update(tables[i], s, action, out.reward, s_next, cfg.params);
        ++delta_count;
        record_visit(ledgers[i], s);
        ++result.heatmap[s];
        ++steps_taken[i];
        ++ep_steps;
        episode_reward[i] += out.reward;
      }
      ++env.step_index;
    }

    MetricsRecord rec;
    rec.episode = ep + 1;
    double sg_sum = 0.0;
    double reward_sum = 0.0;
    for (int i = 0; i < n_agents; ++i) {
      sg_sum += env.agent_active[i] ? static_cast<double>(step_cap)
                                    : static_cast<double>(steps_taken[i]);
      reward_sum += episode_reward[i];
    }
    rec.sg = sg_sum / n_agents;
    rec.reward = reward_sum / n_agents;
    rec.delta_q_mean = delta_count ? delta_sum / static_cast<double>(delta_count) : 0.0;
    result.total_agent_steps += ep_steps;
    modeled_seconds += ep_steps * kStepCost + ep_responses * kResponseCost;
    rec.tg_cumulative = modeled_seconds;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start).count();
    rec.advice_requests = ep_requests;
    rec.advice_responses = ep_responses;
    result.records.push_back(rec);

    if (inference_run) {
      // Success pooled over the tracked advisors' qualifying states.
      for (int id : attackers) {
        std::uint64_t queries = 0;
        std::size_t qualifying = 0;
        double hits = 0.0;
        for (const InferenceAttackState& view : attack_states[attack_state_of[id]]) {
          const AttackSuccess s = attack_success_rate(view, tables[view.target_advisor()]);
          queries += view.total_queries();
          qualifying += s.qualifying_states;
          hits += s.pct / 100.0 * static_cast<double>(s.qualifying_states);
        }
        const double pct = qualifying ? 100.0 * hits / static_cast<double>(qualifying) : 0.0;
        result.inference.push_back({ep + 1, id, pct, queries, qualifying});
      }
    }
  }

  result.agents.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    AgentSummary a;
    a.id = i;
    a.byzantine = byzantine_run && is_attacker[i];
    a.inference_attacker = inference_run && is_attacker[i];
    a.requests_issued = requests_issued[i];
    a.responses_given = responses_given[i];
    a.advisee_budget_left = ledgers[i].advisee_budget;
    a.advisor_budget_left = ledgers[i].advisor_budget;
    a.visit_counts = ledgers[i].visit_count;
    result.agents.push_back(a);
  }
  result.final_tables = std::move(tables);
  return result;
}

std::vector<double> convergence_series(const std::vector<MetricsRecord>& records, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<double> out(records.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    acc += records[i].delta_q_mean;
    if (i >= static_cast<std::size_t>(window)) acc -= records[i - window].delta_q_mean;
    const double n = std::min<std::size_t>(i + 1, window);
    out[i] = acc / n;
  }
  return out;
}

std::vector<double> sg_series(const std::vector<MetricsRecord>& records, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<double> out(records.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    acc += records[i].sg;
    if (i >= static_cast<std::size_t>(window)) acc -= records[i - window].sg;
    const double n = std::min<std::size_t>(i + 1, window);
    out[i] = acc / n;
  }
  return out;
}

std::size_t first_sustained_below(const std::vector<double>& series, double threshold) {
  std::size_t first = series.size();
  for (std::size_t i = series.size(); i-- > 0;) {
    if (std::abs(series[i]) < threshold)
      first = i;
    else
      break;
  }
  return first;
}

double mean_over(const std::vector<MetricsRecord>& records, std::size_t first, std::size_t last,
                 double MetricsRecord::*field) {
  if (first >= last || last > records.size())
    throw std::invalid_argument("mean_over: bad range");
  double acc = 0.0;
  for (std::size_t i = first; i < last; ++i) acc += records[i].*field;
  return acc / static_cast<double>(last - first);
}

}  // namespace brnes
