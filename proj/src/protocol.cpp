#include "brnes/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace brnes {

void PrivacyParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (n_sensitivity != kNumActions || domain_size != kNumActions)
    throw std::invalid_argument("sensitivity and domain size must equal the action count");
}

double PrivacyParams::keep_probability() const {
  const double e = std::exp(epsilon / n_sensitivity);
  if (!std::isfinite(e)) return 1.0;
  return e / (domain_size + e - 1.0);
}

double ehc(std::uint64_t visits, std::uint64_t budget, std::uint64_t budget_total,
           std::uint64_t tau, std::uint64_t tau_prime) {
  if (budget_total == 0) throw std::invalid_argument("ehc: zero total budget");
  if (budget > budget_total) throw std::invalid_argument("ehc: budget above total");
  if (visits == 0 || visits < tau || visits > tau_prime) return 0.0;
  return std::sqrt(static_cast<double>(budget) / static_cast<double>(budget_total)) /
         std::sqrt(static_cast<double>(visits));
}

double egc(std::uint64_t advisor_visits, std::uint64_t advisee_visits,
           std::uint64_t budget, std::uint64_t budget_total) {
  if (budget_total == 0) throw std::invalid_argument("egc: zero total budget");
  if (budget > budget_total) throw std::invalid_argument("egc: budget above total");
  if (advisor_visits <= advisee_visits) return 0.0;
  return 1.0 - std::sqrt(static_cast<double>(budget) / static_cast<double>(budget_total)) /
                   std::sqrt(static_cast<double>(advisor_visits));
}

NeighborZone neighbor_zone(int n_agents, Cell advisee_pos, const GridConfig& grid) {
  if (n_agents < 1) throw std::invalid_argument("neighbor_zone: need at least one agent");
  NeighborZone z;
  z.center = advisee_pos;
  z.radius = std::sqrt(static_cast<double>(grid.cell_count()) / n_agents);
  z.x_min = std::max(0.0, advisee_pos.x - z.radius);
  z.x_max = std::min<double>(grid.width - 1, advisee_pos.x + z.radius);
  z.y_min = std::max(0.0, advisee_pos.y - z.radius);
  z.y_max = std::min<double>(grid.height - 1, advisee_pos.y + z.radius);
  return z;
}

NeighborZone whole_grid_zone(Cell advisee_pos, const GridConfig& grid) {
  NeighborZone z;
  z.center = advisee_pos;
  z.radius = std::max(grid.width, grid.height);
  z.x_min = 0.0;
  z.x_max = grid.width - 1;
  z.y_min = 0.0;
  z.y_max = grid.height - 1;
  return z;
}

QVector grr_perturb(const QVector& q, const PrivacyParams& privacy, RngStream& rng) {
  privacy.validate();
  if (std::isinf(privacy.epsilon)) return q;
  const double p = privacy.keep_probability();
  QVector out;
  for (int i = 0; i < kNumActions; ++i) {
    if (rng.uniform() <= p) {
      out[i] = q[i];
    } else {
      // Uniform over the other three positions' values. Duplicate values in
      // q make the substitution a partial no-op, which is the intended
      // degenerate behaviour (constant vectors pass through unchanged).
      int j = static_cast<int>(rng.uniform_below(kNumActions - 1));
      if (j >= i) ++j;
      out[i] = q[j];
    }
  }
  return out;
}

QVector best_advice(std::span<const QVector> responses) {
  if (responses.empty()) throw std::logic_error("best_advice: empty response list");
  QVector mean{0.0, 0.0, 0.0, 0.0};
  for (const QVector& r : responses)
    for (int a = 0; a < kNumActions; ++a) mean[a] += r[a];
  for (int a = 0; a < kNumActions; ++a) mean[a] /= static_cast<double>(responses.size());
  return mean;
}

QVector weighted_aggregate(const QVector& own, const QVector& advice, double w) {
  if (w < 0.0 || w > 1.0) throw std::invalid_argument("weighted_aggregate: w outside [0,1]");
  QVector out;
  for (int a = 0; a < kNumActions; ++a) out[a] = w * own[a] + (1.0 - w) * advice[a];
  return out;
}

AdviceResponse advise(const QTable& q, AgentLedger& ledger, const AdviceRequest& request,
                      const PrivacyParams& privacy, const AdviseConfig& cfg, RngStream& rng) {
  if (cfg.refuse_at_zero_budget && ledger.advisor_budget == 0)
    return AdviceResponse::no_advice();

  const double p_give = egc(ledger.visits(request.state), request.advisee_visits,
                            ledger.advisor_budget, ledger.advisor_budget_total);
  const bool give = cfg.bernoulli_gate ? (p_give > 0.0 && rng.uniform() < p_give)
                                       : (p_give > 0.0);
  if (!give) return AdviceResponse::no_advice();

  const QVector& row = q.row(request.state);
  AdviceResponse resp =
      AdviceResponse::of(cfg.ldp_enabled ? grr_perturb(row, privacy, rng) : row);
  if (ledger.advisor_budget > 0) --ledger.advisor_budget;
  return resp;
}

std::vector<AdviceTaken> collect_advice(const AdviceRequest& request, const NeighborZone& zone,
                                        std::span<const Cell> agent_pos,
                                        std::span<const std::uint8_t> agent_active,
                                        AgentLedger& advisee_ledger,
                                        const PrivacyParams& privacy, const CollectConfig& cfg,
                                        const Responder& respond, RngStream& advisee_rng) {
  std::vector<AdviceTaken> taken;
  bool issued = false;
  for (int id = 0; id < static_cast<int>(agent_pos.size()); ++id) {
    if (id == request.advisee_id) continue;
    if (!cfg.inactive_agents_advise && !agent_active[id]) continue;
    if (!zone.contains(agent_pos[id])) continue;
    issued = true;
    AdviceResponse resp = respond(id, request);
    if (resp.refused()) continue;
    QVector v = *resp.q_vector;
    if (cfg.ldp_advisee_side) v = grr_perturb(v, privacy, advisee_rng);
    taken.push_back({id, v});
  }
  if (issued && advisee_ledger.advisee_budget > 0) --advisee_ledger.advisee_budget;
  return taken;
}

HarvestResult harvest(QTable& q, AgentLedger& ledger, int state, int self_id,
                      const GridConfig& grid, int n_agents, const AgentParams& params,
                      const HarvestConfig& cfg, std::span<const Cell> agent_pos,
                      std::span<const std::uint8_t> agent_active, const Responder& respond,
                      RngStream& rng) {
  HarvestResult result;

  bool ask;
  if (cfg.gate_always_open) {
    ask = ledger.advisee_budget > 0;
  } else {
    const double p_ask = ehc(ledger.visits(state), ledger.advisee_budget,
                             ledger.advisee_budget_total, params.tau, params.tau_prime);
    ask = cfg.bernoulli_gate ? (p_ask > 0.0 && rng.uniform() < p_ask)
                             : (p_ask > 0.0 && p_ask < params.kappa);
  }
  if (ask) {
    result.sought_advice = true;
    const Cell pos = agent_pos[self_id];
    const NeighborZone zone =
        cfg.zone_enabled ? neighbor_zone(n_agents, pos, grid) : whole_grid_zone(pos, grid);
    AdviceRequest request{state, ledger.visits(state), self_id};
    std::vector<AdviceTaken> taken =
        collect_advice(request, zone, agent_pos, agent_active, ledger, cfg.privacy,
                       cfg.collect, respond, rng);
    result.responses = static_cast<int>(taken.size());
    if (!taken.empty()) {
      std::vector<QVector> vectors;
      vectors.reserve(taken.size());
      for (const AdviceTaken& t : taken) vectors.push_back(t.q_vector);
      const QVector xi = best_advice(vectors);
      q.row(state) = weighted_aggregate(q.row(state), xi, cfg.w);
    }
  }

  result.action = select_action(q, state, params, rng);
  return result;
}

}  // namespace brnes
