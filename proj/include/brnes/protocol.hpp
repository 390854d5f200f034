#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "brnes/grid.hpp"
#include "brnes/qlearn.hpp"
#include "brnes/rng.hpp"

namespace brnes {

struct AdviceRequest {
  int state = 0;
  std::uint64_t advisee_visits = 0;
  int advisee_id = 0;
};

struct AdviceResponse {
  std::optional<QVector> q_vector;

  bool refused() const { return !q_vector.has_value(); }
  static AdviceResponse no_advice() { return {}; }
  static AdviceResponse of(const QVector& v) { return {v}; }
};

struct PrivacyParams {
  double epsilon = 1.0;         // +inf disables perturbation (identity channel)
  int n_sensitivity = kNumActions;
  int domain_size = kNumActions;

  void validate() const;
  // Probability of keeping an entry: e^(eps/n) / (d + e^(eps/n) - 1).
  double keep_probability() const;
};

// Chebyshev box of half-width radius around the advisee, clipped to the grid.
struct NeighborZone {
  Cell center;
  double radius = 0.0;
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;

  bool contains(Cell c) const {
    double dx = c.x > center.x ? c.x - center.x : center.x - c.x;
    double dy = c.y > center.y ? c.y - center.y : center.y - c.y;
    return dx <= radius && dy <= radius;
  }
};

// Experience harvesting confidence. Zero outside [tau, tau_prime]; the
// advisee seeks advice iff 0 < P < kappa.
double ehc(std::uint64_t visits, std::uint64_t budget, std::uint64_t budget_total,
           std::uint64_t tau, std::uint64_t tau_prime);

// Experience giving confidence. Zero unless the advisor knows the state
// strictly better than the advisee; advice is given iff P > 0.
double egc(std::uint64_t advisor_visits, std::uint64_t advisee_visits,
           std::uint64_t budget, std::uint64_t budget_total);

// radius = sqrt(H*W / |N|), kept real-valued.
NeighborZone neighbor_zone(int n_agents, Cell advisee_pos, const GridConfig& grid);

// A zone covering the whole grid (used by the ablation variants).
NeighborZone whole_grid_zone(Cell advisee_pos, const GridConfig& grid);

// Per-entry generalized randomized response: keep with keep_probability(),
// otherwise substitute the value of one of the other three positions chosen
// uniformly. Every output entry is therefore one of the input entries.
QVector grr_perturb(const QVector& q, const PrivacyParams& privacy, RngStream& rng);

// Per-action arithmetic mean of the received vectors. Empty input is a
// caller contract violation.
QVector best_advice(std::span<const QVector> responses);

// Element-wise w*own + (1-w)*advice.
QVector weighted_aggregate(const QVector& own, const QVector& advice, double w);

struct AdviseConfig {
  bool ldp_enabled = true;
  // Formula willingness grows as the budget drains; by default an exhausted
  // advisor refuses anyway. Disable for the literal-formula behaviour.
  bool refuse_at_zero_budget = true;
  // Sample the gate as Bernoulli(P) instead of the deterministic threshold.
  bool bernoulli_gate = false;
};

// Advisor side: EGC gate, then the (optionally perturbed) Q-row for the
// requested state. Decrements the advisor budget on every non-refusal.
AdviceResponse advise(const QTable& q, AgentLedger& ledger, const AdviceRequest& request,
                      const PrivacyParams& privacy, const AdviseConfig& cfg, RngStream& rng);

// Produces agent `advisor_id`'s response to the request (honest advise(),
// Byzantine fabrication, ...). Wired by the caller.
using Responder = std::function<AdviceResponse(int advisor_id, const AdviceRequest&)>;

struct AdviceTaken {
  int advisor_id = 0;
  QVector q_vector{};
};

struct CollectConfig {
  bool inactive_agents_advise = true;
  // Perturb every received vector at the advisee (the mechanism of the
  // advisee-side-DP baselines; attackers cannot bypass it).
  bool ldp_advisee_side = false;
};

// Queries every other agent inside the zone in id order and keeps the
// non-refusals. Spends one advisee budget unit per issued round.
std::vector<AdviceTaken> collect_advice(const AdviceRequest& request, const NeighborZone& zone,
                                        std::span<const Cell> agent_pos,
                                        std::span<const std::uint8_t> agent_active,
                                        AgentLedger& advisee_ledger,
                                        const PrivacyParams& privacy, const CollectConfig& cfg,
                                        const Responder& respond, RngStream& advisee_rng);

struct HarvestConfig {
  bool zone_enabled = true;
  double w = 0.85;
  PrivacyParams privacy;
  CollectConfig collect;
  bool bernoulli_gate = false;
  // Ask on every step that still has budget, ignoring the EHC self-gate.
  // This is the inference attacker's querying mode.
  bool gate_always_open = false;
};

struct HarvestResult {
  Action action = Action::Left;
  bool sought_advice = false;
  int responses = 0;
};

// Advisee side, one step: EHC gate -> zone -> collect -> mean -> weighted
// aggregation into Q(s,.) -> epsilon-greedy selection. The environment step
// and the final q_update stay with the caller.
HarvestResult harvest(QTable& q, AgentLedger& ledger, int state, int self_id,
                      const GridConfig& grid, int n_agents, const AgentParams& params,
                      const HarvestConfig& cfg, std::span<const Cell> agent_pos,
                      std::span<const std::uint8_t> agent_active, const Responder& respond,
                      RngStream& rng);

}  // namespace brnes
