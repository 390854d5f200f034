#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "brnes/grid.hpp"
#include "brnes/protocol.hpp"
#include "brnes/qlearn.hpp"
#include "brnes/rng.hpp"

namespace brnes {

struct ByzantineConfig {
  double fraction = 0.0;
  double noise_center = 10.0;   // phi_goal by default
  double noise_spread = 1.0;    // 0.1 * phi_goal by default
};

// The fixed Byzantine subset for a run; a pure function of its arguments.
std::vector<int> byzantine_subset(std::uint64_t master_seed, double fraction, int n_agents);

// The action that maximizes the advisee's post-move Chebyshev distance to the
// goal (wall bounces keep the advisee in place); ties break uniformly.
Action misleading_action(Cell advisee_pos, Cell goal, const GridConfig& grid, RngStream& rng);

// Shuffle the attacker's true Q-row for the requested state, then lift the
// misleading action's entry with positive noise near the goal reward so it is
// the strict maximum. Byzantine advisors ignore EGC, budgets and LDP.
AdviceResponse fabricate_advice(const QVector& attacker_row, const AdviceRequest& request,
                                Cell goal, const GridConfig& grid, const ByzantineConfig& cfg,
                                RngStream& rng);

struct AttackSuccess {
  double pct = 0.0;
  std::size_t qualifying_states = 0;
  bool insufficient_data = false;
};

// Accumulated view of one advisor's Q-table as seen by a querying advisee.
// Reconstruction is the argmax of per-position modes over the logged
// responses; mode ties go to the most recently seen value.
class InferenceAttackState {
 public:
  InferenceAttackState() = default;
  // value_resolution buckets logged values for the mode counts: coarse enough
  // that the advisor's per-update jitter keeps feeding one bucket, fine
  // enough that distinct action values stay distinct.
  InferenceAttackState(int target_advisor, int n_states, double value_resolution = 0.25);

  int target_advisor() const { return target_; }
  std::uint64_t queries(int state) const { return states_[state].n_logged; }
  std::uint64_t total_queries() const { return total_queries_; }

  // Greedy action of the reconstructed row; empty when nothing was logged.
  std::optional<Action> reconstructed(int state) const;

  // The per-position modes themselves (the attacker's view of the row).
  std::optional<QVector> reconstructed_row(int state) const;

  friend void infer_step(InferenceAttackState& attack, const AdviceResponse& response,
                         int state);

 private:
  struct PositionMode {
    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> counts;
    double best_value = 0.0;
    std::uint64_t best_count = 0;
    std::uint64_t best_last = 0;
  };
  struct StateLog {
    PositionMode pos[kNumActions];
    std::uint64_t n_logged = 0;
  };

  int target_ = 0;
  double value_resolution_ = 0.25;
  std::vector<StateLog> states_;
  std::uint64_t total_queries_ = 0;
};

// Log one non-refusal response from the target advisor.
void infer_step(InferenceAttackState& attack, const AdviceResponse& response, int state);

// Share of states (with at least one logged response and a unique true
// greedy action) whose reconstructed greedy action matches the truth.
AttackSuccess attack_success_rate(const InferenceAttackState& attack, const QTable& advisor_truth);

}  // namespace brnes
