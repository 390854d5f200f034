#include "brnes/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace brnes {

std::vector<int> byzantine_subset(std::uint64_t master_seed, double fraction, int n_agents) {
  if (fraction < 0.0 || fraction > 1.0)
    throw std::invalid_argument("attacker fraction outside [0,1]");
  const int n_byz = static_cast<int>(std::llround(fraction * n_agents));
  std::vector<int> ids(n_agents);
  std::iota(ids.begin(), ids.end(), 0);
  RngStream rng(splitmix64(master_seed ^ 0xb12a57ull));
  for (int i = 0; i < n_byz; ++i) {
    const auto j = i + rng.uniform_below(ids.size() - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(n_byz);
  std::sort(ids.begin(), ids.end());
  return ids;
}

Action misleading_action(Cell advisee_pos, Cell goal, const GridConfig& grid, RngStream& rng) {
  int best_dist = -1;
  int best[kNumActions];
  int n_best = 0;
  for (int a = 0; a < kNumActions; ++a) {
    Cell target = displaced(advisee_pos, static_cast<Action>(a));
    if (!grid.in_bounds(target)) target = advisee_pos;
    const int dist = chebyshev(target, goal);
    if (dist > best_dist) {
      best_dist = dist;
      n_best = 0;
    }
    if (dist == best_dist) best[n_best++] = a;
  }
  if (n_best == 1) return static_cast<Action>(best[0]);
  return static_cast<Action>(best[rng.uniform_below(n_best)]);
}

AdviceResponse fabricate_advice(const QVector& attacker_row, const AdviceRequest& request,
                                Cell goal, const GridConfig& grid, const ByzantineConfig& cfg,
                                RngStream& rng) {
  const Cell advisee_pos = grid.cell_at(request.state);
  const int a_m = static_cast<int>(misleading_action(advisee_pos, goal, grid, rng));

  QVector v = attacker_row;
  for (int i = 0; i < kNumActions - 1; ++i) {
    const auto j = i + rng.uniform_below(kNumActions - i);
    std::swap(v[i], v[j]);
  }

  double max_other = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < kNumActions; ++a)
    if (a != a_m) max_other = std::max(max_other, v[a]);

  const double lift = rng.normal_positive(cfg.noise_center, cfg.noise_spread);
  v[a_m] += lift;
  if (v[a_m] <= max_other) v[a_m] = max_other + lift;
  return AdviceResponse::of(v);
}

InferenceAttackState::InferenceAttackState(int target_advisor, int n_states,
                                           double value_resolution)
    : target_(target_advisor), value_resolution_(value_resolution), states_(n_states) {
  if (!(value_resolution > 0.0))
    throw std::invalid_argument("value resolution must be positive");
}

std::optional<Action> InferenceAttackState::reconstructed(int state) const {
  const StateLog& log = states_[state];
  if (log.n_logged == 0) return std::nullopt;
  int best = 0;
  for (int a = 1; a < kNumActions; ++a)
    if (log.pos[a].best_value > log.pos[best].best_value) best = a;
  return static_cast<Action>(best);
}

std::optional<QVector> InferenceAttackState::reconstructed_row(int state) const {
  const StateLog& log = states_[state];
  if (log.n_logged == 0) return std::nullopt;
  QVector row;
  for (int a = 0; a < kNumActions; ++a) row[a] = log.pos[a].best_value;
  return row;
}

void infer_step(InferenceAttackState& attack, const AdviceResponse& response, int state) {
  if (response.refused()) throw std::logic_error("infer_step: refusal cannot be logged");
  InferenceAttackState::StateLog& slog = attack.states_[state];
  ++slog.n_logged;
  ++attack.total_queries_;
  const QVector& v = *response.q_vector;
  for (int a = 0; a < kNumActions; ++a) {
    InferenceAttackState::PositionMode& mode = slog.pos[a];
    const auto bucket = static_cast<std::uint64_t>(
        static_cast<std::int64_t>(std::llround(v[a] / attack.value_resolution_)));
    auto& entry = mode.counts[bucket];
    ++entry.first;
    entry.second = attack.total_queries_;
    // Lexicographic (count, last-seen) argmax; the inserted value is always
    // the most recent, so >= implements the most-recent tie break.
    if (entry.first >= mode.best_count) {
      mode.best_count = entry.first;
      mode.best_last = entry.second;
      mode.best_value = v[a];
    }
  }
}

AttackSuccess attack_success_rate(const InferenceAttackState& attack,
                                  const QTable& advisor_truth) {
  AttackSuccess result;
  std::size_t hits = 0;
  for (int s = 0; s < advisor_truth.n_states(); ++s) {
    if (attack.queries(s) == 0) continue;
    const QVector& truth = advisor_truth.row(s);
    int best = 0;
    int n_best = 1;
    for (int a = 1; a < kNumActions; ++a) {
      if (truth[a] > truth[best]) {
        best = a;
        n_best = 1;
      } else if (truth[a] == truth[best]) {
        ++n_best;
      }
    }
    if (n_best != 1) continue;
    ++result.qualifying_states;
    if (attack.reconstructed(s) == static_cast<Action>(best)) ++hits;
  }
  if (result.qualifying_states == 0) {
    result.insufficient_data = true;
    result.pct = 0.0;
  } else {
    result.pct = 100.0 * static_cast<double>(hits) /
                 static_cast<double>(result.qualifying_states);
  }
  return result;
}

}  // namespace brnes
