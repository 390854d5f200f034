#include "brnes/qlearn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace brnes {

void AgentParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
  if (epsilon_explore < 0.0 || epsilon_explore > 1.0)
    throw std::invalid_argument("epsilon_explore must be in [0,1]");
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must be in [0,1]");
  if (w < 0.0 || w > 1.0) throw std::invalid_argument("w must be in [0,1]");
  if (tau > tau_prime) throw std::invalid_argument("tau must not exceed tau_prime");
}

Action select_action(const QTable& q, int state, const AgentParams& params, RngStream& rng) {
  if (params.epsilon_explore > 0.0 && rng.uniform() < params.epsilon_explore)
    return static_cast<Action>(rng.uniform_below(kNumActions));

  const QVector& row = q.row(state);
  int best[kNumActions];
  int n_best = 1;
  best[0] = 0;
  for (int a = 1; a < kNumActions; ++a) {
    if (row[a] > row[best[0]]) {
      best[0] = a;
      n_best = 1;
    } else if (row[a] == row[best[0]]) {
      best[n_best++] = a;
    }
  }
  if (n_best == 1) return static_cast<Action>(best[0]);
  return static_cast<Action>(best[rng.uniform_below(n_best)]);
}

double q_update(QTable& q, int state, Action action, double reward, int next_state,
                const AgentParams& params) {
  if (!std::isfinite(reward)) throw std::invalid_argument("q_update: non-finite reward");
  const QVector& next = q.row(next_state);
  const double max_next = *std::max_element(next.begin(), next.end());
  double& entry = q.row(state)[static_cast<int>(action)];
  const double old = entry;
  entry = (1.0 - params.alpha) * old + params.alpha * (reward + params.gamma * max_next);
  return entry - old;
}

void write_qtable_csv(const QTable& q, std::ostream& out) {
  out << "state,q_left,q_right,q_up,q_down\n";
  char buf[160];
  for (int s = 0; s < q.n_states(); ++s) {
    const QVector& r = q.row(s);
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g,%.10g\n", s, r[0], r[1], r[2], r[3]);
    out << buf;
  }
}

}  // namespace brnes
