#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "brnes/grid.hpp"
#include "brnes/rng.hpp"

namespace brnes {

using QVector = std::array<double, kNumActions>;

// Dense per-agent action-value table over cell-index states, zero-initialized.
class QTable {
 public:
  QTable() = default;
  explicit QTable(int n_states) : rows_(n_states, QVector{0.0, 0.0, 0.0, 0.0}) {}

  int n_states() const { return static_cast<int>(rows_.size()); }
  const QVector& row(int state) const { return rows_[state]; }
  QVector& row(int state) { return rows_[state]; }

 private:
  std::vector<QVector> rows_;
};

struct AgentParams {
  double alpha = 0.10;
  double epsilon_explore = 0.08;
  double gamma = 0.80;
  double w = 0.85;
  double kappa = 0.1;
  std::uint64_t tau = 100;
  std::uint64_t tau_prime = 100000;

  void validate() const;
};

// Visit counts and the two communication budgets.
struct AgentLedger {
  std::vector<std::uint64_t> visit_count;
  std::uint64_t advisee_budget = 100000;
  std::uint64_t advisee_budget_total = 100000;
  std::uint64_t advisor_budget = 10000;
  std::uint64_t advisor_budget_total = 10000;

  AgentLedger() = default;
  AgentLedger(int n_states, std::uint64_t advisee_total, std::uint64_t advisor_total)
      : visit_count(n_states, 0),
        advisee_budget(advisee_total),
        advisee_budget_total(advisee_total),
        advisor_budget(advisor_total),
        advisor_budget_total(advisor_total) {}

  std::uint64_t visits(int state) const { return visit_count[state]; }
};

inline void record_visit(AgentLedger& ledger, int state) { ++ledger.visit_count[state]; }

// Epsilon-greedy over Q(state, .); argmax ties break uniformly at random.
Action select_action(const QTable& q, int state, const AgentParams& params, RngStream& rng);

// Q(s,a) = (1-alpha) Q(s,a) + alpha (reward + gamma max_a' Q(s',a')).
// Returns the signed change of the updated entry.
double q_update(QTable& q, int state, Action action, double reward, int next_state,
                const AgentParams& params);

// Snapshot as CSV rows "state,q_left,q_right,q_up,q_down".
void write_qtable_csv(const QTable& q, std::ostream& out);

}  // namespace brnes
