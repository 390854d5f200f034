#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "brnes/qlearn.hpp"
#include "doctest.h"

using namespace brnes;

TEST_CASE("greedy selection returns the argmax") {
  QTable q(4);
  q.row(0) = {0.1, 0.9, 0.2, 0.0};
  AgentParams p;
  p.epsilon_explore = 0.0;
  RngStream rng(1);
  for (int i = 0; i < 100; ++i) CHECK(select_action(q, 0, p, rng) == Action::Right);
}

TEST_CASE("full exploration is uniform") {
  QTable q(1);
  q.row(0) = {5.0, 1.0, 0.0, -3.0};
  AgentParams p;
  p.epsilon_explore = 1.0;
  RngStream rng(2);
  int counts[4] = {0, 0, 0, 0};
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) ++counts[static_cast<int>(select_action(q, 0, p, rng))];
  for (int a = 0; a < 4; ++a)
    CHECK(std::abs(counts[a] / static_cast<double>(trials) - 0.25) < 0.01);
}

TEST_CASE("argmax ties break uniformly") {
  QTable q(1);
  q.row(0) = {1.5, 1.5, 1.5, 1.5};
  AgentParams p;
  p.epsilon_explore = 0.0;
  RngStream rng(3);
  int counts[4] = {0, 0, 0, 0};
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) ++counts[static_cast<int>(select_action(q, 0, p, rng))];
  for (int a = 0; a < 4; ++a)
    CHECK(std::abs(counts[a] / static_cast<double>(trials) - 0.25) < 0.01);
}

TEST_CASE("q_update arithmetic") {
  AgentParams p;  // alpha 0.1, gamma 0.8

  QTable q(2);
  q.row(1) = {0.0, 0.0, 0.0, 0.0};
  (void)q_update(q, 0, Action::Left, 10.0, 1, p);
  CHECK(q.row(0)[0] == doctest::Approx(1.0).epsilon(1e-12));

  QTable q2(2);
  q2.row(0) = {1.0, 0.0, 0.0, 0.0};
  q2.row(1) = {1.0, 0.0, 0.0, 0.0};
  (void)q_update(q2, 0, Action::Left, 0.0, 1, p);
  CHECK(q2.row(0)[0] == doctest::Approx(0.98).epsilon(1e-12));
}

TEST_CASE("zero learning rate leaves the table unchanged") {
  AgentParams p;
  p.alpha = 0.0;
  QTable q(2);
  q.row(0) = {0.3, -0.2, 0.9, 0.0};
  const QVector before = q.row(0);
  const double delta = q_update(q, 0, Action::Up, 123.0, 1, p);
  CHECK(delta == 0.0);
  CHECK(q.row(0) == before);
}

TEST_CASE("q_update rejects non-finite rewards") {
  AgentParams p;
  QTable q(2);
  CHECK_THROWS_AS((void)q_update(q, 0, Action::Left, std::nan(""), 1, p),
                  std::invalid_argument);
}

TEST_CASE("property: update contracts toward the target") {
  AgentParams p;
  RngStream rng(7);
  for (int i = 0; i < 1000; ++i) {
    p.alpha = 0.05 + 0.9 * rng.uniform();
    QTable q(3);
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < 4; ++a) q.row(s)[a] = 20.0 * rng.uniform() - 10.0;
    const int s = static_cast<int>(rng.uniform_below(3));
    const int a = static_cast<int>(rng.uniform_below(4));
    const int s2 = static_cast<int>(rng.uniform_below(3));
    const double reward = 20.0 * rng.uniform() - 10.0;

    const double target =
        reward + p.gamma * *std::max_element(q.row(s2).begin(), q.row(s2).end());
    const double before = std::abs(q.row(s)[a] - target);
    (void)q_update(q, s, static_cast<Action>(a), reward, s2, p);
    const double after = std::abs(q.row(s)[a] - target);
    CHECK(after == doctest::Approx((1.0 - p.alpha) * before).epsilon(1e-9));
  }
}

TEST_CASE("property: positive scaling preserves the greedy set") {
  RngStream rng(8);
  for (int i = 0; i < 500; ++i) {
    QVector row;
    for (int a = 0; a < 4; ++a) row[a] = 10.0 * rng.uniform() - 5.0;
    const double c = 0.1 + 10.0 * rng.uniform();

    auto greedy_set = [](const QVector& v) {
      std::set<int> s;
      const double m = *std::max_element(v.begin(), v.end());
      for (int a = 0; a < 4; ++a)
        if (v[a] == m) s.insert(a);
      return s;
    };
    QVector scaled;
    for (int a = 0; a < 4; ++a) scaled[a] = c * row[a];
    CHECK(greedy_set(row) == greedy_set(scaled));
  }
}

TEST_CASE("visit ledger") {
  AgentLedger ledger(10, 100000, 10000);
  record_visit(ledger, 4);
  record_visit(ledger, 4);
  CHECK(ledger.visits(4) == 2);
  CHECK(ledger.visits(5) == 0);

  AgentParams p;
  for (int i = 0; i < 150; ++i) record_visit(ledger, 7);
  CHECK(ledger.visits(7) >= p.tau);
}

TEST_CASE("qtable csv snapshot shape") {
  QTable q(3);
  q.row(1) = {1.25, -0.5, 0.0, 3.0};
  std::ostringstream out;
  write_qtable_csv(q, out);
  const std::string text = out.str();
  CHECK(text.rfind("state,q_left,q_right,q_up,q_down\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.find("1,1.25,-0.5,0,3") != std::string::npos);
}

TEST_CASE("parameter validation") {
  AgentParams p;
  CHECK_NOTHROW(p.validate());
  p.alpha = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.alpha = 0.1;
  p.tau = 10;
  p.tau_prime = 5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
