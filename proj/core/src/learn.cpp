#include "asl/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace asl {

QTable::QTable(int states, int actions) : states_(states), actions_(actions) {
  if (states < 1 || actions < 1) {
    throw std::invalid_argument("QTable: states and actions must be >= 1");
  }
  values_.assign(static_cast<std::size_t>(states) * actions, 0.0);
  visits_.assign(values_.size(), 0);
}

void QTable::check(int s, int a) const {
  if (s < 0 || s >= states_ || a < 0 || a >= actions_) {
    throw std::out_of_range("QTable: index out of range");
  }
}

double QTable::value(int s, int a) const {
  check(s, a);
  return values_[static_cast<std::size_t>(s) * actions_ + a];
}

void QTable::set_value(int s, int a, double v) {
  check(s, a);
  values_[static_cast<std::size_t>(s) * actions_ + a] = v;
}

double QTable::max_value(int s) const {
  check(s, 0);
  const double* row = values_.data() + static_cast<std::size_t>(s) * actions_;
  double best = row[0];
  for (int a = 1; a < actions_; ++a) best = std::max(best, row[a]);
  return best;
}

int QTable::greedy_action(int s) const {
  check(s, 0);
  const double* row = values_.data() + static_cast<std::size_t>(s) * actions_;
  int best = 0;
  for (int a = 1; a < actions_; ++a) {
    if (row[a] > row[best]) best = a;
  }
  return best;
}

int QTable::visits(int s, int a) const {
  check(s, a);
  return visits_[static_cast<std::size_t>(s) * actions_ + a];
}

void QTable::bump_visits(int s, int a) {
  check(s, a);
  ++visits_[static_cast<std::size_t>(s) * actions_ + a];
}

void q_update(QTable& table, int state, int action, double reward,
              int next_state, bool done, double alpha, double gamma) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("q_update: alpha must be in (0,1]");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("q_update: gamma must be in [0,1)");
  }
  const double bootstrap = done ? 0.0 : gamma * table.max_value(next_state);
  const double current = table.value(state, action);
  table.set_value(state, action, current + alpha * (reward + bootstrap - current));
  table.bump_visits(state, action);
}

ValueIterationResult value_iteration(const ExplicitMdp& mdp, double gamma,
                                     double tolerance, int max_iterations) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  if (S < 1 || A < 1) throw std::invalid_argument("value_iteration: empty MDP");
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("value_iteration: gamma must be in [0,1)");
  }
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      double row = 0.0;
      for (int t = 0; t < S; ++t) row += mdp.transitions[s][a][t];
      if (std::abs(row - 1.0) > 1e-9) {
        throw std::invalid_argument(
            "value_iteration: non-stochastic transition row");
      }
    }
  }

  ValueIterationResult out;
  out.values.assign(static_cast<std::size_t>(S), 0.0);
  std::vector<double> next(static_cast<std::size_t>(S), 0.0);
  for (int it = 0; it < max_iterations; ++it) {
    double delta = 0.0;
    for (int s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        double v = 0.0;
        for (int t = 0; t < S; ++t) {
          v += mdp.transitions[s][a][t] *
               (gamma * (mdp.rewards[s][a][t] + out.values[t]));
        }
        best = std::max(best, v);
      }
      next[s] = best;
      delta = std::max(delta, std::abs(next[s] - out.values[s]));
    }
    out.values.swap(next);
    ++out.iterations;
    if (delta < tolerance) break;
  }

  out.greedy_policy.assign(static_cast<std::size_t>(S), 0);
  for (int s = 0; s < S; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < A; ++a) {
      double v = 0.0;
      for (int t = 0; t < S; ++t) {
        v += mdp.transitions[s][a][t] *
             (gamma * (mdp.rewards[s][a][t] + out.values[t]));
      }
      if (v > best) {
        best = v;
        out.greedy_policy[s] = a;
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> q_star_from_values(
    const ExplicitMdp& mdp, const std::vector<double>& values) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  std::vector<std::vector<double>> q(static_cast<std::size_t>(S),
                                     std::vector<double>(A, 0.0));
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      double v = 0.0;
      for (int t = 0; t < S; ++t) {
        v += mdp.transitions[s][a][t] * (mdp.rewards[s][a][t] + values[t]);
      }
      q[s][a] = v;
    }
  }
  return q;
}

ExplicitMdp toy_mdp_fixture() {
  ExplicitMdp mdp;
  mdp.transitions = {
      {{0.9, 0.1, 0.0}, {0.1, 0.8, 0.1}},
      {{0.5, 0.5, 0.0}, {0.0, 0.2, 0.8}},
      {{0.0, 0.0, 1.0}, {0.7, 0.2, 0.1}},
  };
  mdp.rewards.assign(3, std::vector<std::vector<double>>(
                            2, std::vector<double>(3, 0.0)));
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 2; ++a) mdp.rewards[s][a][2] = 1.0;
  }
  return mdp;
}

}  // namespace asl
