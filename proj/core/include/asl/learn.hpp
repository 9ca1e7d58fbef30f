#pragma once

#include <cstddef>
#include <vector>

namespace asl {

// Dense state x action value table.
class QTable {
 public:
  QTable() = default;
  QTable(int states, int actions);

  int states() const { return states_; }
  int actions() const { return actions_; }

  double value(int s, int a) const;
  void set_value(int s, int a, double v);
  double max_value(int s) const;
  // Lowest-index argmax.
  int greedy_action(int s) const;

  int visits(int s, int a) const;
  void bump_visits(int s, int a);

  const std::vector<double>& data() const { return values_; }
  std::vector<double>& data() { return values_; }

 private:
  void check(int s, int a) const;

  int states_ = 0;
  int actions_ = 0;
  std::vector<double> values_;
  std::vector<int> visits_;
};

// One tabular Q-learning backup:
//   Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') * (1 - done) - Q(s,a))
// Bumps the visit count for (s,a).
void q_update(QTable& table, int state, int action, double reward,
              int next_state, bool done, double alpha, double gamma);

// Explicit finite MDP: transitions[s][a][s'] row-stochastic, rewards[s][a][s']
// attributed on entry to s'.
struct ExplicitMdp {
  std::vector<std::vector<std::vector<double>>> transitions;
  std::vector<std::vector<std::vector<double>>> rewards;

  int num_states() const { return static_cast<int>(transitions.size()); }
  int num_actions() const {
    return transitions.empty() ? 0 : static_cast<int>(transitions[0].size());
  }
};

struct ValueIterationResult {
  std::vector<double> values;
  std::vector<int> greedy_policy;  // lowest-index tie-break
  int iterations = 0;
};

// Exact dynamic programming on an explicit MDP. Documented convention:
// rewards are attributed on transition entry and discounted once from the
// deciding state's viewpoint,
//   V(s) = max_a sum_s' P(s'|s,a) * gamma * (R(s,a,s') + V(s')),
// i.e. the return is sum_{t>=1} gamma^t r_t. The Q-learning fixed point
// (first reward undiscounted) relates to it as
//   Q*(s,a) = sum_s' P(s'|s,a) * (R(s,a,s') + V(s')).
// Throws if any transition row does not sum to 1 within 1e-9.
ValueIterationResult value_iteration(const ExplicitMdp& mdp, double gamma,
                                     double tolerance,
                                     int max_iterations = 100000);

// Q-learning targets consistent with value_iteration's convention (see above).
std::vector<std::vector<double>> q_star_from_values(
    const ExplicitMdp& mdp, const std::vector<double>& values);

// Fixed, documented 3-state 2-action MDP used by convergence tests.
// Action 0 holds position, action 1 advances toward state 2 with some slip;
// every transition entering state 2 pays reward 1. Optimal policy at
// gamma = 0.9 is (advance, advance, hold).
ExplicitMdp toy_mdp_fixture();

}  // namespace asl
