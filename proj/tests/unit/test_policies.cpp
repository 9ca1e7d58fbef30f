#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "asl/policies.hpp"

using namespace asl;

namespace {

PerceptionModel uniform_model(int classes, int dim) {
  PerceptionModel m;
  m.classes = classes;
  m.dim = dim;
  m.weights.assign(static_cast<std::size_t>(classes) * dim, 0.0);
  m.bias.assign(static_cast<std::size_t>(classes), 0.0);
  return m;
}

Observation obs_from(std::vector<double> values) {
  Observation obs;
  obs.channels.push_back({"visual", std::move(values),
                          std::vector<bool>(2, false), SensorOption{}});
  return obs;
}

}  // namespace

TEST_CASE("sampling the whole grid returns it as a set") {
  OptionSpace space({{"a", 0.0, 1.0, 4}, {"b", 0.0, 1.0, 2}});
  const auto indices = sample_candidate_indices(space, 8, 123);
  CHECK(std::set<int>(indices.begin(), indices.end()).size() == 8);
}

TEST_CASE("a single sample is a valid grid option") {
  OptionSpace space({{"a", -1.0, 1.0, 5}});
  const auto options = sample_candidates(space, 1, 9);
  REQUIRE(options.size() == 1);
  CHECK(space.contains(options[0]));
}

TEST_CASE("sample_candidates validates k") {
  OptionSpace space({{"a", 0.0, 1.0, 3}});
  CHECK_THROWS_AS(sample_candidates(space, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_candidates(space, 4, 1), std::invalid_argument);
}

TEST_CASE("inclusion frequency matches k over grid size") {
  OptionSpace space({{"a", 0.0, 1.0, 8}});
  std::map<int, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    for (int idx : sample_candidate_indices(space, 2, static_cast<std::uint64_t>(i))) {
      counts[idx] += 1;
    }
  }
  for (const auto& [idx, count] : counts) {
    CHECK(static_cast<double>(count) / draws == doctest::Approx(0.25).epsilon(0.04));
  }
}

TEST_CASE("candidates are distinct grid options under fuzz") {
  Rng rng(88);
  for (int trial = 0; trial < 300; ++trial) {
    OptionSpace space({{"a", -2.0, 2.0, 1 + rng.uniform_int(6)},
                       {"b", 0.0, 1.0, 1 + rng.uniform_int(4)}});
    const int k = 1 + rng.uniform_int(space.total_size());
    const auto options = sample_candidates(space, k, rng.next_u64());
    std::set<int> seen;
    for (const SensorOption& o : options) {
      CHECK(space.contains(o));
      seen.insert(space.flat_index(o.axis_index));
    }
    CHECK(static_cast<int>(seen.size()) == k);
  }
}

TEST_CASE("single-shot selection basics") {
  const PerceptionModel model = uniform_model(3, 2);
  SensorOption opt;
  opt.values = {0.0, 1.0};

  SUBCASE("single candidate wins by default") {
    std::vector<std::pair<SensorOption, Observation>> cands;
    cands.emplace_back(opt, obs_from({0.1, 0.2}));
    const auto [idx, q] = select_single_shot(cands, model);
    CHECK(idx == 0);
    CHECK(q.value() == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("identical observations tie-break to the lowest index") {
    std::vector<std::pair<SensorOption, Observation>> cands;
    for (int i = 0; i < 5; ++i) cands.emplace_back(opt, obs_from({0.4, 0.4}));
    const auto [idx, q] = select_single_shot(cands, model);
    CHECK(idx == 0);
  }
  SUBCASE("empty list errors") {
    CHECK_THROWS_AS(select_single_shot({}, model), std::invalid_argument);
  }
}

TEST_CASE("selection is invariant under strictly increasing quality transforms") {
  // Sharpening the model monotonically transforms every confidence, so the
  // argmax candidate must not move.
  PerceptionModel mild = uniform_model(2, 2);
  mild.weights = {1.0, 0.5, -1.0, 0.25};
  PerceptionModel sharp = mild;
  for (double& w : sharp.weights) w *= 3.0;  // logit scaling: monotone in confidence

  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<SensorOption, Observation>> cands;
    for (int i = 0; i < 6; ++i) {
      cands.emplace_back(SensorOption{},
                         obs_from({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)}));
    }
    const auto [idx_mild, q_mild] = select_single_shot(cands, mild);
    const auto [idx_sharp, q_sharp] = select_single_shot(cands, sharp);
    CHECK(idx_mild == idx_sharp);
  }
}

TEST_CASE("quality bucket boundaries") {
  CHECK(quality_bucket(0.0, 4) == 0);
  CHECK(quality_bucket(0.24, 4) == 0);
  CHECK(quality_bucket(0.25, 4) == 1);
  CHECK(quality_bucket(1.0, 4) == 3);  // clamped at the top
  CHECK_THROWS_AS(quality_bucket(1.5, 4), std::invalid_argument);
}

TEST_CASE("greedy sense step picks the strictly maximal entry") {
  SensePolicyState state(4, 6, 0.0, 0.5);
  state.table().set_value(state.state_index(2, 1), 4, 1.0);
  CHECK(sense_policy_step(state, 0.6, 1, 42) == 4);
}

TEST_CASE("epsilon = 1 sensing is empirically uniform") {
  SensePolicyState state(2, 5, 1.0, 0.5);
  std::map<int, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    counts[sense_policy_step(state, 0.3, 2, static_cast<std::uint64_t>(i))] += 1;
  }
  for (const auto& [option, count] : counts) {
    CHECK(static_cast<double>(count) / draws == doctest::Approx(0.2).epsilon(0.1));
    CHECK(std::abs(static_cast<double>(count) / draws - 0.2) < 0.02);
  }
}

TEST_CASE("epsilon-greedy equals argmax at epsilon zero") {
  SensePolicyState state(1, 4, 0.0, 0.5);
  state.table().set_value(0, 2, 0.7);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CHECK(sense_policy_step(state, 0.0, 0, seed) == 2);
  }
}

TEST_CASE("action policy tie-break and greedy frequency") {
  SUBCASE("equal values tie-break to action 0") {
    ActionPolicyState state(3, 2, 2, 0.0, 0.5);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      CHECK(action_policy_step(state, 1, 1, 0.4, seed) == 0);
    }
  }
  SUBCASE("strictly maximal entry is chosen greedily") {
    ActionPolicyState state(3, 2, 4, 0.0, 0.5);
    state.table().set_value(state.state_index(2, 1, 3), 2, 5.0);
    CHECK(action_policy_step(state, 2, 3, 0.9, 7) == 2);
  }
  SUBCASE("epsilon 0.5 greedy frequency is 1 - eps + eps/|A|") {
    ActionPolicyState state(1, 1, 2, 0.5, 0.5);
    state.table().set_value(0, 1, 1.0);  // greedy action is 1
    int greedy = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      if (action_policy_step(state, 0, 0, 0.0, static_cast<std::uint64_t>(i)) == 1) {
        ++greedy;
      }
    }
    CHECK(static_cast<double>(greedy) / draws == doctest::Approx(0.75).epsilon(0.027));
  }
}

TEST_CASE("multi-sense weight update") {
  std::vector<SensePolicyState> states;
  states.emplace_back(4, 3, 0.1, 0.5);
  states.emplace_back(4, 3, 0.1, 0.5);

  SUBCASE("equal qualities give uniform weights") {
    const auto d = multi_sense_policy_step(states, 2.0, {0.6, 0.6}, {0, 1}, 5);
    CHECK(d.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.weights[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("zero temperature ignores qualities") {
    const auto d = multi_sense_policy_step(states, 0.0, {0.9, 0.1}, {0, 1}, 5);
    CHECK(d.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.weights[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("unit temperature hand-computed logistic") {
    const auto d = multi_sense_policy_step(states, 1.0, {1.0, 0.0}, {0, 1}, 5);
    CHECK(d.weights[0] == doctest::Approx(0.7310585786300049).epsilon(1e-3));
    CHECK(d.weights[1] == doctest::Approx(0.2689414213699951).epsilon(1e-3));
  }
  SUBCASE("modality mismatch errors") {
    CHECK_THROWS_AS(multi_sense_policy_step(states, 1.0, {0.5}, {0, 1}, 5),
                    std::invalid_argument);
  }
}

TEST_CASE("multi-sense weights satisfy the simplex invariant under fuzz") {
  std::vector<SensePolicyState> states;
  states.emplace_back(4, 4, 0.3, 0.5);
  states.emplace_back(4, 4, 0.3, 0.5);
  states.emplace_back(4, 4, 0.3, 0.5);
  Rng rng(999);
  for (int trial = 0; trial < 20000; ++trial) {
    const std::vector<double> qs = {rng.uniform(), rng.uniform(), rng.uniform()};
    const std::vector<int> prev = {rng.uniform_int(4), rng.uniform_int(4),
                                   rng.uniform_int(4)};
    const auto d = multi_sense_policy_step(states, rng.uniform(0.0, 8.0), qs,
                                           prev, rng.next_u64());
    double sum = 0.0;
    for (double w : d.weights.values()) {
      REQUIRE(w >= 0.0);
      REQUIRE(w <= 1.0);
      sum += w;
    }
    REQUIRE(std::abs(sum - 1.0) <= 1e-9);
    for (int idx : d.option_indices) {
      REQUIRE(idx >= 0);
      REQUIRE(idx < 4);
    }
  }
}

TEST_CASE("policy tables round-trip through the flat text format") {
  SensePolicyState sense(3, 4, 0.25, 0.125);
  Rng rng(5150);
  for (int s = 0; s < sense.table().states(); ++s) {
    for (int a = 0; a < sense.table().actions(); ++a) {
      sense.table().set_value(s, a, rng.normal(0.0, 2.0));
    }
  }
  const std::string path = "asl_sense_policy_roundtrip.txt";
  save_sense_policy(sense, path);
  const SensePolicyState loaded = load_sense_policy(path);
  CHECK(loaded.quality_buckets() == 3);
  CHECK(loaded.option_count() == 4);
  CHECK(loaded.epsilon() == 0.25);
  CHECK(loaded.alpha() == 0.125);
  CHECK(loaded.table().data() == sense.table().data());
  std::remove(path.c_str());

  ActionPolicyState action(5, 2, 3, 0.5, 0.75);
  for (int s = 0; s < action.table().states(); ++s) {
    for (int a = 0; a < action.table().actions(); ++a) {
      action.table().set_value(s, a, rng.normal(0.0, 2.0));
    }
  }
  const std::string apath = "asl_action_policy_roundtrip.txt";
  save_action_policy(action, apath);
  const ActionPolicyState aloaded = load_action_policy(apath);
  CHECK(aloaded.obs_buckets() == 5);
  CHECK(aloaded.quality_buckets() == 2);
  CHECK(aloaded.action_count() == 3);
  CHECK(aloaded.table().data() == action.table().data());
  std::remove(apath.c_str());
}
