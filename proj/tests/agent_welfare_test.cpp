// Copyright 2026 The twostage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "twostage/agent.hpp"
#include "twostage/generators.hpp"
#include "twostage/welfare.hpp"

namespace twostage {
namespace {

const PayHalfwayContract kExample1Pay{{Rational(0), Rational(2)}, {Rational(0), Rational(1, 10)}};
const TerminateHalfwayContract kExample2Terminate{{Rational(0), Rational(41, 5)}, {0}};

TEST_CASE("example 1 pay contract") {
  const BestResponse br = best_response(example1(), kExample1Pay);
  CHECK(br.profile.str() == "0|1,1");
  CHECK(br.principal_profit == Rational(2659, 1000));
  // effort then null at both states: 0.1*0.1*0.1 + 0.9*(2 + 0.1) - 1.8
  CHECK(br.agent_utility == Rational(1, 1000) + Rational(189, 100) - Rational(9, 5));
  CHECK(br.expected_payment == Rational(1891, 1000));
}

TEST_CASE("example 2 terminate contract") {
  const BestResponse br = best_response(example2(), kExample2Terminate);
  CHECK(br.profile.str() == "0|-,1");
  CHECK(br.principal_profit == Rational(891, 500));
  CHECK(br.per_state_utility[0] == Rational(0));
}

TEST_CASE("zero contract leaves the agent idle") {
  const BestResponse br = best_response(example1(), StandardContract{{Rational(0), Rational(0)}});
  CHECK(br.profile.initial == 1);
  CHECK(br.agent_utility == Rational(0));
  CHECK(br.principal_profit == Rational(1, 2));  // fail state, null: 0.1 * 5
}

TEST_CASE("ties go to the principal") {
  // At t = (0, 20/9) both initial actions give the agent 2/9; the principal
  // prefers effort.
  const BestResponse br =
      best_response(example1(), StandardContract{{Rational(0), Rational(20, 9)}});
  CHECK(br.profile.str() == "0|1,1");
  CHECK(br.agent_utility == Rational(2, 9));
  CHECK(br.principal_profit == Rational(91, 36));
}

TEST_CASE("evaluate_profile agrees with the definitions") {
  const Instance in = example1();
  const ActionProfile p = ActionProfile::total(0, {0, 1});
  const ProfileEvaluation e = evaluate_profile(in, kExample1Pay, p);
  const auto [u, v] = oracle::evaluate(in, resolve(in, kExample1Pay), p);
  CHECK(e.agent_utility == u);
  CHECK(e.principal_profit == v);
  CHECK(e.expected_payment + e.principal_profit == Rational(9, 10) * Rational(5) +
                                                      Rational(1, 10) * Rational(4));

  ActionProfile bad;
  bad.initial = 0;
  bad.finals = {0, 1};
  CHECK_THROWS(evaluate_profile(example2(), kExample2Terminate, bad));
  bad.finals = {std::nullopt, std::nullopt};
  CHECK_THROWS(evaluate_profile(example2(), kExample2Terminate, bad));
}

TEST_CASE("best response matches exhaustive search on random instances") {
  std::mt19937_64 g(99);
  auto frac = [&](long max) { return Rational(std::uniform_int_distribution<long>(0, max)(g), 4); };
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto cls = static_cast<RandomClass>(seed % 4);
    const Instance in = random_instance(cls, oracle::random_sizes(seed, 3, 3, 3, 3), seed);
    std::vector<Rational> t, s;
    for (std::size_t m = 0; m < in.num_outcomes(); ++m) t.push_back(frac(24));
    for (std::size_t k = 0; k < in.num_states(); ++k) s.push_back(frac(12));
    std::vector<std::size_t> dead;
    for (std::size_t k = 0; k < in.num_states(); ++k) {
      if (g() % 3 == 0) dead.push_back(k);
    }
    for (const Contract& c : {Contract(StandardContract{t}), Contract(PayHalfwayContract{s, t}),
                              Contract(TerminateHalfwayContract{t, dead}),
                              Contract(LinearContract{Rational(static_cast<long>(g() % 9), 8)})}) {
      CAPTURE(seed);
      CAPTURE(contract_kind(c));
      const BestResponse br = best_response(in, c);
      const oracle::Outcome want = oracle::best_response(in, c);
      CHECK(br.agent_utility == want.utility);
      CHECK(br.principal_profit == want.profit);
      const ProfileEvaluation e = evaluate_profile(in, c, br.profile);
      CHECK(e.agent_utility == br.agent_utility);
      CHECK(e.principal_profit == br.principal_profit);
    }
  }
}

TEST_CASE("dimension mismatch is rejected") {
  CHECK_THROWS_AS(best_response(example1(), StandardContract{{Rational(1)}}),
                  std::invalid_argument);
}

TEST_CASE("welfare of the examples") {
  const WelfareReport w1 = max_welfare(example1());
  CHECK(w1.max_welfare == Rational(29, 10));
  CHECK(w1.argmax_profile.str() == "0|0,1");
  CHECK(w1.per_state_best[0].surplus == Rational(2));
  const WelfareReport w2 = max_welfare(example2());
  CHECK(w2.max_welfare == Rational(2));
  CHECK(w2.argmax_profile.str() == "1|0,0");
  CHECK(profile_reward(example1(), w1.argmax_profile) -
            profile_cost(example1(), w1.argmax_profile) ==
        w1.max_welfare);
}

TEST_CASE("decomposed welfare matches brute force") {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const auto cls = static_cast<RandomClass>(seed % 4);
    const Instance in = random_instance(cls, oracle::random_sizes(seed + 1000, 4, 3, 3, 3), seed);
    const WelfareReport w = max_welfare(in);
    CAPTURE(seed);
    CHECK(w.max_welfare == oracle::welfare(in));
    CHECK(profile_reward(in, w.argmax_profile) - profile_cost(in, w.argmax_profile) ==
          w.max_welfare);
  }
}

TEST_CASE("profile reward needs a total profile") {
  ActionProfile p;
  p.finals = {std::nullopt, 0};
  CHECK_THROWS(profile_reward(example1(), p));
}

TEST_CASE("simulation is seeded and close to the analytic value") {
  const Instance in = example1();
  const SimulationResult a = simulate(in, kExample1Pay, 20000, 5);
  const SimulationResult b = simulate(in, kExample1Pay, 20000, 5);
  const SimulationResult c = simulate(in, kExample1Pay, 20000, 6);
  CHECK(a.empirical_profit == b.empirical_profit);
  CHECK(a.empirical_profit != c.empirical_profit);
  CHECK(a.episodes == 20000);
  CHECK(a.std_error > 0.0);
  CHECK(std::abs(a.empirical_profit - 2.659) < 5 * a.std_error);
  // Degenerate: deterministic outcome has zero spread.
  Instance sure = example1();
  sure.initial_actions[1].transition = {Rational(0), Rational(1)};
  const SimulationResult d = simulate(sure, StandardContract{{Rational(0), Rational(0)}}, 100, 1);
  CHECK(d.empirical_profit == doctest::Approx(5.0));
  CHECK(d.std_error == 0.0);
}

}  // namespace
}  // namespace twostage
