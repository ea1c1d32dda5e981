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
#include "doctest.h"
#include "oracles.hpp"
#include "twostage/agent.hpp"
#include "twostage/contracts.hpp"
#include "twostage/generators.hpp"
#include "twostage/linear.hpp"
#include "twostage/welfare.hpp"

namespace twostage {
namespace {

// The contract must make `profile`'s payoff the agent's best and hand the
// principal R_a - payment.
void check_min_payment(const Instance& in, const ActionProfile& profile, const MinPayment& mp) {
  const BestResponse br = best_response(in, mp.contract);
  const ProfileEvaluation e = evaluate_profile(in, mp.contract, profile);
  CHECK(e.agent_utility == br.agent_utility);
  CHECK(e.expected_payment == mp.payment);
  CHECK(br.principal_profit >= e.principal_profit);
}

TEST_CASE("example 1 optima") {
  const Instance in = example1();
  const SolveReport st = optimal_standard(in);
  CHECK(st.profit == Rational(91, 36));
  CHECK(std::get<StandardContract>(st.best_contract).t ==
        std::vector<Rational>{Rational(0), Rational(20, 9)});
  CHECK(st.welfare == Rational(29, 10));
  CHECK(st.best_response.principal_profit == st.profit);

  const SolveReport pay = optimal_pay(in);
  CHECK(pay.profit == Rational(11, 4));
  const auto& pc = std::get<PayHalfwayContract>(pay.best_contract);
  CHECK(pc.s == std::vector<Rational>{Rational(0), Rational(2)});
  CHECK(pay.profit > Rational(2659, 1000));

  const SolveReport term = optimal_terminate(in);
  CHECK(term.profit >= st.profit);
  CHECK(term.termination_sets_enumerated == 4);
}

TEST_CASE("example 2 optima") {
  const Instance in = example2();
  CHECK(optimal_standard(in).profit == Rational(6, 5));
  const SolveReport term = optimal_terminate(in);
  CHECK(term.profit == Rational(19, 10));
  const auto& tc = std::get<TerminateHalfwayContract>(term.best_contract);
  CHECK(tc.terminate_set == std::vector<std::size_t>{0});
  CHECK(tc.t[1] == Rational(800, 99));
  CHECK(optimal_terminate_with_set(in, {0}).profit == Rational(19, 10));
  CHECK(optimal_terminate_with_set(in, {}).profit == Rational(6, 5));
}

TEST_CASE("minimum payments on the separating two-outcome instance") {
  const Instance in = thm2_instance(Rational(9, 10), Rational(1, 2), Rational(1), Rational(20));
  const ActionProfile target = ActionProfile::total(1, {0, 0, 0});
  const auto pay = min_payment_pay(in, target);
  REQUIRE(pay);
  CHECK(pay->payment == Rational(7, 5));
  check_min_payment(in, target, *pay);
  const auto st = min_payment_standard(in, target);
  REQUIRE(st);
  CHECK(std::get<StandardContract>(st->contract).t[1] == Rational(5));
  check_min_payment(in, target, *st);
  // Blocking s1 leaves only s2, where the agent needs c.
  ActionProfile blocked = target;
  blocked.finals[0] = std::nullopt;
  const auto term = min_payment_terminate(in, {0}, blocked);
  REQUIRE(term);
  CHECK(term->payment == Rational(1, 2));
}

TEST_CASE("unincentivizable profiles have no minimum payment") {
  // Effort at "pass" costs 1 and changes nothing.
  const ActionProfile p = ActionProfile::total(0, {1, 0});
  CHECK_FALSE(min_payment_standard(example1(), p).has_value());
  CHECK_FALSE(min_payment_pay(example1(), p).has_value());
}

TEST_CASE("incentive program shape") {
  const Instance in = example1();
  const ActionProfile p = ActionProfile::total(0, {0, 1});
  const auto prog = incentive_program(in, p, {false, false}, true);
  REQUIRE(prog);
  CHECK(prog->num_vars() == 4);
  const auto plain = incentive_program(in, p, {false, false}, false);
  REQUIRE(plain);
  CHECK(plain->num_vars() == 2);
  CHECK_THROWS(incentive_program(in, p, {true, false}, false));
}

TEST_CASE("minimum payments incentivize their profiles on random instances") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance in = random_instance(static_cast<RandomClass>(seed % 4),
                                        oracle::random_sizes(seed, 3, 2, 3, 3), seed);
    oracle::for_each_profile(in, std::vector<bool>(in.num_states(), false),
                             [&](const ActionProfile& p) {
                               CAPTURE(seed);
                               CAPTURE(p.str());
                               const auto st = min_payment_standard(in, p);
                               const auto pay = min_payment_pay(in, p);
                               if (st) {
                                 check_min_payment(in, p, *st);
                                 REQUIRE(pay);  // pay contracts generalize standard ones
                                 CHECK(pay->payment <= st->payment);
                               }
                               if (pay) check_min_payment(in, p, *pay);
                             });
  }
}

TEST_CASE("optima are not beaten by a transfer lattice") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    RandomSizes sz{2, 2, 2, 2};
    const Instance in = random_instance(RandomClass::kGeneral, sz, seed);
    CAPTURE(seed);
    const Rational st = optimal_standard(in).profit;
    CHECK(oracle::grid_standard(in, Rational(1, 2), 24) <= st);
    CHECK(oracle::grid_pay(in, Rational(1), 6) <= optimal_pay(in).profit);
  }
}

TEST_CASE("threads do not change the answer") {
  const Instance in = generate({"thm5", {{"S", "2"}, {"N2", "2"}}});
  SolverOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const SolveReport a = optimal_terminate(in, one), b = optimal_terminate(in, many);
  CHECK(a.profit == b.profit);
  CHECK(a.best_contract == b.best_contract);
  CHECK(a.best_response.profile == b.best_response.profile);
  const SolveReport c = optimal_pay(in, one), d = optimal_pay(in, many);
  CHECK(c.best_contract == d.best_contract);
}

TEST_CASE("caps") {
  SolverOptions tight;
  tight.profiles_cap = 3;
  CHECK_THROWS_AS(optimal_standard(example1(), tight), CapExceeded);
  SolverOptions few;
  few.subsets_cap = 1;
  CHECK_THROWS_AS(optimal_terminate(example1(), few), CapExceeded);
}

TEST_CASE("folding state payments into outcomes on trees") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance in = random_instance(RandomClass::kTree, oracle::random_sizes(seed, 3, 2, 3, 2), seed);
    const SolveReport pay = optimal_pay(in);
    const StandardContract folded =
        pay_to_standard_tree(in, std::get<PayHalfwayContract>(pay.best_contract));
    CAPTURE(seed);
    CHECK(best_response(in, folded).principal_profit == pay.profit);
    ++checked;
  }
  CHECK(checked == 40);
  CHECK_THROWS_AS(pay_to_standard_tree(example1(), PayHalfwayContract{{Rational(0), Rational(0)},
                                                                      {Rational(0), Rational(0)}}),
                  std::invalid_argument);
}

TEST_CASE("deterministic first stage reduces to a single-stage problem") {
  const Instance in = generate({"thm3", {}});
  const SingleStageInstance ssi = reduce_deterministic(in);
  CHECK(ssi.actions.size() == 9);
  CHECK(optimal_single_stage(ssi).profit == optimal_standard(in).profit);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance r = random_instance(RandomClass::kDeterministicFirstStage,
                                       oracle::random_sizes(seed, 3, 3, 3, 3), seed);
    CAPTURE(seed);
    CHECK(optimal_single_stage(reduce_deterministic(r)).profit == optimal_standard(r).profit);
  }
  CHECK_THROWS_AS(reduce_deterministic(example1()), std::invalid_argument);
}

TEST_CASE("single-stage solver on a textbook instance") {
  // Two outcomes, reward 10 on success; work costs 1 and succeeds w.p. 3/4.
  SingleStageInstance ssi;
  ssi.rewards = {Rational(0), Rational(10)};
  ssi.actions = {{"null", Rational(0), {Rational(3, 4), Rational(1, 4)}},
                 {"work", Rational(1), {Rational(1, 4), Rational(3, 4)}}};
  const SingleStageSolution sol = optimal_single_stage(ssi);
  CHECK(sol.action == 1);
  CHECK(sol.contract.t[1] == Rational(2));
  CHECK(sol.profit == Rational(15, 2) - Rational(3, 2));
}

TEST_CASE("linear never beats standard; standard never beats pay or terminate") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance in = random_instance(RandomClass::kGeneral, oracle::random_sizes(seed, 3, 3, 3, 3), seed);
    CAPTURE(seed);
    const Rational st = optimal_standard(in).profit;
    CHECK(optimal_linear(in).profit <= st);
    CHECK(optimal_pay(in).profit >= st);
    CHECK(optimal_terminate(in).profit >= st);
    CHECK(st <= max_welfare(in).max_welfare);
  }
}

}  // namespace
}  // namespace twostage
