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
#include "twostage/generators.hpp"
#include "twostage/io.hpp"
#include "twostage/welfare.hpp"

namespace twostage {
namespace {

std::string error_of(const FamilyParams& fp) {
  try {
    generate(fp);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

TEST_CASE("every family generates a valid instance") {
  for (const auto& name : family_names()) {
    CAPTURE(name);
    const Instance in = generate({name, {}});
    CHECK(validate(in).ok());
  }
}

TEST_CASE("fixed examples") {
  CHECK(max_welfare(generate({"example1", {}})).max_welfare == Rational(29, 10));
  const Instance ex2 = example2();
  CHECK(ex2.states[1].name == "well");
  CHECK(ex2.states[1].final_actions[1].outcome_dist[1] == Rational(1));
  CHECK(max_welfare(ex2).max_welfare == Rational(2));
}

TEST_CASE("two-outcome separating family") {
  const Instance in = generate({"thm2", {{"p", "0.9"}, {"q", "1/2"}, {"c", "1"}, {"x", "20"}}});
  CHECK(in.num_states() == 3);
  CHECK(in.rewards[1] == Rational(20));
  CHECK(in.transition(0, 0) == Rational(9, 10));
  CHECK(in.transition(1, 1) == Rational(1, 2));
  CHECK(max_welfare(in).max_welfare == Rational(39, 2));  // x - (1-q)c

  CHECK(error_of({"thm2", {{"p", "0.4"}}}).find("q < p") != std::string::npos);
  CHECK(error_of({"thm2", {{"p", "1"}}}).find("p < 1") != std::string::npos);
  CHECK(error_of({"thm2", {{"x", "1/2"}}}).find("c < x") != std::string::npos);
  CHECK(error_of({"thm2", {{"x", "10"}}}).find("x > (1+p-q)c/(1-p)") != std::string::npos);
}

TEST_CASE("deterministic first-stage family") {
  const Instance in = generate({"thm3", {{"N1", "2"}, {"N2", "2"}, {"lambda", "10"}}});
  CHECK(classify(in).is_deterministic_first_stage);
  CHECK(in.num_initial() == 3);
  CHECK(in.max_final_count() == 3);
  CHECK(max_welfare(in).max_welfare == Rational(7));
  // c = 10 + ... + 10^7, R = c + 7, r the next power of ten.
  CHECK(in.initial_actions[2].cost == Rational(11111110));
  CHECK(in.rewards[1] == Rational(100000000));
  CHECK(in.rewards[1] == thm3_default_r(2, 2, Rational(10)));
  CHECK(error_of({"thm3", {{"r", "1000"}}}).find("r >= R") != std::string::npos);
  for (long n = 1; n <= 3; ++n) {
    const std::string ns = std::to_string(n);
    CHECK(max_welfare(generate({"thm3", {{"N1", ns}, {"N2", ns}}})).max_welfare ==
          Rational((n + 1) * n + 1));
  }
}

TEST_CASE("stochastic first-stage family") {
  const Instance in = generate({"thm5", {{"S", "2"}, {"N2", "2"}, {"ε", "1/1000"}}});
  CHECK(classify(in).is_stochastic_first_stage);
  CHECK(in.num_outcomes() == 5);
  CHECK(in.num_states() == 5);
  // (S+3) S N2 / (2(2S+1))
  CHECK(max_welfare(in).max_welfare == Rational(2));
  const Rational r = in.rewards[1];
  CHECK(r == thm5_default_r(2, 2, Rational(10), Rational(1, 1000)));
  // Designated action at s1 puts epsilon on outcome 3; the other on outcome S+3.
  CHECK(in.final_action(0, 1).outcome_dist[2] == Rational(1, 1000));
  CHECK(in.final_action(0, 0).outcome_dist[4] == Rational(1, 1000));
  // Worthless states lead to outcome s - S + 2.
  CHECK(in.final_action(2, 0).outcome_dist[2] == Rational(1));
  CHECK(in.final_action(4, 1).outcome_dist[4] == Rational(1));
  CHECK(error_of({"thm5", {{"epsilon", "1"}}}).find("0 < epsilon < 1") != std::string::npos);
  CHECK(error_of({"thm5", {{"r", "100"}}}).find("r > max") != std::string::npos);
  for (long n = 1; n <= 3; ++n) {
    const std::string ns = std::to_string(n);
    CHECK(max_welfare(generate({"thm5", {{"S", ns}, {"N2", ns}}})).max_welfare ==
          Rational((n + 3) * n * n, 2 * (2 * n + 1)));
  }
}

TEST_CASE("parameter errors") {
  CHECK(error_of({"thm9", {}}).find("unknown family") != std::string::npos);
  CHECK(error_of({"thm2", {{"z", "1"}}}).find("unknown parameter") != std::string::npos);
  CHECK(error_of({"thm3", {{"N1", "1.5"}}}).find("integer N1") != std::string::npos);
  CHECK(error_of({"thm2", {{"p", "abc"}}}).find("not a number") != std::string::npos);
  CHECK(error_of({"random_tree", {{"seed", "-1"}}}).find("seed") != std::string::npos);
}

TEST_CASE("random instances are reproducible and of the requested class") {
  const RandomSizes sz{3, 2, 3, 2};
  CHECK(random_instance(RandomClass::kTree, sz, 7) == random_instance(RandomClass::kTree, sz, 7));
  CHECK_FALSE(random_instance(RandomClass::kTree, sz, 7) ==
              random_instance(RandomClass::kTree, sz, 8));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (auto cls : {RandomClass::kTree, RandomClass::kStochasticFirstStage,
                     RandomClass::kDeterministicFirstStage, RandomClass::kGeneral}) {
      const Instance in = random_instance(cls, sz, seed);
      CHECK(validate(in).ok());
      CHECK(matches(classify(in), cls));
      CHECK_FALSE(has_negative_reward(in));
      if (cls == RandomClass::kStochasticFirstStage) CHECK(in.num_initial() == 1);
      for (const auto& st : in.states) {
        for (const auto& a : st.final_actions) {
          for (const auto& p : a.outcome_dist) CHECK(p.denominator() <= 12);
        }
      }
    }
  }
  const Instance via_generate =
      generate({"random_general", {{"S", "3"}, {"N1", "2"}, {"N2", "3"}, {"M", "2"}, {"seed", "11"}}});
  CHECK(via_generate == random_instance(RandomClass::kGeneral, {3, 2, 3, 2}, 11));
}

}  // namespace
}  // namespace twostage
