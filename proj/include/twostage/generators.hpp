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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twostage/model.hpp"

namespace twostage {

// A named instance family plus its parameters as text ("9/10", "0.9", "3").
// Unset parameters take the family defaults.
//
//   thm2:    p, q, c, x             (defaults 9/10, 1/2, 1, 20)
//   thm3:    N1, N2, lambda, r      (defaults 2, 2, 10, smallest valid 10^k)
//   thm5:    S, N2, lambda, epsilon, r
//                                   (defaults 2, 2, 10, 1/1000, smallest valid 10^k)
//   random_*: S, N1, N2, M, seed
struct FamilyParams {
  std::string family;
  std::map<std::string, std::string> params;
};

std::vector<std::string> family_names();

// Builds the instance; throws std::invalid_argument naming the violated
// constraint (e.g. "thm2 requires q < p") or an unknown family/parameter.
Instance generate(const FamilyParams& params);

// Fixed instances.
Instance example1();
// "well" is the state where both final actions succeed.
Instance example2();

// Two-outcome, three-state instance where per-state payments undercut any
// standard contract.
Instance thm2_instance(const Rational& p, const Rational& q, const Rational& c,
                       const Rational& x);

// Deterministic first stage; N1 free initial actions plus one costly one
// leading to a state whose every action pays off.
Instance thm3_instance(std::size_t n1, std::size_t n2, const Rational& lambda,
                       const Rational& r);
// Smallest power of ten r with every success probability R/r <= 1.
Rational thm3_default_r(std::size_t n1, std::size_t n2, const Rational& lambda);

// Stochastic first stage over 2S+1 states; states past S are worth nothing
// and are best terminated.
Instance thm5_instance(std::size_t s, std::size_t n2, const Rational& lambda,
                       const Rational& epsilon, const Rational& r);
// Smallest power of ten strictly above max R / (1 - epsilon).
Rational thm5_default_r(std::size_t s, std::size_t n2, const Rational& lambda,
                        const Rational& epsilon);

enum class RandomClass { kTree, kStochasticFirstStage, kDeterministicFirstStage, kGeneral };

struct RandomSizes {
  std::size_t states = 3;
  std::size_t initial = 2;   // forced to 1 for kStochasticFirstStage
  std::size_t finals = 3;    // per state, including the null action
  std::size_t outcomes = 4;  // for kTree, outcomes per state
};

// Small random instance of the requested class. Probabilities have
// denominators up to 12, costs are multiples of 1/2, rewards are nonnegative
// integers. The same (class, sizes, seed) always yields the same instance.
Instance random_instance(RandomClass cls, const RandomSizes& sizes, std::uint64_t seed);

bool matches(const ProcessClass& pc, RandomClass cls);

}  // namespace twostage
