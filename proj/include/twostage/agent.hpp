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
#include <vector>

#include "twostage/model.hpp"

namespace twostage {

struct BestResponse {
  ActionProfile profile;  // finals are nullopt at terminated states
  Rational agent_utility;
  Rational expected_payment;
  Rational principal_profit;
  // U^s per state; zero at terminated states.
  std::vector<Rational> per_state_utility;
};

// Backward induction. Each surviving state picks a utility-maximizing final
// action, preferring the principal's conditional profit among ties and then
// the lowest index; the initial action is chosen the same way on top.
// Tying finals carry equal utility, so the initial argmax does not depend on
// which of them was picked, and this greedy order yields the principal's
// preferred profile among all agent-optimal ones.
// Throws std::invalid_argument on a contract/instance dimension mismatch.
BestResponse best_response(const Instance& instance, const Contract& contract);

struct ProfileEvaluation {
  Rational agent_utility;
  Rational expected_payment;
  Rational principal_profit;
};

// Evaluates a given (not necessarily optimal) profile. For terminate-halfway
// contracts the profile must define finals on exactly the surviving states.
ProfileEvaluation evaluate_profile(const Instance& instance, const Contract& contract,
                                   const ActionProfile& profile);

struct SimulationResult {
  double empirical_profit = 0.0;
  double empirical_payment = 0.0;
  double std_error = 0.0;  // of the profit mean
  std::uint64_t episodes = 0;
};

// Samples episodes of the agent's best-response policy. Episode k draws from
// its own stream derived from (seed, k), so results do not depend on how the
// episodes are scheduled. Outcome sampling inverts the exact CDF against a
// 64-bit uniform integer.
SimulationResult simulate(const Instance& instance, const Contract& contract,
                          std::uint64_t episodes, std::uint64_t seed);

}  // namespace twostage
