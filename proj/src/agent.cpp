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

#include "twostage/agent.hpp"

#include <stdexcept>

namespace twostage {

BestResponse best_response(const Instance& instance, const Contract& contract) {
  const ResolvedContract rc = resolve(instance, contract);
  const std::size_t n_states = instance.num_states();

  BestResponse br;
  br.profile.finals.assign(n_states, std::nullopt);
  br.per_state_utility.assign(n_states, Rational{});

  // Per surviving state: chosen final, its expected transfer and reward.
  std::vector<Rational> state_payment(n_states);
  std::vector<Rational> state_reward(n_states);

  for (std::size_t s = 0; s < n_states; ++s) {
    if (rc.terminated[s]) continue;
    const auto& finals = instance.states[s].final_actions;
    std::size_t best = 0;
    Rational best_utility;
    Rational best_profit;
    Rational best_pay;
    Rational best_reward;
    for (std::size_t j = 0; j < finals.size(); ++j) {
      Rational pay = expected_transfer(instance, s, j, rc.t);
      Rational reward = expected_state_reward(instance, s, j);
      Rational utility = pay - finals[j].cost;
      Rational profit = reward - pay;
      if (j == 0 || utility > best_utility || (utility == best_utility && profit > best_profit)) {
        best = j;
        best_utility = std::move(utility);
        best_profit = std::move(profit);
        best_pay = std::move(pay);
        best_reward = std::move(reward);
      }
    }
    br.profile.finals[s] = best;
    br.per_state_utility[s] = std::move(best_utility);
    state_payment[s] = std::move(best_pay);
    state_reward[s] = std::move(best_reward);
  }

  Rational best_utility;
  Rational best_profit;
  Rational best_payment;
  for (std::size_t i = 0; i < instance.num_initial(); ++i) {
    const auto& action = instance.initial_actions[i];
    Rational utility = -action.cost;
    Rational payment;
    Rational reward;
    for (std::size_t s = 0; s < n_states; ++s) {
      const Rational& p = action.transition[s];
      if (rc.terminated[s] || p.is_zero()) continue;
      utility += p * (br.per_state_utility[s] + rc.s[s]);
      payment += p * (state_payment[s] + rc.s[s]);
      reward += p * state_reward[s];
    }
    Rational profit = reward - payment;
    if (i == 0 || utility > best_utility || (utility == best_utility && profit > best_profit)) {
      br.profile.initial = i;
      best_utility = std::move(utility);
      best_profit = std::move(profit);
      best_payment = std::move(payment);
    }
  }
  br.agent_utility = std::move(best_utility);
  br.expected_payment = std::move(best_payment);
  br.principal_profit = std::move(best_profit);
  return br;
}

ProfileEvaluation evaluate_profile(const Instance& instance, const Contract& contract,
                                   const ActionProfile& profile) {
  const ResolvedContract rc = resolve(instance, contract);
  const std::size_t n_states = instance.num_states();
  if (profile.initial >= instance.num_initial()) {
    throw std::out_of_range("profile initial action out of range");
  }
  if (profile.finals.size() != n_states) {
    throw std::invalid_argument("profile has " + std::to_string(profile.finals.size()) +
                                " finals, expected " + std::to_string(n_states));
  }
  for (std::size_t s = 0; s < n_states; ++s) {
    if (rc.terminated[s] && profile.finals[s]) {
      throw std::invalid_argument("profile references terminated state " + std::to_string(s));
    }
    if (!rc.terminated[s] && !profile.finals[s]) {
      throw std::invalid_argument("profile has no final action for surviving state " +
                                  std::to_string(s));
    }
    if (profile.finals[s] && *profile.finals[s] >= instance.states[s].final_actions.size()) {
      throw std::out_of_range("profile final action out of range at state " + std::to_string(s));
    }
  }

  const auto& action = instance.initial_actions[profile.initial];
  ProfileEvaluation ev;
  ev.agent_utility = -action.cost;
  Rational reward;
  for (std::size_t s = 0; s < n_states; ++s) {
    const Rational& p = action.transition[s];
    if (rc.terminated[s] || p.is_zero()) continue;
    const std::size_t j = *profile.finals[s];
    const Rational pay = expected_transfer(instance, s, j, rc.t);
    ev.agent_utility += p * (pay - instance.final_action(s, j).cost + rc.s[s]);
    ev.expected_payment += p * (pay + rc.s[s]);
    reward += p * expected_state_reward(instance, s, j);
  }
  ev.principal_profit = reward - ev.expected_payment;
  return ev;
}

}  // namespace twostage
