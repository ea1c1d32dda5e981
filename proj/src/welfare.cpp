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

#include "twostage/welfare.hpp"

#include <stdexcept>

namespace twostage {

namespace {

void check_total(const Instance& instance, const ActionProfile& profile) {
  if (profile.initial >= instance.num_initial()) {
    throw std::out_of_range("profile initial action out of range");
  }
  if (profile.finals.size() != instance.num_states()) {
    throw std::invalid_argument("profile length does not match the state count");
  }
  for (std::size_t s = 0; s < profile.finals.size(); ++s) {
    if (!profile.finals[s]) throw std::invalid_argument("profile is not total");
    if (*profile.finals[s] >= instance.states[s].final_actions.size()) {
      throw std::out_of_range("profile final action out of range at state " + std::to_string(s));
    }
  }
}

}  // namespace

Rational profile_reward(const Instance& instance, const ActionProfile& profile) {
  check_total(instance, profile);
  const auto& action = instance.initial_actions[profile.initial];
  Rational sum;
  for (std::size_t s = 0; s < instance.num_states(); ++s) {
    if (action.transition[s].is_zero()) continue;
    sum += action.transition[s] * expected_state_reward(instance, s, *profile.finals[s]);
  }
  return sum;
}

Rational profile_cost(const Instance& instance, const ActionProfile& profile) {
  check_total(instance, profile);
  const auto& action = instance.initial_actions[profile.initial];
  Rational sum = action.cost;
  for (std::size_t s = 0; s < instance.num_states(); ++s) {
    if (action.transition[s].is_zero()) continue;
    sum += action.transition[s] * instance.final_action(s, *profile.finals[s]).cost;
  }
  return sum;
}

WelfareReport max_welfare(const Instance& instance) {
  require_valid(instance);
  WelfareReport report;
  const std::size_t n_states = instance.num_states();
  report.per_state_best.resize(n_states);
  for (std::size_t s = 0; s < n_states; ++s) {
    auto& best = report.per_state_best[s];
    for (std::size_t j = 0; j < instance.states[s].final_actions.size(); ++j) {
      Rational surplus = expected_state_reward(instance, s, j) - instance.final_action(s, j).cost;
      if (j == 0 || surplus > best.surplus) {
        best.final_action = j;
        best.surplus = std::move(surplus);
      }
    }
  }

  std::size_t best_initial = 0;
  for (std::size_t i = 0; i < instance.num_initial(); ++i) {
    const auto& action = instance.initial_actions[i];
    Rational value = -action.cost;
    for (std::size_t s = 0; s < n_states; ++s) {
      if (!action.transition[s].is_zero()) {
        value += action.transition[s] * report.per_state_best[s].surplus;
      }
    }
    if (i == 0 || value > report.max_welfare) {
      best_initial = i;
      report.max_welfare = std::move(value);
    }
  }

  report.argmax_profile.initial = best_initial;
  report.argmax_profile.finals.resize(n_states);
  for (std::size_t s = 0; s < n_states; ++s) {
    const bool reachable = !instance.transition(best_initial, s).is_zero();
    report.argmax_profile.finals[s] = reachable ? report.per_state_best[s].final_action : 0;
  }
  return report;
}

}  // namespace twostage
