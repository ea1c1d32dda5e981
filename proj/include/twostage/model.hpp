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

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twostage/rational.hpp"

namespace twostage {

using Distribution = std::vector<Rational>;

struct InitialAction {
  std::string name;
  Rational cost;
  Distribution transition;  // over intermediate states
  friend bool operator==(const InitialAction&, const InitialAction&) = default;
};

struct FinalAction {
  std::string name;
  Rational cost;
  Distribution outcome_dist;  // over outcomes
  friend bool operator==(const FinalAction&, const FinalAction&) = default;
};

struct State {
  std::string name;
  std::vector<FinalAction> final_actions;
  friend bool operator==(const State&, const State&) = default;
};

// A two-stage delegation process. The agent takes an initial action, lands in
// an intermediate state, then takes a final action that produces an outcome.
struct Instance {
  std::vector<Rational> rewards;
  std::vector<InitialAction> initial_actions;
  std::vector<State> states;

  std::size_t num_outcomes() const { return rewards.size(); }
  std::size_t num_states() const { return states.size(); }
  std::size_t num_initial() const { return initial_actions.size(); }
  // Largest per-state final-action count.
  std::size_t max_final_count() const;

  const Rational& transition(std::size_t i, std::size_t s) const {
    return initial_actions[i].transition[s];
  }
  const FinalAction& final_action(std::size_t s, std::size_t j) const {
    return states[s].final_actions[j];
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

// One initial action plus a final action per state. A state without a final
// action (nullopt) is one the contract terminates at.
struct ActionProfile {
  std::size_t initial = 0;
  std::vector<std::optional<std::size_t>> finals;

  static ActionProfile total(std::size_t initial, const std::vector<std::size_t>& finals);
  bool is_total() const;
  // Compact form "i|j0,j1,..." with "-" for terminated states.
  std::string str() const;

  friend bool operator==(const ActionProfile&, const ActionProfile&) = default;
  friend auto operator<=>(const ActionProfile&, const ActionProfile&) = default;
};

struct StandardContract {
  std::vector<Rational> t;
  friend bool operator==(const StandardContract&, const StandardContract&) = default;
};

struct LinearContract {
  Rational alpha;
  friend bool operator==(const LinearContract&, const LinearContract&) = default;
};

struct PayHalfwayContract {
  std::vector<Rational> s;  // per intermediate state
  std::vector<Rational> t;  // per outcome
  friend bool operator==(const PayHalfwayContract&, const PayHalfwayContract&) = default;
};

struct TerminateHalfwayContract {
  std::vector<Rational> t;
  std::vector<std::size_t> terminate_set;  // sorted, unique state indices
  friend bool operator==(const TerminateHalfwayContract&,
                         const TerminateHalfwayContract&) = default;
};

using Contract =
    std::variant<StandardContract, LinearContract, PayHalfwayContract, TerminateHalfwayContract>;

std::string contract_kind(const Contract& contract);

// Any contract lowered to outcome transfers, state transfers and a
// termination mask. Throws std::invalid_argument when dimensions or signs do
// not match the instance.
struct ResolvedContract {
  std::vector<Rational> t;
  std::vector<Rational> s;
  std::vector<bool> terminated;
};
ResolvedContract resolve(const Instance& instance, const Contract& contract);

struct ProcessClass {
  bool is_tree = false;
  bool is_stochastic_first_stage = false;
  bool is_deterministic_first_stage = false;

  bool is_general() const {
    return !is_tree && !is_stochastic_first_stage && !is_deterministic_first_stage;
  }
  // Space-joined flag names, or "general".
  std::string label() const;

  friend bool operator==(const ProcessClass&, const ProcessClass&) = default;
};

struct Violation {
  std::string rule;      // short machine-friendly rule name
  std::string location;  // e.g. "states[1].final_actions[0].outcome_dist"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Instance& instance);
// Throws std::invalid_argument listing the first violation.
void require_valid(const Instance& instance);

ProcessClass classify(const Instance& instance);

// R^s_j: expected reward of final action j at state s.
Rational expected_state_reward(const Instance& instance, std::size_t state, std::size_t action);
// Expected transfer sum_m F^s_{j,m} t_m.
Rational expected_transfer(const Instance& instance, std::size_t state, std::size_t action,
                           const std::vector<Rational>& t);

bool has_negative_reward(const Instance& instance);

}  // namespace twostage
