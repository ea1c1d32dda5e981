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
#include <optional>
#include <stdexcept>
#include <vector>

#include "twostage/agent.hpp"
#include "twostage/lp.hpp"
#include "twostage/model.hpp"

namespace twostage {

// Enumeration would exceed a configured limit.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  // Upper bound on prod_s (final-action count of s).
  std::uint64_t profiles_cap = 200'000;
  // Upper bound on S for termination-set enumeration (2^S sets).
  std::size_t subsets_cap = 14;
  // Worker threads for enumeration; 0 picks the hardware concurrency. The
  // result does not depend on this value.
  unsigned threads = 0;
};

struct MinPayment {
  Contract contract;
  Rational payment;  // expected transfer at the incentivized profile
};

struct SolveReport {
  Contract best_contract;
  BestResponse best_response;
  Rational profit;
  Rational welfare;
  std::uint64_t profiles_enumerated = 0;
  std::uint64_t termination_sets_enumerated = 0;
  std::uint64_t infeasible_profiles = 0;
};

// Cheapest standard contract under which `profile` (total) is agent-optimal.
// Weak incentive constraints suffice because ties go to the principal.
std::optional<MinPayment> min_payment_standard(const Instance& instance,
                                               const ActionProfile& profile);
// Same with per-state transfers s in addition to outcome transfers t.
std::optional<MinPayment> min_payment_pay(const Instance& instance, const ActionProfile& profile);
// Outcome transfers with states in `terminate_set` ending the process.
// `profile` must define finals on exactly the surviving states.
std::optional<MinPayment> min_payment_terminate(const Instance& instance,
                                                const std::vector<std::size_t>& terminate_set,
                                                const ActionProfile& profile);

// The incentive LPs themselves; nullopt when a row is trivially violated.
std::optional<lp::LinearProgram> incentive_program(const Instance& instance,
                                                   const ActionProfile& profile,
                                                   const std::vector<bool>& terminated,
                                                   bool state_transfers);

// Optimal contracts by enumerating incentivizable profiles. Equal-profit ties
// resolve to the lexicographically smallest profile (and, for termination,
// the smallest terminate set by size then by indices).
SolveReport optimal_standard(const Instance& instance, const SolverOptions& options = {});
SolveReport optimal_pay(const Instance& instance, const SolverOptions& options = {});
SolveReport optimal_terminate(const Instance& instance, const SolverOptions& options = {});

// Best terminate-halfway contract with a fixed terminate set.
SolveReport optimal_terminate_with_set(const Instance& instance,
                                       const std::vector<std::size_t>& terminate_set,
                                       const SolverOptions& options = {});

// In a tree process, folds each state transfer into the outcomes that state
// owns: t'_m = t_m + s_pred(m). Throws std::invalid_argument for non-trees.
StandardContract pay_to_standard_tree(const Instance& instance, const PayHalfwayContract& pay);

// Classic single-stage principal-agent instance.
struct SingleStageAction {
  std::string name;
  Rational cost;
  Distribution outcome_dist;
};

struct SingleStageInstance {
  std::vector<Rational> rewards;
  std::vector<SingleStageAction> actions;
};

struct SingleStageSolution {
  std::size_t action = 0;
  StandardContract contract;
  Rational profit;
};

// Deterministic first stage collapses to one action per (initial action i,
// final action j at the state i leads to), cost c_i + c^s_j.
SingleStageInstance reduce_deterministic(const Instance& instance);

// Per-action minimum-payment LP, then the most profitable action.
SingleStageSolution optimal_single_stage(const SingleStageInstance& ssi);

}  // namespace twostage
