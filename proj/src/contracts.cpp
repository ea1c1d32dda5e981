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

#include "twostage/contracts.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "parallel_search.hpp"
#include "twostage/welfare.hpp"

namespace twostage {

namespace {

using lp::Constraint;
using lp::LinearProgram;
using lp::Relation;

bool same_action(const FinalAction& a, const FinalAction& b) {
  return a.cost == b.cost && a.outcome_dist == b.outcome_dist;
}

// Final actions that are not exact copies of an earlier one. Copies are
// interchangeable for every contract and lose the lowest-index tie-break.
std::vector<std::vector<std::size_t>> distinct_finals(const Instance& instance) {
  std::vector<std::vector<std::size_t>> out(instance.num_states());
  for (std::size_t s = 0; s < instance.num_states(); ++s) {
    const auto& finals = instance.states[s].final_actions;
    for (std::size_t j = 0; j < finals.size(); ++j) {
      bool copy = false;
      for (std::size_t k : out[s]) {
        if (same_action(finals[k], finals[j])) {
          copy = true;
          break;
        }
      }
      if (!copy) out[s].push_back(j);
    }
  }
  return out;
}

std::uint64_t profile_space(const Instance& instance) {
  std::uint64_t product = 1;
  for (const auto& st : instance.states) {
    const auto n = static_cast<std::uint64_t>(st.final_actions.size());
    if (product > std::numeric_limits<std::uint64_t>::max() / n) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    product *= n;
  }
  return product;
}

void check_profile_cap(const Instance& instance, const SolverOptions& options) {
  const std::uint64_t space = profile_space(instance);
  if (space > options.profiles_cap) {
    throw CapExceeded("profile space " + std::to_string(space) + " exceeds cap " +
                      std::to_string(options.profiles_cap));
  }
}

void check_subsets_cap(const Instance& instance, const SolverOptions& options) {
  if (instance.num_states() > options.subsets_cap) {
    throw CapExceeded("terminate-set enumeration over " + std::to_string(instance.num_states()) +
                      " states exceeds cap of " + std::to_string(options.subsets_cap));
  }
}

// Drops rows that hold for every x >= 0 with all-zero coefficients; returns
// false when such a row can never hold.
bool push_row(LinearProgram& program, Constraint row) {
  const bool all_zero =
      std::all_of(row.coeffs.begin(), row.coeffs.end(), [](const Rational& c) { return c.is_zero(); });
  if (!all_zero) {
    program.constraints.push_back(std::move(row));
    return true;
  }
  return row.rhs.sign() <= 0;
}

std::vector<bool> termination_mask(const Instance& instance, const std::vector<std::size_t>& set) {
  std::vector<bool> mask(instance.num_states(), false);
  for (std::size_t s : set) {
    if (s >= instance.num_states()) throw std::out_of_range("terminate set index out of range");
    mask[s] = true;
  }
  return mask;
}

void check_profile_shape(const Instance& instance, const ActionProfile& profile,
                         const std::vector<bool>& terminated) {
  if (profile.initial >= instance.num_initial()) {
    throw std::out_of_range("profile initial action out of range");
  }
  if (profile.finals.size() != instance.num_states()) {
    throw std::invalid_argument("profile length does not match the state count");
  }
  for (std::size_t s = 0; s < instance.num_states(); ++s) {
    if (terminated[s] != !profile.finals[s].has_value()) {
      throw std::invalid_argument(terminated[s]
                                      ? "profile references terminated state " + std::to_string(s)
                                      : "profile misses surviving state " + std::to_string(s));
    }
    if (profile.finals[s] && *profile.finals[s] >= instance.states[s].final_actions.size()) {
      throw std::out_of_range("profile final action out of range at state " + std::to_string(s));
    }
  }
}

enum class Kind { kStandard, kPay, kTerminate };

std::optional<MinPayment> solve_incentive(const Instance& instance, const ActionProfile& profile,
                                          const std::vector<bool>& terminated, Kind kind,
                                          const std::vector<std::size_t>& terminate_set) {
  const bool state_transfers = kind == Kind::kPay;
  auto program = incentive_program(instance, profile, terminated, state_transfers);
  if (!program) return std::nullopt;
  const lp::LpResult result = lp::solve(*program);
  if (!result.optimal()) return std::nullopt;

  const std::size_t m = instance.num_outcomes();
  std::vector<Rational> t(result.x.begin(), result.x.begin() + static_cast<std::ptrdiff_t>(m));
  MinPayment out{StandardContract{}, result.objective_value};
  if (state_transfers) {
    std::vector<Rational> s(result.x.begin() + static_cast<std::ptrdiff_t>(m), result.x.end());
    out.contract = PayHalfwayContract{std::move(s), std::move(t)};
  } else if (kind == Kind::kTerminate) {
    out.contract = TerminateHalfwayContract{std::move(t), terminate_set};
  } else {
    out.contract = StandardContract{std::move(t)};
  }
  return out;
}

// Per-(state, final) expected rewards, indexed [s][j].
std::vector<std::vector<Rational>> reward_table(const Instance& instance) {
  std::vector<std::vector<Rational>> table(instance.num_states());
  for (std::size_t s = 0; s < instance.num_states(); ++s) {
    for (std::size_t j = 0; j < instance.states[s].final_actions.size(); ++j) {
      table[s].push_back(expected_state_reward(instance, s, j));
    }
  }
  return table;
}

struct Candidate {
  Rational profit;
  MinPayment incentive;
};

struct TaskResult {
  std::optional<Candidate> best;
  std::uint64_t enumerated = 0;
  std::uint64_t infeasible = 0;
};

// Scans every profile with the given initial action whose finals range over
// the distinct final actions of the surviving states, in lexicographic order.
TaskResult scan_profiles(const Instance& instance, std::size_t initial,
                         const std::vector<std::size_t>& terminate_set,
                         const std::vector<bool>& terminated, Kind kind,
                         const std::vector<std::vector<std::size_t>>& choices,
                         const std::vector<std::vector<Rational>>& rewards) {
  const std::size_t n_states = instance.num_states();
  std::vector<std::size_t> live;
  for (std::size_t s = 0; s < n_states; ++s) {
    if (!terminated[s]) live.push_back(s);
  }

  TaskResult out;
  std::vector<std::size_t> digit(live.size(), 0);
  ActionProfile profile;
  profile.initial = initial;
  profile.finals.assign(n_states, std::nullopt);
  const auto& transition = instance.initial_actions[initial].transition;

  for (;;) {
    Rational reward;
    for (std::size_t k = 0; k < live.size(); ++k) {
      const std::size_t s = live[k];
      const std::size_t j = choices[s][digit[k]];
      profile.finals[s] = j;
      if (!transition[s].is_zero()) reward += transition[s] * rewards[s][j];
    }
    ++out.enumerated;
    auto incentive = solve_incentive(instance, profile, terminated, kind, terminate_set);
    if (!incentive) {
      ++out.infeasible;
    } else {
      Rational profit = reward - incentive->payment;
      if (!out.best || profit > out.best->profit) {
        out.best = Candidate{std::move(profit), std::move(*incentive)};
      }
    }

    // Odometer increment, last live state fastest.
    bool advanced = false;
    for (std::size_t k = live.size(); k-- > 0;) {
      if (++digit[k] < choices[live[k]].size()) {
        advanced = true;
        break;
      }
      digit[k] = 0;
    }
    if (!advanced) break;
  }
  return out;
}

SolveReport finish(const Instance& instance, const std::vector<TaskResult>& results,
                   std::uint64_t sets_enumerated) {
  SolveReport report;
  const Candidate* best = nullptr;
  for (const auto& r : results) {
    report.profiles_enumerated += r.enumerated;
    report.infeasible_profiles += r.infeasible;
    if (r.best && (!best || r.best->profit > best->profit)) best = &*r.best;
  }
  if (!best) throw std::logic_error("no incentivizable profile found");
  report.best_contract = best->incentive.contract;
  report.best_response = best_response(instance, report.best_contract);
  report.profit = report.best_response.principal_profit;
  if (report.profit != best->profit) {
    throw std::logic_error("best response profit " + report.profit.str() +
                           " disagrees with the incentive LP value " + best->profit.str());
  }
  report.welfare = max_welfare(instance).max_welfare;
  report.termination_sets_enumerated = sets_enumerated;
  return report;
}

SolveReport optimal_outcome_based(const Instance& instance, const SolverOptions& options,
                                  Kind kind) {
  require_valid(instance);
  check_profile_cap(instance, options);
  const auto choices = distinct_finals(instance);
  const auto rewards = reward_table(instance);
  const std::vector<bool> none(instance.num_states(), false);
  const auto results = detail::run_tasks<TaskResult>(
      instance.num_initial(), options.threads, [&](std::size_t i) {
        return scan_profiles(instance, i, {}, none, kind, choices, rewards);
      });
  return finish(instance, results, 0);
}

// All subsets of {0..n-1}, ordered by size and then lexicographically.
std::vector<std::vector<std::size_t>> ordered_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> set;
    for (std::size_t s = 0; s < n; ++s) {
      if (mask & (std::size_t{1} << s)) set.push_back(s);
    }
    out.push_back(std::move(set));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

}  // namespace

std::optional<lp::LinearProgram> incentive_program(const Instance& instance,
                                                   const ActionProfile& profile,
                                                   const std::vector<bool>& terminated,
                                                   bool state_transfers) {
  check_profile_shape(instance, profile, terminated);
  const std::size_t m = instance.num_outcomes();
  const std::size_t n_states = instance.num_states();
  const std::size_t n_vars = m + (state_transfers ? n_states : 0);

  LinearProgram program;
  program.objective.assign(n_vars, Rational{});

  // Final-stage incentive constraints at every surviving state.
  for (std::size_t s = 0; s < n_states; ++s) {
    if (terminated[s]) continue;
    const std::size_t chosen = *profile.finals[s];
    const auto& finals = instance.states[s].final_actions;
    const auto& target = finals[chosen];
    for (std::size_t j = 0; j < finals.size(); ++j) {
      if (j == chosen || same_action(finals[j], target)) continue;
      Constraint row;
      row.coeffs.assign(n_vars, Rational{});
      for (std::size_t o = 0; o < m; ++o) {
        row.coeffs[o] = target.outcome_dist[o] - finals[j].outcome_dist[o];
      }
      row.relation = Relation::kGreaterEqual;
      row.rhs = target.cost - finals[j].cost;
      if (!push_row(program, std::move(row))) return std::nullopt;
    }
  }

  // Initial-stage constraints against every other initial action. U^s is
  // linear in t because the final constraints pin the chosen final as optimal.
  const auto& chosen_initial = instance.initial_actions[profile.initial];
  for (std::size_t i = 0; i < instance.num_initial(); ++i) {
    if (i == profile.initial) continue;
    const auto& other = instance.initial_actions[i];
    Constraint row;
    row.coeffs.assign(n_vars, Rational{});
    row.relation = Relation::kGreaterEqual;
    row.rhs = chosen_initial.cost - other.cost;
    for (std::size_t s = 0; s < n_states; ++s) {
      if (terminated[s]) continue;
      const Rational delta = chosen_initial.transition[s] - other.transition[s];
      if (delta.is_zero()) continue;
      const auto& fa = instance.final_action(s, *profile.finals[s]);
      for (std::size_t o = 0; o < m; ++o) {
        if (!fa.outcome_dist[o].is_zero()) row.coeffs[o] += delta * fa.outcome_dist[o];
      }
      if (state_transfers) row.coeffs[m + s] = delta;
      row.rhs += delta * fa.cost;
    }
    if (!push_row(program, std::move(row))) return std::nullopt;
  }

  for (std::size_t s = 0; s < n_states; ++s) {
    if (terminated[s]) continue;
    const Rational& p = chosen_initial.transition[s];
    if (p.is_zero()) continue;
    const auto& fa = instance.final_action(s, *profile.finals[s]);
    for (std::size_t o = 0; o < m; ++o) {
      if (!fa.outcome_dist[o].is_zero()) program.objective[o] += p * fa.outcome_dist[o];
    }
    if (state_transfers) program.objective[m + s] = p;
  }
  return program;
}

std::optional<MinPayment> min_payment_standard(const Instance& instance,
                                               const ActionProfile& profile) {
  const std::vector<bool> none(instance.num_states(), false);
  return solve_incentive(instance, profile, none, Kind::kStandard, {});
}

std::optional<MinPayment> min_payment_pay(const Instance& instance, const ActionProfile& profile) {
  const std::vector<bool> none(instance.num_states(), false);
  return solve_incentive(instance, profile, none, Kind::kPay, {});
}

std::optional<MinPayment> min_payment_terminate(const Instance& instance,
                                                const std::vector<std::size_t>& terminate_set,
                                                const ActionProfile& profile) {
  std::vector<std::size_t> set = terminate_set;
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  const auto mask = termination_mask(instance, set);
  return solve_incentive(instance, profile, mask, Kind::kTerminate, set);
}

SolveReport optimal_standard(const Instance& instance, const SolverOptions& options) {
  return optimal_outcome_based(instance, options, Kind::kStandard);
}

SolveReport optimal_pay(const Instance& instance, const SolverOptions& options) {
  return optimal_outcome_based(instance, options, Kind::kPay);
}

SolveReport optimal_terminate(const Instance& instance, const SolverOptions& options) {
  require_valid(instance);
  check_subsets_cap(instance, options);
  check_profile_cap(instance, options);
  const auto subsets = ordered_subsets(instance.num_states());
  const auto choices = distinct_finals(instance);
  const auto rewards = reward_table(instance);
  const std::size_t n1 = instance.num_initial();
  std::vector<std::vector<bool>> masks;
  masks.reserve(subsets.size());
  for (const auto& set : subsets) masks.push_back(termination_mask(instance, set));

  auto results = detail::run_tasks<TaskResult>(
      subsets.size() * n1, options.threads, [&](std::size_t task) {
        const std::size_t k = task / n1;
        return scan_profiles(instance, task % n1, subsets[k], masks[k], Kind::kTerminate, choices,
                             rewards);
      });
  return finish(instance, results, subsets.size());
}

SolveReport optimal_terminate_with_set(const Instance& instance,
                                       const std::vector<std::size_t>& terminate_set,
                                       const SolverOptions& options) {
  require_valid(instance);
  check_profile_cap(instance, options);
  std::vector<std::size_t> set = terminate_set;
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  const auto mask = termination_mask(instance, set);
  const auto choices = distinct_finals(instance);
  const auto rewards = reward_table(instance);
  auto results = detail::run_tasks<TaskResult>(
      instance.num_initial(), options.threads, [&](std::size_t i) {
        return scan_profiles(instance, i, set, mask, Kind::kTerminate, choices, rewards);
      });
  return finish(instance, results, 1);
}

StandardContract pay_to_standard_tree(const Instance& instance, const PayHalfwayContract& pay) {
  if (!classify(instance).is_tree) {
    throw std::invalid_argument("pay_to_standard_tree requires a tree process");
  }
  (void)resolve(instance, pay);
  StandardContract out{pay.t};
  for (std::size_t o = 0; o < instance.num_outcomes(); ++o) {
    for (std::size_t s = 0; s < instance.num_states(); ++s) {
      const auto& finals = instance.states[s].final_actions;
      const bool owns = std::any_of(finals.begin(), finals.end(), [o](const FinalAction& a) {
        return a.outcome_dist[o].sign() > 0;
      });
      if (owns) {
        out.t[o] += pay.s[s];
        break;
      }
    }
  }
  return out;
}

SingleStageInstance reduce_deterministic(const Instance& instance) {
  require_valid(instance);
  if (!classify(instance).is_deterministic_first_stage) {
    throw std::invalid_argument("reduce_deterministic requires a deterministic first stage");
  }
  SingleStageInstance out;
  out.rewards = instance.rewards;
  for (const auto& init : instance.initial_actions) {
    const auto it = std::find(init.transition.begin(), init.transition.end(), Rational(1));
    const auto s = static_cast<std::size_t>(it - init.transition.begin());
    for (const auto& fa : instance.states[s].final_actions) {
      out.actions.push_back({init.name + "/" + fa.name, init.cost + fa.cost, fa.outcome_dist});
    }
  }
  return out;
}

SingleStageSolution optimal_single_stage(const SingleStageInstance& ssi) {
  const std::size_t m = ssi.rewards.size();
  if (ssi.actions.empty()) throw std::invalid_argument("single-stage instance has no actions");
  bool has_null = false;
  for (const auto& a : ssi.actions) {
    if (a.outcome_dist.size() != m) {
      throw std::invalid_argument("single-stage distribution length mismatch");
    }
    Rational sum;
    for (const auto& p : a.outcome_dist) {
      if (p.sign() < 0) throw std::invalid_argument("negative probability");
      sum += p;
    }
    if (sum != Rational(1)) throw std::invalid_argument("distribution does not sum to 1");
    if (a.cost.sign() < 0) throw std::invalid_argument("negative cost");
    if (a.cost.is_zero()) has_null = true;
  }
  if (!has_null) throw std::invalid_argument("single-stage instance lacks a null action");

  std::optional<SingleStageSolution> best;
  for (std::size_t a = 0; a < ssi.actions.size(); ++a) {
    const auto& target = ssi.actions[a];
    LinearProgram program;
    program.objective = target.outcome_dist;
    bool feasible = true;
    for (std::size_t b = 0; b < ssi.actions.size() && feasible; ++b) {
      if (b == a) continue;
      Constraint row;
      row.coeffs.resize(m);
      for (std::size_t o = 0; o < m; ++o) {
        row.coeffs[o] = target.outcome_dist[o] - ssi.actions[b].outcome_dist[o];
      }
      row.relation = Relation::kGreaterEqual;
      row.rhs = target.cost - ssi.actions[b].cost;
      feasible = push_row(program, std::move(row));
    }
    if (!feasible) continue;
    const auto result = lp::solve(program);
    if (!result.optimal()) continue;
    Rational reward;
    for (std::size_t o = 0; o < m; ++o) reward += target.outcome_dist[o] * ssi.rewards[o];
    Rational profit = reward - result.objective_value;
    if (!best || profit > best->profit) {
      best = SingleStageSolution{a, StandardContract{result.x}, std::move(profit)};
    }
  }
  if (!best) throw std::logic_error("no incentivizable single-stage action");
  return *best;
}

}  // namespace twostage
