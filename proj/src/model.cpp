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

#include "twostage/model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace twostage {

std::size_t Instance::max_final_count() const {
  std::size_t n = 0;
  for (const auto& st : states) n = std::max(n, st.final_actions.size());
  return n;
}

ActionProfile ActionProfile::total(std::size_t initial, const std::vector<std::size_t>& finals) {
  ActionProfile p;
  p.initial = initial;
  p.finals.assign(finals.begin(), finals.end());
  return p;
}

bool ActionProfile::is_total() const {
  return std::all_of(finals.begin(), finals.end(), [](const auto& f) { return f.has_value(); });
}

std::string ActionProfile::str() const {
  std::ostringstream os;
  os << initial << '|';
  for (std::size_t s = 0; s < finals.size(); ++s) {
    if (s > 0) os << ',';
    if (finals[s]) {
      os << *finals[s];
    } else {
      os << '-';
    }
  }
  return os.str();
}

std::string contract_kind(const Contract& contract) {
  struct Visitor {
    std::string operator()(const StandardContract&) const { return "standard"; }
    std::string operator()(const LinearContract&) const { return "linear"; }
    std::string operator()(const PayHalfwayContract&) const { return "pay_halfway"; }
    std::string operator()(const TerminateHalfwayContract&) const { return "terminate_halfway"; }
  };
  return std::visit(Visitor{}, contract);
}

namespace {

void check_transfers(const std::vector<Rational>& v, std::size_t expected, const char* what) {
  if (v.size() != expected) {
    throw std::invalid_argument(std::string("contract ") + what + " has length " +
                                std::to_string(v.size()) + ", expected " +
                                std::to_string(expected));
  }
  for (const auto& x : v) {
    if (x.sign() < 0) {
      throw std::invalid_argument(std::string("contract ") + what + " has a negative transfer");
    }
  }
}

}  // namespace

bool has_negative_reward(const Instance& instance) {
  return std::any_of(instance.rewards.begin(), instance.rewards.end(),
                     [](const Rational& r) { return r.sign() < 0; });
}

ResolvedContract resolve(const Instance& instance, const Contract& contract) {
  const std::size_t m = instance.num_outcomes();
  const std::size_t n_states = instance.num_states();
  ResolvedContract out;
  out.s.assign(n_states, Rational{});
  out.terminated.assign(n_states, false);

  if (const auto* c = std::get_if<StandardContract>(&contract)) {
    check_transfers(c->t, m, "t");
    out.t = c->t;
  } else if (const auto* c = std::get_if<LinearContract>(&contract)) {
    if (c->alpha.sign() < 0 || c->alpha > Rational(1)) {
      throw std::invalid_argument("linear contract alpha must lie in [0,1]");
    }
    if (has_negative_reward(instance)) {
      throw std::invalid_argument("linear contracts require nonnegative rewards");
    }
    out.t.reserve(m);
    for (const auto& r : instance.rewards) out.t.push_back(c->alpha * r);
  } else if (const auto* c = std::get_if<PayHalfwayContract>(&contract)) {
    check_transfers(c->t, m, "t");
    check_transfers(c->s, n_states, "s");
    out.t = c->t;
    out.s = c->s;
  } else {
    const auto& tc = std::get<TerminateHalfwayContract>(contract);
    check_transfers(tc.t, m, "t");
    out.t = tc.t;
    for (std::size_t s : tc.terminate_set) {
      if (s >= n_states) {
        throw std::invalid_argument("terminate set references state " + std::to_string(s) +
                                    " out of range");
      }
      out.terminated[s] = true;
    }
  }
  return out;
}

std::string ProcessClass::label() const {
  if (is_general()) return "general";
  std::string out;
  auto add = [&out](const char* name) {
    if (!out.empty()) out += ' ';
    out += name;
  };
  if (is_tree) add("tree");
  if (is_stochastic_first_stage) add("stochastic_first_stage");
  if (is_deterministic_first_stage) add("deterministic_first_stage");
  return out;
}

namespace {

void check_distribution(const Distribution& d, std::size_t expected, const std::string& where,
                        std::vector<Violation>& out) {
  if (d.size() != expected) {
    out.push_back({"length_mismatch", where,
                   "distribution has length " + std::to_string(d.size()) + ", expected " +
                       std::to_string(expected)});
    return;
  }
  Rational sum;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k].sign() < 0 || d[k] > Rational(1)) {
      out.push_back({"probability_out_of_range", where + "[" + std::to_string(k) + "]",
                     "probability " + d[k].str() + " is outside [0,1]"});
    }
    sum += d[k];
  }
  if (sum != Rational(1)) {
    out.push_back({"distribution_sum", where,
                   "distribution does not sum to 1 (sum is " + sum.str() + ")"});
  }
}

}  // namespace

ValidationReport validate(const Instance& instance) {
  ValidationReport report;
  auto& v = report.violations;
  const std::size_t m = instance.num_outcomes();
  const std::size_t n_states = instance.num_states();

  if (m == 0) v.push_back({"empty_outcomes", "rewards", "at least one outcome is required"});
  if (n_states == 0) v.push_back({"empty_states", "states", "at least one state is required"});
  if (instance.initial_actions.empty()) {
    v.push_back({"empty_initial_actions", "initial_actions",
                 "at least one initial action is required"});
  }

  bool has_null_initial = false;
  for (std::size_t i = 0; i < instance.initial_actions.size(); ++i) {
    const auto& a = instance.initial_actions[i];
    const std::string where = "initial_actions[" + std::to_string(i) + "]";
    if (a.cost.sign() < 0) {
      v.push_back({"negative_cost", where + ".cost", "cost " + a.cost.str() + " is negative"});
    }
    if (a.cost.is_zero()) has_null_initial = true;
    check_distribution(a.transition, n_states, where + ".transition", v);
  }
  if (!instance.initial_actions.empty() && !has_null_initial) {
    v.push_back({"missing_null_initial", "initial_actions", "missing null initial action"});
  }

  for (std::size_t s = 0; s < n_states; ++s) {
    const auto& st = instance.states[s];
    const std::string where = "states[" + std::to_string(s) + "]";
    if (st.final_actions.empty()) {
      v.push_back({"empty_final_actions", where + ".final_actions",
                   "state has no final actions"});
      continue;
    }
    bool has_null_final = false;
    for (std::size_t j = 0; j < st.final_actions.size(); ++j) {
      const auto& a = st.final_actions[j];
      const std::string fw = where + ".final_actions[" + std::to_string(j) + "]";
      if (a.cost.sign() < 0) {
        v.push_back({"negative_cost", fw + ".cost", "cost " + a.cost.str() + " is negative"});
      }
      if (a.cost.is_zero()) has_null_final = true;
      check_distribution(a.outcome_dist, m, fw + ".outcome_dist", v);
    }
    if (!has_null_final) {
      v.push_back({"missing_null_final", where + ".final_actions", "missing null final action"});
    }
  }
  return report;
}

void require_valid(const Instance& instance) {
  const auto report = validate(instance);
  if (!report.ok()) {
    const auto& first = report.violations.front();
    throw std::invalid_argument("invalid instance: " + first.location + ": " + first.message);
  }
}

ProcessClass classify(const Instance& instance) {
  ProcessClass pc;
  const std::size_t m = instance.num_outcomes();

  pc.is_tree = true;
  for (std::size_t o = 0; o < m && pc.is_tree; ++o) {
    std::size_t owners = 0;
    for (const auto& st : instance.states) {
      const bool reaches = std::any_of(st.final_actions.begin(), st.final_actions.end(),
                                       [o](const FinalAction& a) { return a.outcome_dist[o].sign() > 0; });
      if (reaches) ++owners;
    }
    if (owners > 1) pc.is_tree = false;
  }

  pc.is_stochastic_first_stage = instance.num_initial() == 1;

  pc.is_deterministic_first_stage = std::all_of(
      instance.initial_actions.begin(), instance.initial_actions.end(),
      [](const InitialAction& a) {
        return std::any_of(a.transition.begin(), a.transition.end(),
                           [](const Rational& p) { return p == Rational(1); });
      });
  return pc;
}

Rational expected_state_reward(const Instance& instance, std::size_t state, std::size_t action) {
  if (state >= instance.num_states() ||
      action >= instance.states[state].final_actions.size()) {
    throw std::out_of_range("state/action index out of range");
  }
  const auto& dist = instance.final_action(state, action).outcome_dist;
  Rational sum;
  for (std::size_t o = 0; o < dist.size(); ++o) {
    if (!dist[o].is_zero()) sum += dist[o] * instance.rewards[o];
  }
  return sum;
}

Rational expected_transfer(const Instance& instance, std::size_t state, std::size_t action,
                           const std::vector<Rational>& t) {
  const auto& dist = instance.final_action(state, action).outcome_dist;
  Rational sum;
  for (std::size_t o = 0; o < dist.size(); ++o) {
    if (!dist[o].is_zero() && !t[o].is_zero()) sum += dist[o] * t[o];
  }
  return sum;
}

}  // namespace twostage
