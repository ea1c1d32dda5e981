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

#include <ostream>
#include <vector>

#include "twostage/contracts.hpp"
#include "twostage/model.hpp"

namespace twostage {

struct Breakpoint {
  Rational alpha;
  ActionProfile profile_left;
  ActionProfile profile_right;
};

struct LinearSegment {
  Rational alpha_begin;
  Rational alpha_end;
  ActionProfile profile;
  Rational reward;  // R_a
  Rational cost;    // c_a
};

struct LinearOptimum {
  Rational alpha;
  Rational profit;
};

// Agent behaviour under Linear(alpha) as a piecewise-constant function of
// alpha on [0,1]. At a breakpoint the agent is indifferent between the
// adjacent profiles and the principal gets the right-hand (higher reward) one.
struct BreakpointAnalysis {
  std::vector<Breakpoint> breakpoints;
  std::vector<LinearSegment> segments;
  LinearOptimum optimal;
  ActionProfile optimal_profile;
};

// Interior kinks in (0,1) of the upper envelope of alpha*R^s_j - c^s_j.
std::vector<Rational> state_breakpoints(const Instance& instance, std::size_t state);

// Merges the state envelopes and then splits every constant-finals segment by
// the envelope over initial actions. Throws std::invalid_argument when a
// reward is negative, and std::logic_error if the breakpoint count ever
// exceeds S*N1*N2.
BreakpointAnalysis analyze(const Instance& instance);

LinearOptimum optimal_linear(const Instance& instance);

// optimal_linear packaged like the other solvers; profiles_enumerated counts
// the segments inspected.
SolveReport solve_linear(const Instance& instance);

// alpha_exact,alpha_decimal,profit_exact,profit_decimal,profile — one row per
// segment, evaluated at the segment's left end.
void write_breakpoint_csv(const BreakpointAnalysis& analysis, std::ostream& out);

}  // namespace twostage
