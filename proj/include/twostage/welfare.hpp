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

#include <vector>

#include "twostage/model.hpp"

namespace twostage {

// R_a = sum_s F_{i,s} R^s_{j_s}. Requires a total profile.
Rational profile_reward(const Instance& instance, const ActionProfile& profile);
// c_a = c_i + sum_s F_{i,s} c^s_{j_s}. Requires a total profile.
Rational profile_cost(const Instance& instance, const ActionProfile& profile);

struct StateBest {
  std::size_t final_action = 0;
  Rational surplus;  // R^s_j - c^s_j
};

struct WelfareReport {
  Rational max_welfare;
  // Lexicographically smallest maximizer: finals at states the chosen initial
  // action cannot reach are 0.
  ActionProfile argmax_profile;
  std::vector<StateBest> per_state_best;
};

// Decomposed maximization: best final surplus per state, then best initial.
WelfareReport max_welfare(const Instance& instance);

}  // namespace twostage
