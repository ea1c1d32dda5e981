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
#include <vector>

#include "twostage/rational.hpp"

namespace twostage::lp {

enum class Relation { kGreaterEqual, kLessEqual, kEqual };

struct Constraint {
  std::vector<Rational> coeffs;
  Relation relation = Relation::kGreaterEqual;
  Rational rhs;
};

// minimize objective . x  subject to constraints, x >= 0.
struct LinearProgram {
  std::vector<Rational> objective;
  std::vector<Constraint> constraints;

  std::size_t num_vars() const { return objective.size(); }
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  Status status = Status::kInfeasible;
  std::vector<Rational> x;
  Rational objective_value;
  // One multiplier per input constraint: >= 0 for kGreaterEqual rows, <= 0
  // for kLessEqual rows, free for kEqual. Satisfies A^T y <= c and
  // rhs . y == objective_value at an optimum.
  std::vector<Rational> dual;

  bool optimal() const { return status == Status::kOptimal; }
};

// Two-phase dense simplex over exact rationals with Bland's rule. Pivoting is
// deterministic, so the returned basic solution is reproducible. Throws
// std::invalid_argument when a row length differs from the objective length.
LpResult solve(const LinearProgram& program);

// True iff x >= 0 and every constraint holds exactly.
bool is_feasible(const LinearProgram& program, const std::vector<Rational>& x);

}  // namespace twostage::lp
