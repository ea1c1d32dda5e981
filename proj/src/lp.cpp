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

#include "twostage/lp.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace twostage::lp {

namespace {

enum class ColumnKind { kStructural, kSlack, kArtificial };

// Dense tableau. Row r holds B^{-1} A and B^{-1} b for the current basis.
class Tableau {
 public:
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  std::vector<std::size_t> basis;
  std::vector<ColumnKind> kind;

  std::size_t rows() const { return b.size(); }
  std::size_t cols() const { return kind.size(); }

  void pivot(std::size_t row, std::size_t col) {
    const Rational inv = Rational(1) / a[row][col];
    for (auto& v : a[row]) {
      if (!v.is_zero()) v *= inv;
    }
    b[row] *= inv;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (r == row || a[r][col].is_zero()) continue;
      const Rational factor = a[r][col];
      for (std::size_t c = 0; c < cols(); ++c) {
        if (!a[row][c].is_zero()) a[r][c] -= factor * a[row][c];
      }
      if (!b[row].is_zero()) b[r] -= factor * b[row];
    }
    basis[row] = col;
  }

  std::vector<Rational> reduced_costs(const std::vector<Rational>& cost) const {
    std::vector<Rational> d = cost;
    for (std::size_t r = 0; r < rows(); ++r) {
      const Rational& cb = cost[basis[r]];
      if (cb.is_zero()) continue;
      for (std::size_t c = 0; c < cols(); ++c) {
        if (!a[r][c].is_zero()) d[c] -= cb * a[r][c];
      }
    }
    return d;
  }

  // Bland's rule: lowest-index improving column, then the minimum-ratio row
  // whose basic variable has the lowest index. Returns false when unbounded.
  bool optimize(const std::vector<Rational>& cost, const std::vector<bool>& allowed) {
    for (;;) {
      const auto d = reduced_costs(cost);
      std::optional<std::size_t> entering;
      for (std::size_t c = 0; c < cols(); ++c) {
        if (allowed[c] && d[c].sign() < 0) {
          entering = c;
          break;
        }
      }
      if (!entering) return true;

      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows(); ++r) {
        const Rational& coef = a[r][*entering];
        if (coef.sign() <= 0) continue;
        Rational ratio = b[r] / coef;
        if (!leaving || ratio < best_ratio ||
            (ratio == best_ratio && basis[r] < basis[*leaving])) {
          leaving = r;
          best_ratio = std::move(ratio);
        }
      }
      if (!leaving) return false;
      pivot(*leaving, *entering);
    }
  }
};

struct Row {
  std::vector<Rational> coeffs;
  Relation relation;  // never kEqual
  Rational rhs;
  std::size_t source;
  bool negated;
};

}  // namespace

LpResult solve(const LinearProgram& program) {
  const std::size_t n = program.num_vars();
  for (std::size_t k = 0; k < program.constraints.size(); ++k) {
    if (program.constraints[k].coeffs.size() != n) {
      throw std::invalid_argument("constraint " + std::to_string(k) + " has " +
                                  std::to_string(program.constraints[k].coeffs.size()) +
                                  " coefficients, expected " + std::to_string(n));
    }
  }

  // Split equalities and normalize to a nonnegative right-hand side.
  std::vector<Row> rows;
  for (std::size_t k = 0; k < program.constraints.size(); ++k) {
    const auto& c = program.constraints[k];
    auto push = [&](Relation rel) {
      Row row{c.coeffs, rel, c.rhs, k, false};
      const bool flip = row.rhs.sign() < 0 || (row.rhs.is_zero() && rel == Relation::kGreaterEqual);
      if (flip) {
        for (auto& v : row.coeffs) v = -v;
        row.rhs = -row.rhs;
        row.relation =
            rel == Relation::kGreaterEqual ? Relation::kLessEqual : Relation::kGreaterEqual;
        row.negated = true;
      }
      rows.push_back(std::move(row));
    };
    if (c.relation == Relation::kEqual) {
      push(Relation::kLessEqual);
      push(Relation::kGreaterEqual);
    } else {
      push(c.relation);
    }
  }

  const std::size_t m = rows.size();
  std::size_t n_artificial = 0;
  for (const auto& r : rows) {
    if (r.relation == Relation::kGreaterEqual) ++n_artificial;
  }
  // Columns: structural [0,n), one slack/surplus per row [n, n+m), artificials.
  const std::size_t total = n + m + n_artificial;

  Tableau tab;
  tab.kind.assign(total, ColumnKind::kStructural);
  for (std::size_t c = n; c < n + m; ++c) tab.kind[c] = ColumnKind::kSlack;
  for (std::size_t c = n + m; c < total; ++c) tab.kind[c] = ColumnKind::kArtificial;
  tab.a.assign(m, std::vector<Rational>(total));
  tab.b.resize(m);
  tab.basis.resize(m);

  std::size_t next_artificial = n + m;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) tab.a[r][c] = rows[r].coeffs[c];
    tab.b[r] = rows[r].rhs;
    if (rows[r].relation == Relation::kLessEqual) {
      tab.a[r][n + r] = Rational(1);
      tab.basis[r] = n + r;
    } else {
      tab.a[r][n + r] = Rational(-1);
      tab.a[r][next_artificial] = Rational(1);
      tab.basis[r] = next_artificial++;
    }
  }

  LpResult result;

  if (n_artificial > 0) {
    std::vector<Rational> phase1(total);
    for (std::size_t c = n + m; c < total; ++c) phase1[c] = Rational(1);
    tab.optimize(phase1, std::vector<bool>(total, true));
    Rational infeasibility;
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.kind[tab.basis[r]] == ColumnKind::kArtificial) infeasibility += tab.b[r];
    }
    if (infeasibility.sign() > 0) {
      result.status = Status::kInfeasible;
      return result;
    }
    // Drive zero-level artificials out where a non-artificial pivot exists;
    // rows without one are redundant and stay inert.
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.kind[tab.basis[r]] != ColumnKind::kArtificial) continue;
      for (std::size_t c = 0; c < n + m; ++c) {
        if (!tab.a[r][c].is_zero()) {
          tab.pivot(r, c);
          break;
        }
      }
    }
  }

  std::vector<Rational> cost(total);
  for (std::size_t c = 0; c < n; ++c) cost[c] = program.objective[c];
  std::vector<bool> allowed(total, true);
  for (std::size_t c = n + m; c < total; ++c) allowed[c] = false;
  if (!tab.optimize(cost, allowed)) {
    result.status = Status::kUnbounded;
    return result;
  }

  result.status = Status::kOptimal;
  result.x.assign(n, Rational{});
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis[r] < n) result.x[tab.basis[r]] = tab.b[r];
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (!result.x[c].is_zero()) result.objective_value += program.objective[c] * result.x[c];
  }

  // y = c_B B^{-1}, read off the slack/surplus reduced costs.
  const auto d = tab.reduced_costs(cost);
  result.dual.assign(program.constraints.size(), Rational{});
  for (std::size_t r = 0; r < m; ++r) {
    Rational y = rows[r].relation == Relation::kLessEqual ? -d[n + r] : d[n + r];
    if (rows[r].negated) y = -y;
    result.dual[rows[r].source] += y;
  }
  return result;
}

bool is_feasible(const LinearProgram& program, const std::vector<Rational>& x) {
  if (x.size() != program.num_vars()) return false;
  for (const auto& v : x) {
    if (v.sign() < 0) return false;
  }
  for (const auto& c : program.constraints) {
    Rational lhs;
    for (std::size_t k = 0; k < x.size(); ++k) lhs += c.coeffs[k] * x[k];
    switch (c.relation) {
      case Relation::kGreaterEqual:
        if (lhs < c.rhs) return false;
        break;
      case Relation::kLessEqual:
        if (lhs > c.rhs) return false;
        break;
      case Relation::kEqual:
        if (lhs != c.rhs) return false;
        break;
    }
  }
  return true;
}

}  // namespace twostage::lp
