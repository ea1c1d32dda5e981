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

#include "twostage/linear.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "twostage/agent.hpp"
#include "twostage/welfare.hpp"

namespace twostage {

namespace {

// alpha * slope - cost
struct Line {
  Rational slope;
  Rational cost;

  Rational at(const Rational& alpha) const { return alpha * slope - cost; }
};

// Index of the line on top just to the right of alpha: highest value, then
// highest slope, then lowest index.
std::size_t top_right_of(const std::vector<Line>& lines, const Rational& alpha) {
  std::size_t best = 0;
  Rational best_value = lines[0].at(alpha);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    Rational v = lines[k].at(alpha);
    if (v > best_value || (v == best_value && lines[k].slope > lines[best].slope)) {
      best = k;
      best_value = std::move(v);
    }
  }
  return best;
}

struct Piece {
  Rational begin;
  std::size_t line;
};

// Upper envelope on [from, to): the pieces in order, first starting at from.
std::vector<Piece> envelope(const std::vector<Line>& lines, const Rational& from,
                            const Rational& to) {
  std::vector<Piece> pieces;
  Rational alpha = from;
  std::size_t current = top_right_of(lines, alpha);
  pieces.push_back({alpha, current});
  for (;;) {
    // Lines that overtake the current one do so strictly after alpha.
    std::optional<Rational> next;
    for (std::size_t k = 0; k < lines.size(); ++k) {
      if (lines[k].slope <= lines[current].slope) continue;
      Rational cross = (lines[k].cost - lines[current].cost) / (lines[k].slope - lines[current].slope);
      if (cross <= alpha) continue;
      if (!next || cross < *next) next = std::move(cross);
    }
    if (!next || *next >= to) break;
    alpha = *next;
    current = top_right_of(lines, alpha);
    pieces.push_back({alpha, current});
  }
  return pieces;
}

std::vector<Line> state_lines(const Instance& instance, std::size_t s) {
  std::vector<Line> lines;
  for (std::size_t j = 0; j < instance.states[s].final_actions.size(); ++j) {
    lines.push_back({expected_state_reward(instance, s, j), instance.final_action(s, j).cost});
  }
  return lines;
}

void require_nonnegative_rewards(const Instance& instance) {
  if (has_negative_reward(instance)) {
    throw std::invalid_argument("linear analysis requires nonnegative rewards");
  }
}

}  // namespace

std::vector<Rational> state_breakpoints(const Instance& instance, std::size_t state) {
  if (state >= instance.num_states()) throw std::out_of_range("state index out of range");
  const auto pieces = envelope(state_lines(instance, state), Rational(0), Rational(1));
  std::vector<Rational> out;
  for (std::size_t k = 1; k < pieces.size(); ++k) out.push_back(pieces[k].begin);
  return out;
}

BreakpointAnalysis analyze(const Instance& instance) {
  require_valid(instance);
  require_nonnegative_rewards(instance);
  const std::size_t n_states = instance.num_states();

  std::vector<std::vector<Piece>> state_pieces(n_states);
  std::vector<Rational> cuts{Rational(0)};
  for (std::size_t s = 0; s < n_states; ++s) {
    state_pieces[s] = envelope(state_lines(instance, s), Rational(0), Rational(1));
    for (std::size_t k = 1; k < state_pieces[s].size(); ++k) cuts.push_back(state_pieces[s][k].begin);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // (segment start, profile) in increasing alpha.
  std::vector<std::pair<Rational, ActionProfile>> starts;
  for (std::size_t q = 0; q < cuts.size(); ++q) {
    const Rational& begin = cuts[q];
    const Rational end = q + 1 < cuts.size() ? cuts[q + 1] : Rational(1);
    std::vector<std::size_t> finals(n_states);
    for (std::size_t s = 0; s < n_states; ++s) {
      const auto& pieces = state_pieces[s];
      std::size_t k = 0;
      while (k + 1 < pieces.size() && pieces[k + 1].begin <= begin) ++k;
      finals[s] = pieces[k].line;
    }
    std::vector<Line> initial;
    for (std::size_t i = 0; i < instance.num_initial(); ++i) {
      const auto profile = ActionProfile::total(i, finals);
      initial.push_back({profile_reward(instance, profile), profile_cost(instance, profile)});
    }
    for (const auto& piece : envelope(initial, begin, end)) {
      starts.emplace_back(piece.begin, ActionProfile::total(piece.line, finals));
    }
  }

  BreakpointAnalysis out;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const Rational end = k + 1 < starts.size() ? starts[k + 1].first : Rational(1);
    const auto& profile = starts[k].second;
    out.segments.push_back({starts[k].first, end, profile, profile_reward(instance, profile),
                            profile_cost(instance, profile)});
    if (k > 0) out.breakpoints.push_back({starts[k].first, starts[k - 1].second, profile});
  }

  const std::size_t bound = n_states * instance.num_initial() * instance.max_final_count();
  if (out.breakpoints.size() > bound) {
    throw std::logic_error("breakpoint count " + std::to_string(out.breakpoints.size()) +
                           " exceeds S*N1*N2 = " + std::to_string(bound));
  }

  // Profit is (1 - alpha) R_a, decreasing inside a segment, so only left ends
  // are candidates.
  for (std::size_t k = 0; k < out.segments.size(); ++k) {
    const auto& seg = out.segments[k];
    Rational profit = (Rational(1) - seg.alpha_begin) * seg.reward;
    if (k == 0 || profit > out.optimal.profit) {
      out.optimal = {seg.alpha_begin, std::move(profit)};
      out.optimal_profile = seg.profile;
    }
  }
  return out;
}

LinearOptimum optimal_linear(const Instance& instance) { return analyze(instance).optimal; }

SolveReport solve_linear(const Instance& instance) {
  const auto analysis = analyze(instance);
  SolveReport report;
  report.best_contract = LinearContract{analysis.optimal.alpha};
  report.best_response = best_response(instance, report.best_contract);
  report.profit = report.best_response.principal_profit;
  if (report.profit != analysis.optimal.profit) {
    throw std::logic_error("best response profit " + report.profit.str() +
                           " disagrees with the breakpoint analysis " +
                           analysis.optimal.profit.str());
  }
  report.welfare = max_welfare(instance).max_welfare;
  report.profiles_enumerated = analysis.segments.size();
  return report;
}

void write_breakpoint_csv(const BreakpointAnalysis& analysis, std::ostream& out) {
  out << "alpha_exact,alpha_decimal,profit_exact,profit_decimal,profile\n";
  for (const auto& seg : analysis.segments) {
    const Rational profit = (Rational(1) - seg.alpha_begin) * seg.reward;
    out << seg.alpha_begin.str() << ',' << seg.alpha_begin.decimal(12) << ',' << profit.str()
        << ',' << profit.decimal(12) << ",\"" << seg.profile.str() << "\"\n";
  }
}

}  // namespace twostage
