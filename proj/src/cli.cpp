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

#include "twostage/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "twostage/agent.hpp"
#include "twostage/contracts.hpp"
#include "twostage/generators.hpp"
#include "twostage/io.hpp"
#include "twostage/linear.hpp"
#include "twostage/welfare.hpp"

namespace twostage::cli {

namespace {

// Rejected instance; carries the report to print.
struct InvalidInstance {
  ValidationReport report;
};

Json violations_json(const ValidationReport& report) {
  Json list = Json::array();
  for (const auto& v : report.violations) {
    list.push_back({{"rule", v.rule}, {"location", v.location}, {"message", v.message}});
  }
  return list;
}

Instance load_valid(const std::string& path) {
  Instance in = load_instance(path);
  ValidationReport report = validate(in);
  if (!report.ok()) throw InvalidInstance{std::move(report)};
  return in;
}

Json header(const std::string& command, const Instance& in) {
  return {{"command", command}, {"instance_digest", instance_digest(in)}, {"class", to_json(classify(in))}};
}

Json best_response_json(const BestResponse& br) {
  Json per_state = Json::array();
  for (const auto& u : br.per_state_utility) per_state.push_back(rational_report(u));
  return {{"profile", to_json(br.profile)},
          {"agent_utility", rational_report(br.agent_utility)},
          {"expected_payment", rational_report(br.expected_payment)},
          {"principal_profit", rational_report(br.principal_profit)},
          {"per_state_utility", per_state}};
}

Json solve_json(const SolveReport& r) {
  return {{"contract", to_json(r.best_contract)},
          {"profile", to_json(r.best_response.profile)},
          {"payment", rational_report(r.best_response.expected_payment)},
          {"profit", rational_report(r.profit)},
          {"agent_utility", rational_report(r.best_response.agent_utility)},
          {"profiles_enumerated", r.profiles_enumerated},
          {"termination_sets_enumerated", r.termination_sets_enumerated},
          {"infeasible_profiles", r.infeasible_profiles}};
}

Json welfare_json(const WelfareReport& w) {
  Json states = Json::array();
  for (std::size_t s = 0; s < w.per_state_best.size(); ++s) {
    states.push_back({{"state", s},
                      {"final_action", w.per_state_best[s].final_action},
                      {"surplus", rational_report(w.per_state_best[s].surplus)}});
  }
  return {{"max_welfare", rational_report(w.max_welfare)},
          {"argmax_profile", to_json(w.argmax_profile)},
          {"per_state_best", states}};
}

Json ratio(const Rational& num, const Rational& den) {
  if (den.is_zero()) return nullptr;
  return rational_report(num / den);
}

SolveReport solve_kind(const Instance& in, const std::string& kind, const SolverOptions& opt) {
  if (kind == "standard") return optimal_standard(in, opt);
  if (kind == "pay") return optimal_pay(in, opt);
  if (kind == "terminate") return optimal_terminate(in, opt);
  return solve_linear(in);
}

std::pair<std::string, std::string> split_param(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw CLI::ValidationError("--param", "expected key=value, got '" + kv + "'");
  }
  return {kv.substr(0, eq), kv.substr(eq + 1)};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contracts for two-stage delegation processes"};
  app.name("twostage");
  app.require_subcommand(1);

  std::string file, contract_file, csv_path, out_path, family, contract_kind_flag = "standard";
  std::vector<std::string> params;
  SolverOptions options;
  std::uint64_t episodes = 100000, seed = 0;

  std::string echo = "twostage";
  for (const auto& a : args) echo += " " + a;

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", file, "Instance file (JSON)")->required();
  };
  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--profiles-cap", options.profiles_cap, "Max action profiles per initial action");
    sub->add_option("--subsets-cap", options.subsets_cap, "Max states for terminate-set enumeration");
    sub->add_option("--threads", options.threads, "Worker threads (0 = hardware)");
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check an instance file");
  add_file(validate_cmd);
  auto* classify_cmd = app.add_subcommand("classify", "Report the process class");
  add_file(classify_cmd);
  auto* welfare_cmd = app.add_subcommand("welfare", "Maximum welfare");
  add_file(welfare_cmd);
  auto* solve_cmd = app.add_subcommand("solve", "Optimal contract of one kind");
  add_file(solve_cmd);
  solve_cmd->add_option("--contract", contract_kind_flag, "standard|linear|pay|terminate")
      ->check(CLI::IsMember({"standard", "linear", "pay", "terminate"}));
  add_solver_flags(solve_cmd);
  auto* br_cmd = app.add_subcommand("best-response", "Agent best response to a contract");
  add_file(br_cmd);
  br_cmd->add_option("--contract-file", contract_file, "Contract file (JSON)")->required();
  auto* bp_cmd = app.add_subcommand("breakpoints", "Linear-contract breakpoint analysis");
  add_file(bp_cmd);
  bp_cmd->add_option("--csv", csv_path, "Also write per-segment CSV here");
  auto* gen_cmd = app.add_subcommand("generate", "Build an instance from a named family");
  gen_cmd->add_option("--family", family, "Family name")->required();
  gen_cmd->add_option("--param", params, "key=value (repeatable)");
  gen_cmd->add_option("--out", out_path, "Write the instance here instead of stdout");
  auto* cmp_cmd = app.add_subcommand("compare", "All four optimal contracts side by side");
  add_file(cmp_cmd);
  add_solver_flags(cmp_cmd);
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of a contract's profit");
  add_file(sim_cmd);
  sim_cmd->add_option("--contract-file", contract_file, "Contract file (JSON)")->required();
  sim_cmd->add_option("--episodes", episodes, "Number of episodes")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", seed, "RNG seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, eo;
    const int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? kOk : kIoError;
  }

  const auto start = std::chrono::steady_clock::now();
  Json doc;
  int code = kOk;
  try {
    if (validate_cmd->parsed()) {
      const Instance in = load_instance(file);
      const ValidationReport report = validate(in);
      doc = {{"command", echo}, {"ok", report.ok()}, {"violations", violations_json(report)}};
      if (report.ok()) doc["instance_digest"] = instance_digest(in);
      code = report.ok() ? kOk : kValidationFailure;
    } else if (classify_cmd->parsed()) {
      const Instance in = load_valid(file);
      doc = header(echo, in);
      doc["label"] = classify(in).label();
    } else if (welfare_cmd->parsed()) {
      const Instance in = load_valid(file);
      doc = header(echo, in);
      doc["welfare"] = welfare_json(max_welfare(in));
    } else if (solve_cmd->parsed()) {
      const Instance in = load_valid(file);
      const SolveReport r = solve_kind(in, contract_kind_flag, options);
      doc = header(echo, in);
      doc["contract_kind"] = contract_kind_flag;
      doc["result"] = solve_json(r);
      doc["welfare"] = rational_report(r.welfare);
      doc["profit_over_welfare"] = ratio(r.profit, r.welfare);
      doc["duration_seconds"] = seconds_since(start);
    } else if (br_cmd->parsed()) {
      const Instance in = load_valid(file);
      const Contract c = load_contract(contract_file, in);
      doc = header(echo, in);
      doc["contract"] = to_json(c);
      doc["best_response"] = best_response_json(best_response(in, c));
    } else if (bp_cmd->parsed()) {
      const Instance in = load_valid(file);
      const BreakpointAnalysis a = analyze(in);
      Json bps = Json::array(), segs = Json::array();
      for (const auto& b : a.breakpoints) {
        bps.push_back({{"alpha", rational_report(b.alpha)},
                       {"profile_left", to_json(b.profile_left)},
                       {"profile_right", to_json(b.profile_right)}});
      }
      for (const auto& s : a.segments) {
        segs.push_back({{"alpha_begin", rational_report(s.alpha_begin)},
                        {"alpha_end", rational_report(s.alpha_end)},
                        {"profile", to_json(s.profile)},
                        {"reward", rational_report(s.reward)},
                        {"cost", rational_report(s.cost)}});
      }
      doc = header(echo, in);
      doc["breakpoints"] = bps;
      doc["segments"] = segs;
      doc["optimal"] = {{"alpha", rational_report(a.optimal.alpha)},
                        {"profit", rational_report(a.optimal.profit)},
                        {"profile", to_json(a.optimal_profile)}};
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw ParseError("cannot write " + csv_path);
        write_breakpoint_csv(a, csv);
        if (!csv) throw ParseError("write failed for " + csv_path);
      }
    } else if (gen_cmd->parsed()) {
      FamilyParams fp{family, {}};
      for (const auto& kv : params) fp.params.insert(split_param(kv));
      const Instance in = generate(fp);
      if (!out_path.empty()) {
        save_instance(in, out_path);
        doc = header(echo, in);
        doc["written"] = out_path;
      } else {
        doc = to_json(in);
      }
    } else if (cmp_cmd->parsed()) {
      const Instance in = load_valid(file);
      const SolveReport standard = optimal_standard(in, options);
      const SolveReport pay = optimal_pay(in, options);
      const SolveReport terminate = optimal_terminate(in, options);
      std::optional<SolveReport> lin;
      if (!has_negative_reward(in)) lin = solve_linear(in);
      const Rational wel = max_welfare(in).max_welfare;

      doc = header(echo, in);
      doc["welfare"] = rational_report(wel);
      Json results;
      results["standard"] = solve_json(standard);
      results["pay"] = solve_json(pay);
      results["terminate"] = solve_json(terminate);
      results["linear"] = lin ? solve_json(*lin) : Json{{"skipped", "negative reward present"}};
      doc["results"] = results;
      Json ratios;
      ratios["standard_over_welfare"] = ratio(standard.profit, wel);
      ratios["pay_over_welfare"] = ratio(pay.profit, wel);
      ratios["terminate_over_welfare"] = ratio(terminate.profit, wel);
      ratios["linear_over_welfare"] = lin ? ratio(lin->profit, wel) : Json(nullptr);
      ratios["pay_over_standard"] = ratio(pay.profit, standard.profit);
      ratios["terminate_over_standard"] = ratio(terminate.profit, standard.profit);
      ratios["linear_over_standard"] = lin ? ratio(lin->profit, standard.profit) : Json(nullptr);
      doc["ratios"] = ratios;
      doc["duration_seconds"] = seconds_since(start);
    } else if (sim_cmd->parsed()) {
      const Instance in = load_valid(file);
      const Contract c = load_contract(contract_file, in);
      const BestResponse br = best_response(in, c);
      const SimulationResult sim = simulate(in, c, episodes, seed);
      const double analytic = br.principal_profit.to_double();
      doc = header(echo, in);
      doc["contract"] = to_json(c);
      doc["episodes"] = sim.episodes;
      doc["seed"] = seed;
      doc["empirical_profit"] = sim.empirical_profit;
      doc["empirical_payment"] = sim.empirical_payment;
      doc["std_error"] = sim.std_error;
      doc["analytic_profit"] = rational_report(br.principal_profit);
      doc["z_score"] = sim.std_error > 0 ? Json((sim.empirical_profit - analytic) / sim.std_error)
                                         : Json(nullptr);
    }
  } catch (const InvalidInstance& bad) {
    doc = {{"command", echo}, {"ok", false}, {"violations", violations_json(bad.report)}};
    code = kValidationFailure;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  out << doc.dump(2) << "\n";
  return code;
}

}  // namespace twostage::cli
