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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "twostage/cli.hpp"
#include "twostage/generators.hpp"
#include "twostage/io.hpp"

namespace twostage {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out, err;
  Json doc() const { return Json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("twostage_cli_" + std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name)) << text;
    return file(name);
  }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string instance_file(const TempDir& dir, const Instance& in, const std::string& name) {
  save_instance(in, dir.file(name));
  return dir.file(name);
}

TEST_CASE("generate then validate") {
  TempDir dir;
  const std::string path = dir.file("ex2.json");
  const Run g = run({"generate", "--family", "example2", "--out", path});
  CHECK(g.code == cli::kOk);
  CHECK(g.doc()["written"] == path);
  const Run v = run({"validate", path});
  CHECK(v.code == cli::kOk);
  CHECK(v.doc()["ok"] == true);
  CHECK(v.doc()["instance_digest"] == instance_digest(example2()));

  const Run to_stdout = run({"generate", "--family", "thm2", "--param", "x=30"});
  CHECK(to_stdout.code == cli::kOk);
  CHECK(instance_from_json(to_stdout.doc()).rewards[1] == Rational(30));
}

TEST_CASE("validation failures exit 1 with the violation list") {
  TempDir dir;
  Instance bad = example1();
  bad.states[0].final_actions[0].outcome_dist[0] = Rational(1, 2);
  const std::string path = instance_file(dir, bad, "bad.json");
  const Run v = run({"validate", path});
  CHECK(v.code == cli::kValidationFailure);
  CHECK(v.doc()["ok"] == false);
  CHECK(v.doc()["violations"][0]["rule"] == "distribution_sum");
  CHECK(run({"solve", path}).code == cli::kValidationFailure);
  CHECK(run({"generate", "--family", "thm2", "--param", "p=0.1"}).code == cli::kValidationFailure);
}

TEST_CASE("I/O and parse errors exit 3") {
  TempDir dir;
  CHECK(run({"validate", dir.file("missing.json")}).code == cli::kIoError);
  CHECK(run({"validate", dir.write("junk.json", "{not json")}).code == cli::kIoError);
  CHECK(run({"validate", dir.write("shape.json", R"({"rewards": 3})")}).code == cli::kIoError);
  CHECK(run({"frobnicate"}).code == cli::kIoError);
  CHECK(run({"solve", "--contract", "menu", "x.json"}).code == cli::kIoError);
  CHECK(run({"generate", "--family", "thm2", "--param", "novalue"}).code == cli::kIoError);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("caps exit 2") {
  TempDir dir;
  const std::string path = instance_file(dir, example1(), "ex1.json");
  CHECK(run({"solve", path, "--contract", "pay", "--profiles-cap", "2"}).code == cli::kCapExceeded);
  CHECK(run({"solve", path, "--contract", "terminate", "--subsets-cap", "1"}).code ==
        cli::kCapExceeded);
}

TEST_CASE("solve reports exact and decimal values") {
  TempDir dir;
  const std::string path = instance_file(dir, example1(), "ex1.json");
  const Run r = run({"solve", path, "--contract", "standard"});
  REQUIRE(r.code == cli::kOk);
  const Json d = r.doc();
  CHECK(d["result"]["profit"]["exact"] == "91/36");
  CHECK(d["result"]["profit"]["decimal"] == "2.52777777778");
  CHECK(d["result"]["contract"]["t"][1] == "20/9");
  CHECK(d["welfare"]["exact"] == "29/10");
  CHECK(d["class"]["label"] == "general");
  CHECK(run({"solve", path, "--contract", "linear"}).doc()["result"]["contract"]["alpha"] == "4/9");
}

TEST_CASE("compare on the second example") {
  TempDir dir;
  const std::string path = instance_file(dir, example2(), "ex2.json");
  const Run r = run({"compare", path});
  REQUIRE(r.code == cli::kOk);
  const Json d = r.doc();
  CHECK(d["results"]["standard"]["profit"]["exact"] == "6/5");
  CHECK(d["results"]["terminate"]["profit"]["exact"] == "19/10");
  CHECK(d["results"].contains("pay"));
  CHECK(d["results"].contains("linear"));
  CHECK(d["ratios"]["terminate_over_standard"]["exact"] == "19/12");
  CHECK(d["command"] == "twostage compare " + path);
  CHECK(d.contains("duration_seconds"));
}

TEST_CASE("pay solve on the deterministic first-stage family") {
  TempDir dir;
  const std::string path = dir.file("thm3.json");
  REQUIRE(run({"generate", "--family", "thm3", "--param", "N1=2", "--param", "N2=2", "--param",
               "lambda=10", "--out", path})
              .code == cli::kOk);
  const Json d = run({"solve", path, "--contract", "pay"}).doc();
  CHECK(d["result"]["profit"]["exact"] == "7");
  CHECK(d["class"]["label"] == "deterministic_first_stage");
}

TEST_CASE("output is byte-deterministic apart from the clock") {
  TempDir dir;
  const std::string path = instance_file(dir, example1(), "ex1.json");
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"compare", path}, {"welfare", path}, {"breakpoints", path}, {"classify", path}}) {
    Json a = run(args).doc(), b = run(args).doc();
    a.erase("duration_seconds");
    b.erase("duration_seconds");
    CHECK(a.dump() == b.dump());
  }
  CHECK(run({"welfare", path}).out == run({"welfare", path}).out);
}

TEST_CASE("best-response and simulate read contract files") {
  TempDir dir;
  const std::string path = instance_file(dir, example2(), "ex2.json");
  const std::string cf = dir.write(
      "c.json", R"({"kind": "terminate_halfway", "t": ["0", "41/5"], "terminate_set": ["bad"]})");
  const Json br = run({"best-response", path, "--contract-file", cf}).doc();
  CHECK(br["best_response"]["principal_profit"]["exact"] == "891/500");
  CHECK(br["best_response"]["profile"]["compact"] == "0|-,1");

  const Run s1 = run({"simulate", path, "--contract-file", cf, "--episodes", "5000", "--seed", "3"});
  const Run s2 = run({"simulate", path, "--contract-file", cf, "--episodes", "5000", "--seed", "3"});
  REQUIRE(s1.code == cli::kOk);
  CHECK(s1.out == s2.out);
  CHECK(s1.doc()["episodes"] == 5000);
  CHECK(std::abs(s1.doc()["z_score"].get<double>()) < 5.0);

  const std::string wrong = dir.write("w.json", R"({"kind": "standard", "t": ["1"]})");
  CHECK(run({"best-response", path, "--contract-file", wrong}).code == cli::kValidationFailure);
  CHECK(run({"best-response", path, "--contract-file", dir.file("none.json")}).code ==
        cli::kIoError);
}

TEST_CASE("breakpoints with CSV") {
  TempDir dir;
  const std::string path = instance_file(dir, example1(), "ex1.json");
  const std::string csv = dir.file("bp.csv");
  const Run r = run({"breakpoints", path, "--csv", csv});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.doc()["optimal"]["alpha"]["exact"] == "4/9");
  CHECK(r.doc()["breakpoints"].size() == 2);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "alpha_exact,alpha_decimal,profit_exact,profit_decimal,profile");
}

TEST_CASE("linear is skipped on negative rewards") {
  TempDir dir;
  Instance in = example1();
  in.rewards[0] = Rational(-1);
  const std::string path = instance_file(dir, in, "neg.json");
  const Json d = run({"compare", path}).doc();
  CHECK(d["results"]["linear"].contains("skipped"));
  CHECK(d["ratios"]["linear_over_standard"].is_null());
  CHECK(run({"solve", path, "--contract", "linear"}).code == cli::kValidationFailure);
}

}  // namespace
}  // namespace twostage
