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

#include "twostage/generators.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace twostage {

namespace {

using Params = std::map<std::string, std::string>;

Distribution point_mass(std::size_t size, std::size_t at) {
  Distribution d(size, Rational(0));
  d[at] = Rational(1);
  return d;
}

// sum_{k=1}^{n} lambda^k
Rational geometric(const Rational& lambda, std::size_t n) {
  Rational sum, term(1);
  for (std::size_t k = 1; k <= n; ++k) {
    term *= lambda;
    sum += term;
  }
  return sum;
}

Rational smallest_power_of_ten_at_least(const Rational& bound) {
  Rational r(1);
  while (r < bound) r *= Rational(10);
  return r;
}

class ParamReader {
 public:
  ParamReader(const std::string& family, const Params& params,
              std::initializer_list<const char*> known)
      : family_(family), params_(params) {
    std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : params_) {
      if (!allowed.count(key)) {
        throw std::invalid_argument("unknown parameter '" + key + "' for family " + family_);
      }
    }
  }

  bool has(const std::string& key) const { return params_.count(key) > 0; }

  Rational rational(const std::string& key, const Rational& fallback) const {
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    try {
      return Rational::parse(it->second);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("parameter " + key + " is not a number: '" + it->second + "'");
    }
  }

  std::size_t count(const std::string& key, std::size_t fallback, std::size_t min = 1) const {
    const Rational v = rational(key, Rational(static_cast<long>(fallback)));
    if (!v.is_integer() || v < Rational(static_cast<long>(min))) {
      throw std::invalid_argument(family_ + " requires integer " + key +
                                  " >= " + std::to_string(min));
    }
    return static_cast<std::size_t>(v.numerator().get_ui());
  }

  std::uint64_t seed() const {
    auto it = params_.find("seed");
    if (it == params_.end()) return 0;
    const std::string& text = it->second;
    // stoull would accept (and wrap) a leading minus sign.
    const bool digits = !text.empty() && std::all_of(text.begin(), text.end(),
                                                     [](char ch) { return ch >= '0' && ch <= '9'; });
    try {
      if (digits) return std::stoull(text);
    } catch (const std::out_of_range&) {
    }
    throw std::invalid_argument("parameter seed is not an unsigned 64-bit integer: '" + text + "'");
  }

 private:
  std::string family_;
  const Params& params_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Accept the Greek spellings too.
Params normalize(const Params& in) {
  Params out;
  for (const auto& [k, v] : in) {
    std::string key = k;
    if (key == "λ") key = "lambda";
    if (key == "ε" || key == "eps") key = "epsilon";
    out[key] = v;
  }
  return out;
}

}  // namespace

std::vector<std::string> family_names() {
  return {"example1",    "example2",          "thm2",
          "thm3",        "thm5",              "random_tree",
          "random_stochastic", "random_deterministic", "random_general"};
}

Instance example1() {
  Instance in;
  in.rewards = {Rational(0), Rational(5)};
  in.initial_actions = {
      {"effort", Rational::parse("1.8"), {Rational(1, 10), Rational(9, 10)}},
      {"null", Rational(0), {Rational(1), Rational(0)}},
  };
  in.states = {
      {"fail",
       {{"effort", Rational(2), {Rational(1, 5), Rational(4, 5)}},
        {"null", Rational(0), {Rational(9, 10), Rational(1, 10)}}}},
      {"pass",
       {{"effort", Rational(1), {Rational(0), Rational(1)}},
        {"null", Rational(0), {Rational(0), Rational(1)}}}},
  };
  return in;
}

Instance example2() {
  Instance in;
  in.rewards = {Rational(0), Rational(10)};
  in.initial_actions = {
      {"effort", Rational(8), {Rational(1, 100), Rational(99, 100)}},
      {"null", Rational(0), {Rational(1), Rational(0)}},
  };
  in.states = {
      {"bad",
       {{"effort", Rational(4), {Rational(2, 5), Rational(3, 5)}},
        {"null", Rational(0), {Rational(9, 10), Rational(1, 10)}}}},
      {"well",
       {{"effort", Rational(1), {Rational(0), Rational(1)}},
        {"null", Rational(0), {Rational(0), Rational(1)}}}},
  };
  return in;
}

Instance thm2_instance(const Rational& p, const Rational& q, const Rational& c,
                       const Rational& x) {
  require(Rational(0) < q, "thm2 requires 0 < q");
  require(q < p, "thm2 requires q < p");
  require(p < Rational(1), "thm2 requires p < 1");
  require(Rational(0) < c, "thm2 requires 0 < c");
  require(c < x, "thm2 requires c < x");
  require(x > (Rational(1) + p - q) * c / (Rational(1) - p),
          "thm2 requires x > (1+p-q)c/(1-p)");

  Instance in;
  in.rewards = {Rational(0), x};
  const Rational one(1), zero(0);
  in.initial_actions = {
      {"a1", zero, {p, zero, one - p}},
      {"a2", zero, {q, one - q, zero}},
  };
  const Distribution fail = point_mass(2, 0), success = point_mass(2, 1);
  in.states = {
      {"s1", {{"a1", zero, success}, {"null", zero, fail}}},
      {"s2", {{"a1", c, success}, {"null", zero, fail}}},
      {"s3", {{"a1", zero, fail}, {"null", zero, fail}}},
  };
  return in;
}

Rational thm3_default_r(std::size_t n1, std::size_t n2, const Rational& lambda) {
  // The costly state's reward dominates every other R^s_j.
  const std::size_t top = (n1 + 1) * n2 + 1;
  const Rational c = geometric(lambda, top);
  return smallest_power_of_ten_at_least(c + Rational(static_cast<long>(top)));
}

Instance thm3_instance(std::size_t n1, std::size_t n2, const Rational& lambda,
                       const Rational& r) {
  require(n1 >= 1, "thm3 requires N1 >= 1");
  require(n2 >= 1, "thm3 requires N2 >= 1");
  require(lambda > Rational(0), "thm3 requires lambda > 0");
  require(r > Rational(0), "thm3 requires r > 0");

  const std::size_t top = (n1 + 1) * n2 + 1;
  const Rational c = geometric(lambda, top);
  const Rational big_r = c + Rational(static_cast<long>(top));
  require(big_r <= r, "thm3 requires r >= R = c + (N1+1)N2 + 1 so that R/r <= 1");

  Instance in;
  in.rewards = {Rational(0), r};
  const std::size_t num_states = n1 + 1;
  for (std::size_t i = 0; i < n1; ++i) {
    in.initial_actions.push_back(
        {"a" + std::to_string(i + 1), Rational(0), point_mass(num_states, i)});
  }
  in.initial_actions.push_back(
      {"a" + std::to_string(n1 + 1), c, point_mass(num_states, n1)});

  auto success_dist = [&](const Rational& reward) {
    const Rational prob = reward / r;
    return Distribution{Rational(1) - prob, prob};
  };

  for (std::size_t s = 1; s <= n1; ++s) {
    State st{"s" + std::to_string(s), {}};
    for (std::size_t j = 1; j <= n2; ++j) {
      const std::size_t k = s * n2 + j;
      const Rational cost = geometric(lambda, k);
      st.final_actions.push_back(
          {"a" + std::to_string(j), cost, success_dist(cost + Rational(static_cast<long>(k)))});
    }
    st.final_actions.push_back({"null", Rational(0), point_mass(2, 0)});
    in.states.push_back(std::move(st));
  }
  State last{"s" + std::to_string(n1 + 1), {}};
  for (std::size_t j = 1; j <= n2 + 1; ++j) {
    last.final_actions.push_back(
        {j == n2 + 1 ? "null" : "a" + std::to_string(j), Rational(0), success_dist(big_r)});
  }
  in.states.push_back(std::move(last));
  return in;
}

Rational thm5_default_r(std::size_t s, std::size_t n2, const Rational& lambda,
                        const Rational& epsilon) {
  const std::size_t top = s * n2 + n2;
  const Rational max_reward = geometric(lambda, top) + Rational(static_cast<long>(top));
  const Rational bound = max_reward / (Rational(1) - epsilon);
  Rational r = smallest_power_of_ten_at_least(bound);
  if (r == bound) r *= Rational(10);
  return r;
}

Instance thm5_instance(std::size_t num_s, std::size_t n2, const Rational& lambda,
                       const Rational& epsilon, const Rational& r) {
  require(num_s >= 1, "thm5 requires S >= 1");
  require(n2 >= 1, "thm5 requires N2 >= 1");
  require(lambda > Rational(0), "thm5 requires lambda > 0");
  require(Rational(0) < epsilon && epsilon < Rational(1), "thm5 requires 0 < epsilon < 1");

  const std::size_t m = num_s + 3;
  const std::size_t num_states = 2 * num_s + 1;
  Instance in;
  in.rewards.assign(m, Rational(0));
  in.rewards[1] = r;
  in.initial_actions.push_back(
      {"a1", Rational(0), Distribution(num_states, Rational(1, static_cast<long>(num_states)))});

  for (std::size_t s = 1; s <= num_s; ++s) {
    State st{"s" + std::to_string(s), {}};
    for (std::size_t j = 1; j <= n2; ++j) {
      const std::size_t k = s * n2 + j;
      const Rational cost = geometric(lambda, k);
      const Rational reward = cost + Rational(static_cast<long>(k));
      require(reward / (Rational(1) - epsilon) < r,
              "thm5 requires r > max R^s_j / (1-epsilon)");
      Distribution d(m, Rational(0));
      d[0] = Rational(1) - epsilon - reward / r;
      d[1] = reward / r;
      // Outcome s+2 for the designated action, outcome S+3 otherwise.
      d[j == n2 ? s + 1 : m - 1] += epsilon;
      st.final_actions.push_back({"a" + std::to_string(j), cost, std::move(d)});
    }
    st.final_actions.push_back({"null", Rational(0), point_mass(m, 0)});
    in.states.push_back(std::move(st));
  }
  // Worthless states: every non-null action lands on zero-reward outcome s-S+2.
  for (std::size_t s = num_s + 1; s <= num_states; ++s) {
    State st{"s" + std::to_string(s), {}};
    for (std::size_t j = 1; j <= n2; ++j) {
      st.final_actions.push_back({"a" + std::to_string(j), Rational(0), point_mass(m, s - num_s + 1)});
    }
    st.final_actions.push_back({"null", Rational(0), point_mass(m, 0)});
    in.states.push_back(std::move(st));
  }
  return in;
}

// --- random instances -------------------------------------------------------

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  // Random distribution over `support` positions of a vector of length n.
  Distribution distribution(std::size_t n, const std::vector<std::size_t>& support) {
    static constexpr long kDenominators[] = {2, 3, 4, 5, 6, 8, 10, 12};
    const long den = kDenominators[index(std::size(kDenominators))];
    std::vector<long> units(support.size(), 0);
    for (long u = 0; u < den; ++u) ++units[index(support.size())];
    Distribution d(n, Rational(0));
    for (std::size_t k = 0; k < support.size(); ++k) d[support[k]] = Rational(units[k], den);
    return d;
  }

  Distribution distribution(std::size_t n) {
    std::vector<std::size_t> all(n);
    for (std::size_t k = 0; k < n; ++k) all[k] = k;
    return distribution(n, all);
  }

  Rational half_units(long max_halves) {
    return Rational(static_cast<long>(index(static_cast<std::size_t>(max_halves) + 1)), 2);
  }

 private:
  std::mt19937_64 rng_;
};

Instance draw(RandomClass cls, const RandomSizes& sz, Sampler& g) {
  const std::size_t num_states = std::max<std::size_t>(sz.states, cls == RandomClass::kGeneral ? 2 : 1);
  std::size_t num_initial = std::max<std::size_t>(sz.initial, 1);
  if (cls == RandomClass::kStochasticFirstStage) num_initial = 1;
  if (cls == RandomClass::kGeneral) num_initial = std::max<std::size_t>(num_initial, 2);
  const std::size_t num_finals = std::max<std::size_t>(sz.finals, 1);
  const std::size_t per_state = std::max<std::size_t>(sz.outcomes, 1);
  const std::size_t m = cls == RandomClass::kTree ? per_state * num_states : per_state;

  Instance in;
  for (std::size_t o = 0; o < m; ++o) in.rewards.push_back(Rational(static_cast<long>(g.index(11))));

  for (std::size_t i = 0; i < num_initial; ++i) {
    const bool null = i + 1 == num_initial;
    Distribution trans = cls == RandomClass::kDeterministicFirstStage
                             ? point_mass(num_states, g.index(num_states))
                             : g.distribution(num_states);
    in.initial_actions.push_back({null ? "null" : "a" + std::to_string(i + 1),
                                  null ? Rational(0) : g.half_units(6), std::move(trans)});
  }

  for (std::size_t s = 0; s < num_states; ++s) {
    std::vector<std::size_t> support;
    if (cls == RandomClass::kTree) {
      for (std::size_t k = 0; k < per_state; ++k) support.push_back(s * per_state + k);
    } else {
      for (std::size_t k = 0; k < m; ++k) support.push_back(k);
    }
    State st{"s" + std::to_string(s + 1), {}};
    for (std::size_t j = 0; j < num_finals; ++j) {
      const bool null = j + 1 == num_finals;
      st.final_actions.push_back({null ? "null" : "a" + std::to_string(j + 1),
                                  null ? Rational(0) : g.half_units(8),
                                  g.distribution(m, support)});
    }
    in.states.push_back(std::move(st));
  }
  return in;
}

}  // namespace

bool matches(const ProcessClass& pc, RandomClass cls) {
  switch (cls) {
    case RandomClass::kTree:
      return pc.is_tree;
    case RandomClass::kStochasticFirstStage:
      return pc.is_stochastic_first_stage;
    case RandomClass::kDeterministicFirstStage:
      return pc.is_deterministic_first_stage;
    case RandomClass::kGeneral:
      return pc.is_general();
  }
  return false;
}

Instance random_instance(RandomClass cls, const RandomSizes& sizes, std::uint64_t seed) {
  Sampler g(seed);
  // Rejection: a draw for the general class can come out accidentally special
  // (e.g. every transition a point mass); redraw from the same stream.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Instance in = draw(cls, sizes, g);
    if (matches(classify(in), cls) && validate(in).ok()) return in;
  }
  throw std::logic_error("random_instance: could not draw an instance of the requested class");
}

Instance generate(const FamilyParams& fp) {
  const Params params = normalize(fp.params);
  const std::string& f = fp.family;
  if (f == "example1" || f == "example2") {
    ParamReader(f, params, {});
    return f == "example1" ? example1() : example2();
  }
  if (f == "thm2") {
    ParamReader rd(f, params, {"p", "q", "c", "x"});
    return thm2_instance(rd.rational("p", Rational(9, 10)), rd.rational("q", Rational(1, 2)),
                         rd.rational("c", Rational(1)), rd.rational("x", Rational(20)));
  }
  if (f == "thm3") {
    ParamReader rd(f, params, {"N1", "N2", "lambda", "r"});
    const std::size_t n1 = rd.count("N1", 2), n2 = rd.count("N2", 2);
    const Rational lambda = rd.rational("lambda", Rational(10));
    require(lambda > Rational(0), "thm3 requires lambda > 0");
    return thm3_instance(n1, n2, lambda, rd.rational("r", thm3_default_r(n1, n2, lambda)));
  }
  if (f == "thm5") {
    ParamReader rd(f, params, {"S", "N2", "lambda", "epsilon", "r"});
    const std::size_t s = rd.count("S", 2), n2 = rd.count("N2", 2);
    const Rational lambda = rd.rational("lambda", Rational(10));
    const Rational eps = rd.rational("epsilon", Rational(1, 1000));
    require(lambda > Rational(0), "thm5 requires lambda > 0");
    require(Rational(0) < eps && eps < Rational(1), "thm5 requires 0 < epsilon < 1");
    return thm5_instance(s, n2, lambda, eps, rd.rational("r", thm5_default_r(s, n2, lambda, eps)));
  }
  static const std::map<std::string, RandomClass> kRandom = {
      {"random_tree", RandomClass::kTree},
      {"random_stochastic", RandomClass::kStochasticFirstStage},
      {"random_deterministic", RandomClass::kDeterministicFirstStage},
      {"random_general", RandomClass::kGeneral},
  };
  if (auto it = kRandom.find(f); it != kRandom.end()) {
    ParamReader rd(f, params, {"S", "N1", "N2", "M", "seed"});
    RandomSizes sz;
    sz.states = rd.count("S", sz.states);
    sz.initial = rd.count("N1", sz.initial);
    sz.finals = rd.count("N2", sz.finals);
    sz.outcomes = rd.count("M", sz.outcomes);
    return random_instance(it->second, sz, rd.seed());
  }
  throw std::invalid_argument("unknown family '" + f + "'");
}

}  // namespace twostage
