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

#include <cmath>
#include <stdexcept>

#include "twostage/agent.hpp"

namespace twostage {

namespace {

using u128 = unsigned __int128;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ceil(q * 2^64) for q in [0,1]; the result fits in 65 bits.
u128 scaled_threshold(const Rational& q) {
  mpz_class scaled = q.numerator();
  scaled <<= 64;
  mpz_class out;
  mpz_cdiv_q(out.get_mpz_t(), scaled.get_mpz_t(), q.denominator().get_mpz_t());
  const mpz_class high = out >> 64;
  const mpz_class low = out - (high << 64);
  u128 v = static_cast<u128>(mpz_get_ui(high.get_mpz_t())) << 64;
  v |= static_cast<u128>(mpz_get_ui(low.get_mpz_t()));
  return v;
}

// u < ceil(cdf_k * 2^64)  <=>  u / 2^64 < cdf_k, exactly.
std::vector<u128> cdf_thresholds(const Distribution& dist) {
  std::vector<u128> out;
  out.reserve(dist.size());
  Rational cdf;
  for (const auto& p : dist) {
    cdf += p;
    out.push_back(scaled_threshold(cdf));
  }
  return out;
}

std::size_t sample(const std::vector<u128>& thresholds, std::uint64_t u) {
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    if (static_cast<u128>(u) < thresholds[k]) return k;
  }
  return thresholds.size() - 1;
}

}  // namespace

SimulationResult simulate(const Instance& instance, const Contract& contract,
                          std::uint64_t episodes, std::uint64_t seed) {
  if (episodes == 0) throw std::invalid_argument("episodes must be positive");
  const ResolvedContract rc = resolve(instance, contract);
  const BestResponse br = best_response(instance, contract);
  const std::size_t n_states = instance.num_states();
  const std::size_t m = instance.num_outcomes();

  const auto state_cdf = cdf_thresholds(instance.initial_actions[br.profile.initial].transition);
  std::vector<std::vector<u128>> outcome_cdf(n_states);
  // Per (state, outcome): principal profit and payment of that episode.
  std::vector<std::vector<double>> profit(n_states, std::vector<double>(m, 0.0));
  std::vector<std::vector<double>> payment(n_states, std::vector<double>(m, 0.0));
  for (std::size_t s = 0; s < n_states; ++s) {
    if (rc.terminated[s]) continue;
    const std::size_t j = *br.profile.finals[s];
    outcome_cdf[s] = cdf_thresholds(instance.final_action(s, j).outcome_dist);
    for (std::size_t o = 0; o < m; ++o) {
      const Rational pay = rc.t[o] + rc.s[s];
      payment[s][o] = pay.to_double();
      profit[s][o] = (instance.rewards[o] - pay).to_double();
    }
  }

  std::uint64_t base = seed;
  const std::uint64_t stream_key = splitmix64(base);
  long double sum_profit = 0.0L;
  long double sum_profit_sq = 0.0L;
  long double sum_payment = 0.0L;
  for (std::uint64_t k = 0; k < episodes; ++k) {
    std::uint64_t stream = stream_key ^ (k * 0xD1B54A32D192ED03ULL);
    const std::size_t s = sample(state_cdf, splitmix64(stream));
    const std::uint64_t u = splitmix64(stream);
    if (rc.terminated[s]) continue;
    const std::size_t o = sample(outcome_cdf[s], u);
    const long double p = profit[s][o];
    sum_profit += p;
    sum_profit_sq += p * p;
    sum_payment += payment[s][o];
  }

  const auto n = static_cast<long double>(episodes);
  SimulationResult result;
  result.episodes = episodes;
  const long double mean = sum_profit / n;
  result.empirical_profit = static_cast<double>(mean);
  result.empirical_payment = static_cast<double>(sum_payment / n);
  if (episodes > 1) {
    long double var = (sum_profit_sq - n * mean * mean) / (n - 1.0L);
    if (var < 0.0L) var = 0.0L;
    result.std_error = static_cast<double>(std::sqrt(var / n));
  }
  return result;
}

}  // namespace twostage
