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

#include "twostage/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace twostage {

namespace {

Rational number_from_json(const Json& v, const std::string& where) {
  try {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
  } catch (const std::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a number string (decimal or \"p/q\") or an integer");
}

std::vector<Rational> numbers_from_json(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  std::vector<Rational> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(number_from_json(v[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing key \"" + key + "\"");
  return *it;
}

std::string name_from_json(const Json& obj, const std::string& where) {
  const auto it = obj.find("name");
  if (it == obj.end()) return {};
  if (!it->is_string()) throw ParseError(where + ".name: expected a string");
  return it->get<std::string>();
}

Json numbers_to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

std::size_t state_ref(const Json& v, const Instance& instance, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    for (std::size_t s = 0; s < instance.num_states(); ++s) {
      if (instance.states[s].name == name) return s;
    }
    throw ParseError(where + ": unknown state \"" + name + "\"");
  }
  throw ParseError(where + ": expected a state index or name");
}

}  // namespace

Json to_json(const Instance& instance) {
  Json doc;
  doc["rewards"] = numbers_to_json(instance.rewards);
  Json initial = Json::array();
  for (const auto& a : instance.initial_actions) {
    initial.push_back(
        {{"name", a.name}, {"cost", a.cost.str()}, {"transition", numbers_to_json(a.transition)}});
  }
  doc["initial_actions"] = std::move(initial);
  Json states = Json::array();
  for (const auto& st : instance.states) {
    Json finals = Json::array();
    for (const auto& a : st.final_actions) {
      finals.push_back({{"name", a.name},
                        {"cost", a.cost.str()},
                        {"outcome_dist", numbers_to_json(a.outcome_dist)}});
    }
    states.push_back({{"name", st.name}, {"final_actions", std::move(finals)}});
  }
  doc["states"] = std::move(states);
  return doc;
}

Instance instance_from_json(const Json& doc) {
  Instance inst;
  inst.rewards = numbers_from_json(field(doc, "rewards", "instance"), "rewards");

  const Json& initial = field(doc, "initial_actions", "instance");
  if (!initial.is_array()) throw ParseError("initial_actions: expected an array");
  for (std::size_t i = 0; i < initial.size(); ++i) {
    const std::string where = "initial_actions[" + std::to_string(i) + "]";
    InitialAction a;
    a.name = name_from_json(initial[i], where);
    a.cost = number_from_json(field(initial[i], "cost", where), where + ".cost");
    a.transition =
        numbers_from_json(field(initial[i], "transition", where), where + ".transition");
    inst.initial_actions.push_back(std::move(a));
  }

  const Json& states = field(doc, "states", "instance");
  if (!states.is_array()) throw ParseError("states: expected an array");
  for (std::size_t s = 0; s < states.size(); ++s) {
    const std::string where = "states[" + std::to_string(s) + "]";
    State st;
    st.name = name_from_json(states[s], where);
    const Json& finals = field(states[s], "final_actions", where);
    if (!finals.is_array()) throw ParseError(where + ".final_actions: expected an array");
    for (std::size_t j = 0; j < finals.size(); ++j) {
      const std::string fw = where + ".final_actions[" + std::to_string(j) + "]";
      FinalAction a;
      a.name = name_from_json(finals[j], fw);
      a.cost = number_from_json(field(finals[j], "cost", fw), fw + ".cost");
      a.outcome_dist =
          numbers_from_json(field(finals[j], "outcome_dist", fw), fw + ".outcome_dist");
      st.final_actions.push_back(std::move(a));
    }
    inst.states.push_back(std::move(st));
  }
  return inst;
}

Json to_json(const Contract& contract) {
  Json doc;
  doc["kind"] = contract_kind(contract);
  if (const auto* c = std::get_if<StandardContract>(&contract)) {
    doc["t"] = numbers_to_json(c->t);
  } else if (const auto* c = std::get_if<LinearContract>(&contract)) {
    doc["alpha"] = c->alpha.str();
  } else if (const auto* c = std::get_if<PayHalfwayContract>(&contract)) {
    doc["s"] = numbers_to_json(c->s);
    doc["t"] = numbers_to_json(c->t);
  } else {
    const auto& th = std::get<TerminateHalfwayContract>(contract);
    doc["t"] = numbers_to_json(th.t);
    doc["terminate_set"] = th.terminate_set;
  }
  return doc;
}

Contract contract_from_json(const Json& doc, const Instance& instance) {
  const Json& kind_v = field(doc, "kind", "contract");
  if (!kind_v.is_string()) throw ParseError("contract.kind: expected a string");
  const auto kind = kind_v.get<std::string>();
  if (kind == "standard") {
    return StandardContract{numbers_from_json(field(doc, "t", "contract"), "t")};
  }
  if (kind == "linear") {
    return LinearContract{number_from_json(field(doc, "alpha", "contract"), "alpha")};
  }
  if (kind == "pay_halfway") {
    return PayHalfwayContract{numbers_from_json(field(doc, "s", "contract"), "s"),
                              numbers_from_json(field(doc, "t", "contract"), "t")};
  }
  if (kind == "terminate_halfway") {
    TerminateHalfwayContract c;
    c.t = numbers_from_json(field(doc, "t", "contract"), "t");
    const Json& set = field(doc, "terminate_set", "contract");
    if (!set.is_array()) throw ParseError("terminate_set: expected an array");
    for (std::size_t k = 0; k < set.size(); ++k) {
      c.terminate_set.push_back(
          state_ref(set[k], instance, "terminate_set[" + std::to_string(k) + "]"));
    }
    std::sort(c.terminate_set.begin(), c.terminate_set.end());
    c.terminate_set.erase(std::unique(c.terminate_set.begin(), c.terminate_set.end()),
                          c.terminate_set.end());
    return c;
  }
  throw ParseError("contract.kind: unknown kind \"" + kind + "\"");
}

Json to_json(const ActionProfile& profile) {
  Json finals = Json::array();
  for (const auto& f : profile.finals) {
    if (f) {
      finals.push_back(*f);
    } else {
      finals.push_back(nullptr);
    }
  }
  return {{"initial", profile.initial}, {"finals", std::move(finals)}, {"compact", profile.str()}};
}

Json to_json(const ProcessClass& pc) {
  return {{"is_tree", pc.is_tree},
          {"is_stochastic_first_stage", pc.is_stochastic_first_stage},
          {"is_deterministic_first_stage", pc.is_deterministic_first_stage},
          {"label", pc.label()}};
}

Json rational_report(const Rational& r) { return {{"exact", r.str()}, {"decimal", r.decimal(12)}}; }

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return instance_from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << to_json(instance).dump(2) << '\n';
  if (!out) throw ParseError("write failed for " + path.string());
}

Contract load_contract(const std::filesystem::path& path, const Instance& instance) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return contract_from_json(Json::parse(in), instance);
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string canonical_text(const Instance& instance) { return to_json(instance).dump(); }

std::string instance_digest(const Instance& instance) {
  const std::string text = canonical_text(instance);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  os << std::hex;
  for (unsigned int k = 0; k < len; ++k) {
    os.width(2);
    os.fill('0');
    os << static_cast<int>(md[k]);
  }
  return os.str();
}

}  // namespace twostage
