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

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "twostage/model.hpp"

namespace twostage {

using Json = nlohmann::json;

// Malformed document: wrong JSON types, missing keys, unparsable numbers.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical instance document. Numbers are written as exact "p/q" strings.
Json to_json(const Instance& instance);
// Structural parse only; semantic checks belong to validate().
Instance instance_from_json(const Json& doc);

Json to_json(const Contract& contract);
// State references in "terminate_set" may be indices or state names.
Contract contract_from_json(const Json& doc, const Instance& instance);

Json to_json(const ActionProfile& profile);
Json to_json(const ProcessClass& pc);

// {"exact": "p/q", "decimal": "<12 significant digits>"}
Json rational_report(const Rational& r);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);
Contract load_contract(const std::filesystem::path& path, const Instance& instance);

// Compact canonical serialization, stable across runs.
std::string canonical_text(const Instance& instance);
// Hex SHA-256 of canonical_text.
std::string instance_digest(const Instance& instance);

}  // namespace twostage
