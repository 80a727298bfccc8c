// Copyright 2026 The icsfuzz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ICSFUZZ__CONFIG_HPP_
#define ICSFUZZ__CONFIG_HPP_

#include "icsfuzz/fuzzer.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace icsfuzz
{

/// Schema or range violation in a campaign config. what() names the field
/// (dotted path) and, for syntax errors, the line.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates a campaign config document. Absent fields keep their
/// defaults; unknown fields are rejected.
CampaignConfig parse_config(const std::string & text);
CampaignConfig config_from_json(const nlohmann::json & j);

/// Canonical JSON form of a config; parse_config(dump) reproduces it.
nlohmann::ordered_json config_to_json(const CampaignConfig & config);

/// Lower-case hex SHA-256 of the given bytes.
std::string sha256_hex(const std::string & bytes);

/// Run manifest: config digest over the raw config bytes, budget and budget
/// used, totals per ScenarioType and seed validity, plus the canonical config
/// so a log can be replayed without the original file.
nlohmann::ordered_json make_manifest(
  const std::string & config_text, const CampaignConfig & config, const CampaignResult & result);

}  // namespace icsfuzz

#endif  // ICSFUZZ__CONFIG_HPP_
