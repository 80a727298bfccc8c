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
#ifndef ICSFUZZ__RECORD_HPP_
#define ICSFUZZ__RECORD_HPP_

#include "icsfuzz/oracle.hpp"
#include "icsfuzz/scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace icsfuzz
{

enum class MutatorKind { Guided, Random, NCStart };

std::string_view to_string(MutatorKind kind);
std::optional<MutatorKind> parse_mutator(std::string_view name);

struct BucketLabels
{
  std::string distance;
  std::string speed;
  double angle{0.0};

  friend bool operator==(const BucketLabels &, const BucketLabels &) = default;
};

struct CategoryLabel
{
  char distance{'L'};  // L, M, F
  char speed{'L'};     // L, M, H
  char angle{'0'};     // N, 0, P

  std::string str() const { return {distance, speed, angle}; }
  friend auto operator<=>(const CategoryLabel &, const CategoryLabel &) = default;
};

/// One executed scenario.
struct OutcomeRecord
{
  std::uint64_t ordinal{0};
  MutatorKind mutator{MutatorKind::Guided};
  ScenarioKind kind{ScenarioKind::FLB};
  std::string branch;  // "seed", "+", "-" for stepped rounds; "random" otherwise
  ControlParameters params;
  ScenarioType type{ScenarioType::NC};
  bool triggered{false};
  std::optional<double> first_contact_s;
  double sim_seconds{0.0};  // simulated time covered by this execution
  double elapsed_s{0.0};    // cumulative simulated time of the campaign, this execution included
  BucketLabels buckets;
  CategoryLabel category;
};

nlohmann::ordered_json to_json(const OutcomeRecord & record);
/// Throws std::invalid_argument on a malformed line.
OutcomeRecord record_from_json(const nlohmann::json & j);

void write_records_jsonl(std::ostream & out, const std::vector<OutcomeRecord> & records);
std::vector<OutcomeRecord> read_records_jsonl(std::istream & in);

}  // namespace icsfuzz

#endif  // ICSFUZZ__RECORD_HPP_
