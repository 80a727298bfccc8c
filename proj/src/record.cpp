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
#include "icsfuzz/record.hpp"

#include <stdexcept>

namespace icsfuzz
{

std::string_view to_string(MutatorKind kind)
{
  switch (kind) {
    case MutatorKind::Guided:
      return "guided";
    case MutatorKind::Random:
      return "random";
    case MutatorKind::NCStart:
      return "nc_start";
  }
  return "?";
}

std::optional<MutatorKind> parse_mutator(std::string_view name)
{
  for (auto m : {MutatorKind::Guided, MutatorKind::Random, MutatorKind::NCStart}) {
    if (to_string(m) == name) {
      return m;
    }
  }
  return std::nullopt;
}

nlohmann::ordered_json to_json(const OutcomeRecord & r)
{
  nlohmann::ordered_json j;
  j["ordinal"] = r.ordinal;
  j["mutator"] = std::string(to_string(r.mutator));
  j["kind"] = std::string(to_string(r.kind));
  j["branch"] = r.branch;
  j["distance"] = r.params.distance;
  j["speed"] = r.params.speed;
  j["theta_long"] = r.params.theta_long;
  j["theta_lat"] = r.params.theta_lat;
  j["angle"] = r.params.angle;
  j["type"] = std::string(to_string(r.type));
  j["triggered"] = r.triggered;
  j["first_contact_s"] = r.first_contact_s ? nlohmann::ordered_json(*r.first_contact_s)
                                           : nlohmann::ordered_json(nullptr);
  j["sim_seconds"] = r.sim_seconds;
  j["elapsed_s"] = r.elapsed_s;
  j["buckets"] = {
    {"distance", r.buckets.distance}, {"speed", r.buckets.speed}, {"angle", r.buckets.angle}};
  j["category"] = r.category.str();
  return j;
}

OutcomeRecord record_from_json(const nlohmann::json & j)
{
  try {
    OutcomeRecord r;
    r.ordinal = j.at("ordinal").get<std::uint64_t>();
    const auto mutator = parse_mutator(j.at("mutator").get<std::string>());
    const auto kind = parse_kind(j.at("kind").get<std::string>());
    const auto type = parse_scenario_type(j.at("type").get<std::string>());
    if (!mutator || !kind || !type) {
      throw std::invalid_argument("unknown mutator, kind or type");
    }
    r.mutator = *mutator;
    r.kind = *kind;
    r.type = *type;
    r.branch = j.at("branch").get<std::string>();
    r.params.distance = j.at("distance").get<double>();
    r.params.speed = j.at("speed").get<double>();
    r.params.theta_long = j.at("theta_long").get<double>();
    r.params.theta_lat = j.at("theta_lat").get<double>();
    r.params.angle = j.at("angle").get<double>();
    r.triggered = j.at("triggered").get<bool>();
    if (!j.at("first_contact_s").is_null()) {
      r.first_contact_s = j.at("first_contact_s").get<double>();
    }
    r.sim_seconds = j.at("sim_seconds").get<double>();
    r.elapsed_s = j.at("elapsed_s").get<double>();
    const auto & b = j.at("buckets");
    r.buckets = {b.at("distance").get<std::string>(), b.at("speed").get<std::string>(),
                 b.at("angle").get<double>()};
    const auto cat = j.at("category").get<std::string>();
    if (cat.size() != 3) {
      throw std::invalid_argument("category must have three letters");
    }
    r.category = {cat[0], cat[1], cat[2]};
    return r;
  } catch (const nlohmann::json::exception & e) {
    throw std::invalid_argument(std::string("malformed record: ") + e.what());
  }
}

void write_records_jsonl(std::ostream & out, const std::vector<OutcomeRecord> & records)
{
  for (const auto & r : records) {
    out << to_json(r).dump() << '\n';
  }
}

std::vector<OutcomeRecord> read_records_jsonl(std::istream & in)
{
  std::vector<OutcomeRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception & e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace icsfuzz
