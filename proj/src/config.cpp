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


#include "icsfuzz/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>

namespace icsfuzz
{

namespace
{

using nlohmann::json;

[[noreturn]] void fail(const std::string & path, const std::string & what)
{
  throw ConfigError(path.empty() ? what : path + ": " + what);
}

std::string join(const std::string & path, const std::string & key)
{
  return path.empty() ? key : path + "." + key;
}

// Walks one JSON object, rejecting keys nobody asked for.
class ObjectReader
{
public:
  ObjectReader(const json & j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object()) {
      fail(path_, "expected an object");
    }
  }

  // Call once every known key has been looked up.
  void done() const
  {
    for (const auto & item : j_.items()) {
      if (!seen_.count(item.key())) {
        fail(join(path_, item.key()), "unknown field");
      }
    }
  }

  const json * find(const std::string & key)
  {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string path(const std::string & key) const { return join(path_, key); }

  void number(const std::string & key, double & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_number()) {
        fail(path(key), "expected a number");
      }
      out = v->get<double>();
      if (!std::isfinite(out)) {
        fail(path(key), "must be finite");
      }
    }
  }

  template <typename Int>
  void integer(const std::string & key, Int & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_number_integer()) {
        fail(path(key), "expected an integer");
      }
      if constexpr (std::is_unsigned_v<Int>) {
        if (v->is_number_unsigned()) {
          out = v->get<Int>();
          return;
        }
        if (v->get<std::int64_t>() < 0) {
          fail(path(key), "must be >= 0");
        }
      }
      out = v->get<Int>();
    }
  }

  void boolean(const std::string & key, bool & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_boolean()) {
        fail(path(key), "expected true or false");
      }
      out = v->get<bool>();
    }
  }

  const json * string(const std::string & key)
  {
    const json * v = find(key);
    if (v && !v->is_string()) {
      fail(path(key), "expected a string");
    }
    return v;
  }

  bool numbers(const std::string & key, std::vector<double> & out)
  {
    const json * v = find(key);
    if (!v) {
      return false;
    }
    if (!v->is_array()) {
      fail(path(key), "expected an array of numbers");
    }
    out.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) {
        fail(path(key) + "[" + std::to_string(i) + "]", "expected a number");
      }
      out.push_back((*v)[i].get<double>());
    }
    return true;
  }

private:
  const json & j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void checked(const std::string & path, Fn && fn)
{
  try {
    fn();
  } catch (const std::invalid_argument & e) {
    fail(path, e.what());
  }
}

void read_footprint(ObjectReader & parent, const std::string & key, Footprint & fp)
{
  if (const json * v = parent.find(key)) {
    ObjectReader r(*v, parent.path(key));
    r.number("length", fp.length);
    r.number("width", fp.width);
    if (!(fp.length > 0.0) || !(fp.width > 0.0)) {
      fail(parent.path(key), "length and width must be positive");
    }
    r.done();
  }
}

void read_scenario(const json & j, ScenarioDefaults & d)
{
  ObjectReader r(j, "scenario");
  read_footprint(r, "car", d.car);
  read_footprint(r, "bicycle", d.bicycle);
  read_footprint(r, "pedestrian", d.pedestrian);
  const std::array<std::pair<const char *, double *>, 7> positive{{
    {"lane_width", &d.lane_width},
    {"initial_gap", &d.initial_gap},
    {"ev_speed", &d.ev_speed},
    {"lead_vehicle_speed", &d.lead_vehicle_speed},
    {"bicycle_speed", &d.bicycle_speed},
    {"crossing_vehicle_speed", &d.crossing_vehicle_speed},
    {"pedestrian_speed", &d.pedestrian_speed},
  }};
  for (const auto & [key, field] : positive) {
    r.number(key, *field);
    if (!(*field > 0.0)) {
      fail(r.path(key), "must be positive");
    }
  }
  r.done();
}

AngleMode parse_angle_mode(const std::string & s, const std::string & path)
{
  if (s == "scalar") {
    return AngleMode::Scalar;
  }
  if (s == "per_axis") {
    return AngleMode::PerAxis;
  }
  fail(path, "expected \"scalar\" or \"per_axis\", got \"" + s + "\"");
}

void read_plan(const json & j, const std::string & path, SearchPlan & plan)
{
  ObjectReader r(j, path);
  const bool had_distance_step = r.find("distance_step") != nullptr;
  const bool had_speed_step = r.find("speed_step") != nullptr;
  r.number("distance_step", plan.distance_step);
  r.number("speed_step", plan.speed_step);
  r.number("angle_step_long", plan.angle_step_long);
  r.number("angle_step_lat", plan.angle_step_lat);
  r.integer("k_nc", plan.k_nc);
  r.boolean("prune_untriggered", plan.prune_untriggered);
  if (const json * mode = r.string("angle_mode")) {
    plan.angle_mode = parse_angle_mode(mode->get<std::string>(), r.path("angle_mode"));
  }
  // a new step without an explicit schedule regenerates the full-range schedule
  if (!r.numbers("distance_schedule", plan.distance_schedule) && had_distance_step) {
    checked(r.path("distance_step"), [&] {
      plan.distance_schedule = SearchPlan::schedule(kMinDistance, kMaxDistance, plan.distance_step);
    });
  }
  if (!r.numbers("speed_schedule", plan.speed_schedule) && had_speed_step) {
    checked(r.path("speed_step"), [&] {
      plan.speed_schedule = SearchPlan::schedule(plan.speed_step, kMaxSpeed, plan.speed_step);
    });
  }
  r.done();
}

ScenarioKind kind_or_fail(const json & v, const std::string & path)
{
  if (!v.is_string()) {
    fail(path, "expected a scenario kind string");
  }
  const auto kind = parse_kind(v.get<std::string>());
  if (!kind) {
    fail(path, "unknown scenario kind \"" + v.get<std::string>() + "\" (FLB, FLV, LC, InC, PSF, PCF)");
  }
  return *kind;
}

int line_of(const std::string & text, std::size_t byte)
{
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

std::string plan_mode_name(AngleMode m) { return m == AngleMode::Scalar ? "scalar" : "per_axis"; }

}  // namespace

CampaignConfig config_from_json(const json & j)
{
  CampaignConfig config;
  {
    ObjectReader r(j, "");
    if (const json * kinds = r.find("kinds")) {
      if (!kinds->is_array()) {
        fail("kinds", "expected an array of scenario kinds");
      }
      config.kinds.clear();
      for (std::size_t i = 0; i < kinds->size(); ++i) {
        const auto kind = kind_or_fail((*kinds)[i], "kinds[" + std::to_string(i) + "]");
        if (std::find(config.kinds.begin(), config.kinds.end(), kind) != config.kinds.end()) {
          fail("kinds[" + std::to_string(i) + "]", "duplicate scenario kind");
        }
        config.kinds.push_back(kind);
      }
      if (config.kinds.empty()) {
        fail("kinds", "must not be empty");
      }
    }
    if (const json * m = r.string("mutator")) {
      const auto mutator = parse_mutator(m->get<std::string>());
      if (!mutator) {
        fail("mutator", "expected \"guided\", \"random\" or \"nc_start\"");
      }
      config.mutator = *mutator;
    }
    r.integer("budget", config.budget);
    if (config.budget < 0) {
      fail("budget", "must be >= 0");
    }
    r.integer("rng_seed", config.rng_seed);
    r.integer("workers", config.workers);

    if (const json * s = r.find("scenario")) {
      read_scenario(*s, config.scenario);
    }
    if (const json * d = r.find("defect")) {
      ObjectReader dr(*d, "defect");
      dr.integer("sample_period", config.defect.sample_period);
      dr.number("min_penetration", config.defect.min_penetration);
      dr.number("min_impact_speed", config.defect.min_impact_speed);
      dr.done();
      checked("defect", [&] { validate(config.defect); });
    }
    if (const json * o = r.find("oracle")) {
      ObjectReader orr(*o, "oracle");
      orr.number("t_bbox", config.oracle.t_bbox);
      orr.done();
      checked("oracle", [&] { validate(config.oracle); });
    }
    if (const json * s = r.find("sim")) {
      ObjectReader sr(*s, "sim");
      sr.number("dt", config.sim.dt);
      sr.number("horizon", config.sim.horizon);
      sr.integer("settle_frames", config.sim.settle_frames);
      sr.done();
      checked("sim", [&] { validate(config.sim); });
    }
    if (const json * plans = r.find("plans")) {
      ObjectReader pr(*plans, "plans");
      // "*" applies to every kind before the per-kind entries
      const json * common = pr.find("*");
      for (const auto kind : kAllKinds) {
        const std::string name(to_string(kind));
        const json * own = pr.find(name);
        if (!common && !own) {
          continue;
        }
        SearchPlan plan = SearchPlan::defaults_for(kind);
        if (common) {
          read_plan(*common, "plans.*", plan);
        }
        if (own) {
          read_plan(*own, "plans." + name, plan);
        }
        config.plans[kind] = plan;
      }
      pr.done();
    }
    r.done();
  }

  for (const auto & [kind, plan] : config.plans) {
    checked("plans." + std::string(to_string(kind)), [&] { validate(plan); });
  }
  for (const auto kind : config.kinds) {
    const SeedScenario seed = make_seed(kind, config.scenario);
    if (overlaps(seed.spec.ev.box(), seed.spec.npc.box())) {
      fail("scenario", std::string(to_string(kind)) + " seed actors overlap at t = 0");
    }
  }
  return config;
}

CampaignConfig parse_config(const std::string & text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error & e) {
    throw ConfigError(
      "line " + std::to_string(line_of(text, e.byte > 0 ? e.byte - 1 : 0)) + ": " + e.what());
  }
  return config_from_json(j);
}

nlohmann::ordered_json config_to_json(const CampaignConfig & config)
{
  nlohmann::ordered_json j;
  auto & kinds = j["kinds"] = nlohmann::ordered_json::array();
  for (const auto kind : config.kinds) {
    kinds.push_back(std::string(to_string(kind)));
  }
  j["mutator"] = std::string(to_string(config.mutator));
  j["budget"] = config.budget;
  j["rng_seed"] = config.rng_seed;
  j["workers"] = config.workers;

  const ScenarioDefaults & d = config.scenario;
  auto fp = [](const Footprint & f) {
    return nlohmann::ordered_json{{"length", f.length}, {"width", f.width}};
  };
  j["scenario"] = {
    {"car", fp(d.car)},
    {"bicycle", fp(d.bicycle)},
    {"pedestrian", fp(d.pedestrian)},
    {"lane_width", d.lane_width},
    {"initial_gap", d.initial_gap},
    {"ev_speed", d.ev_speed},
    {"lead_vehicle_speed", d.lead_vehicle_speed},
    {"bicycle_speed", d.bicycle_speed},
    {"crossing_vehicle_speed", d.crossing_vehicle_speed},
    {"pedestrian_speed", d.pedestrian_speed}};
  j["defect"] = {
    {"sample_period", config.defect.sample_period},
    {"min_penetration", config.defect.min_penetration},
    {"min_impact_speed", config.defect.min_impact_speed}};
  j["oracle"] = {{"t_bbox", config.oracle.t_bbox}};
  j["sim"] = {
    {"dt", config.sim.dt}, {"horizon", config.sim.horizon}, {"settle_frames", config.sim.settle_frames}};

  auto & plans = j["plans"] = nlohmann::ordered_json::object();
  for (const auto kind : config.kinds) {
    const SearchPlan p = config.plan_for(kind);
    plans[std::string(to_string(kind))] = {
      {"distance_schedule", p.distance_schedule},
      {"speed_schedule", p.speed_schedule},
      {"distance_step", p.distance_step},
      {"speed_step", p.speed_step},
      {"angle_step_long", p.angle_step_long},
      {"angle_step_lat", p.angle_step_lat},
      {"angle_mode", plan_mode_name(p.angle_mode)},
      {"k_nc", p.k_nc},
      {"prune_untriggered", p.prune_untriggered}};
  }
  return j;
}

std::string sha256_hex(const std::string & bytes)
{
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof(buf), "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

nlohmann::ordered_json make_manifest(
  const std::string & config_text, const CampaignConfig & config, const CampaignResult & result)
{
  std::map<ScenarioType, int> totals{
    {ScenarioType::IC, 0}, {ScenarioType::DC, 0}, {ScenarioType::NC, 0}, {ScenarioType::FP, 0}};
  for (const auto & r : result.records) {
    ++totals[r.type];
  }
  nlohmann::ordered_json m;
  m["config_sha256"] = sha256_hex(config_text);
  m["mutator"] = std::string(to_string(config.mutator));
  m["budget"] = result.budget;
  m["budget_used"] = result.records.size();
  auto & t = m["totals"] = nlohmann::ordered_json::object();
  for (const auto & [type, n] : totals) {
    t[std::string(to_string(type))] = n;
  }
  auto & seeds = m["seed_valid"] = nlohmann::ordered_json::object();
  for (const auto kind : config.kinds) {
    const auto it = result.seed_valid.find(kind);
    seeds[std::string(to_string(kind))] = it != result.seed_valid.end() && it->second;
  }
  m["config"] = config_to_json(config);
  return m;
}

}  // namespace icsfuzz
