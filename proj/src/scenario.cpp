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

#include "icsfuzz/scenario.hpp"

#include "icsfuzz/simulator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace icsfuzz
{

std::string_view to_string(ScenarioKind kind)
{
  switch (kind) {
    case ScenarioKind::FLB:
      return "FLB";
    case ScenarioKind::FLV:
      return "FLV";
    case ScenarioKind::LC:
      return "LC";
    case ScenarioKind::InC:
      return "InC";
    case ScenarioKind::PSF:
      return "PSF";
    case ScenarioKind::PCF:
      return "PCF";
  }
  return "?";
}

std::optional<ScenarioKind> parse_kind(std::string_view name)
{
  for (const auto kind : kAllKinds) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  return std::nullopt;
}

OrientedBox ActorSpec::box() const
{
  return OrientedBox(position, 0.5 * footprint.length, 0.5 * footprint.width, yaw);
}

ControlParameters ControlParameters::from_angle(double distance, double speed, double angle)
{
  const double heading = angle * std::numbers::pi / 2.0;
  ControlParameters p;
  p.distance = distance;
  p.speed = speed;
  p.angle = angle;
  p.theta_long = std::cos(heading);
  p.theta_lat = std::sin(heading);
  return p;
}

ControlParameters ControlParameters::from_components(
  double distance, double speed, double theta_long, double theta_lat)
{
  ControlParameters p;
  p.distance = distance;
  p.speed = speed;
  p.theta_long = theta_long;
  p.theta_lat = theta_lat;
  p.angle = std::atan2(theta_lat, theta_long) / (std::numbers::pi / 2.0);
  return p;
}

double ControlParameters::heading_offset() const { return angle * std::numbers::pi / 2.0; }

void validate(const ControlParameters & p)
{
  auto fail = [](const std::string & what) { throw std::invalid_argument(what); };
  if (!std::isfinite(p.distance) || p.distance < kMinDistance || p.distance > kMaxDistance) {
    std::ostringstream os;
    os << "collision distance " << p.distance << " outside range 2..7";
    fail(os.str());
  }
  if (!std::isfinite(p.speed) || !(p.speed > 0.0) || p.speed > kMaxSpeed) {
    std::ostringstream os;
    os << "collision speed " << p.speed << " outside range (0, 50]";
    fail(os.str());
  }
  if (!std::isfinite(p.angle) || std::abs(p.angle) > 1.0) {
    std::ostringstream os;
    os << "collision angle " << p.angle << " outside range -1..1";
    fail(os.str());
  }
  if (!std::isfinite(p.theta_long) || !std::isfinite(p.theta_lat) || !(p.theta_long > 0.0)) {
    fail("collision direction needs a positive longitudinal component");
  }
}

namespace
{

ActorSpec make_ev(const ScenarioDefaults & d)
{
  ActorSpec ev;
  ev.role = ActorRole::EV;
  ev.footprint = d.car;
  ev.position = {0.0, 0.0};
  ev.yaw = 0.0;
  ev.behavior = Cruise{d.ev_speed};
  return ev;
}

ActorSpec make_npc(Footprint footprint, Point2 position, double yaw, Behavior behavior)
{
  ActorSpec npc;
  npc.role = ActorRole::NPC;
  npc.footprint = footprint;
  npc.position = position;
  npc.yaw = yaw;
  npc.behavior = behavior;
  return npc;
}

}  // namespace

SeedScenario make_seed(ScenarioKind kind, const ScenarioDefaults & d)
{
  constexpr double quarter_turn = std::numbers::pi / 2.0;
  const double gap = d.initial_gap;
  // time for the EV center to cover the initial gap; crossing NPCs are
  // placed so they reach the EV lane at the same instant
  const double arrival = gap / d.ev_speed;

  SeedScenario seed;
  seed.spec.kind = kind;
  seed.spec.lane_width = d.lane_width;
  seed.spec.initial_gap = gap;
  seed.spec.ev = make_ev(d);
  seed.params = ControlParameters::from_angle(kMinDistance, d.ev_speed, 0.0);

  switch (kind) {
    case ScenarioKind::FLB:
      seed.spec.npc = make_npc(d.bicycle, {gap, 0.0}, 0.0, Cruise{d.bicycle_speed});
      break;
    case ScenarioKind::FLV:
      seed.spec.npc = make_npc(d.car, {gap, 0.0}, 0.0, Cruise{d.lead_vehicle_speed});
      break;
    case ScenarioKind::LC:
      // NPC in the left neighbour lane; the EV cuts over into it
      seed.spec.npc = make_npc(d.car, {gap, d.lane_width}, 0.0, Cruise{d.lead_vehicle_speed});
      seed.params = ControlParameters::from_angle(5.0, d.ev_speed, 0.3);
      break;
    case ScenarioKind::InC:
      seed.spec.npc = make_npc(
        d.car, {gap, -d.crossing_vehicle_speed * arrival}, quarter_turn,
        Cruise{d.crossing_vehicle_speed});
      break;
    case ScenarioKind::PSF:
      seed.spec.npc = make_npc(d.pedestrian, {gap, 0.0}, 0.0, Static{});
      break;
    case ScenarioKind::PCF:
      seed.spec.npc = make_npc(
        d.pedestrian, {gap, -d.pedestrian_speed * arrival}, quarter_turn,
        Crossing{d.pedestrian_speed, quarter_turn});
      break;
  }
  return seed;
}

bool validate_seed(const ScenarioSpec & spec, const ControlParameters & params)
{
  return validate_seed(spec, params, SimConfig{});
}

bool validate_seed(
  const ScenarioSpec & spec, const ControlParameters & params, const SimConfig & cfg)
{
  return simulate(spec, params, cfg).first_contact.has_value();
}

}  // namespace icsfuzz
