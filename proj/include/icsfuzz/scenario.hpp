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

#ifndef ICSFUZZ__SCENARIO_HPP_
#define ICSFUZZ__SCENARIO_HPP_

#include "icsfuzz/geometry.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace icsfuzz
{

struct SimConfig;

enum class ScenarioKind {
  FLB,  // follow leading bicycle
  FLV,  // follow leading vehicle
  LC,   // lane change into an adjacent-lane vehicle
  InC,  // broadside at a perpendicular intersection
  PSF,  // pedestrian standing in front
  PCF,  // pedestrian crossing in front
};

inline constexpr std::array<ScenarioKind, 6> kAllKinds{
  ScenarioKind::FLB, ScenarioKind::FLV, ScenarioKind::LC,
  ScenarioKind::InC, ScenarioKind::PSF, ScenarioKind::PCF};

std::string_view to_string(ScenarioKind kind);
/// Accepts the abbreviations above (case sensitive); nullopt otherwise.
std::optional<ScenarioKind> parse_kind(std::string_view name);

enum class ActorRole { EV, NPC };

struct Cruise
{
  double speed;  // m/s along the actor's yaw
};

struct Crossing
{
  double speed;      // m/s
  double direction;  // radians, world frame
};

struct Static
{
};

using Behavior = std::variant<Cruise, Crossing, Static>;

struct Footprint
{
  double length;
  double width;
};

struct ActorSpec
{
  ActorRole role{ActorRole::NPC};
  Footprint footprint{4.6, 1.9};
  Point2 position;
  double yaw{0.0};
  Behavior behavior{Static{}};

  OrientedBox box() const;
};

struct ScenarioSpec
{
  ScenarioKind kind{ScenarioKind::FLV};
  ActorSpec ev;
  ActorSpec npc;
  double lane_width{3.5};
  double initial_gap{30.0};
};

inline constexpr double kMinDistance = 2.0;
inline constexpr double kMaxDistance = 7.0;
inline constexpr double kMaxSpeed = 50.0;

/// The mutated behavior triple. `angle` in [-1, 1] maps to a heading offset of
/// angle * 90 deg; (theta_long, theta_lat) is the same direction as a vector.
struct ControlParameters
{
  double distance{kMinDistance};
  double speed{20.0};
  double theta_long{1.0};
  double theta_lat{0.0};
  double angle{0.0};

  /// Scalar form: the direction vector is derived from the angle.
  static ControlParameters from_angle(double distance, double speed, double angle);
  /// Per-axis form: the angle is derived from the direction vector.
  static ControlParameters from_components(
    double distance, double speed, double theta_long, double theta_lat);

  double heading_offset() const;

  friend bool operator==(const ControlParameters &, const ControlParameters &) = default;
};

/// Throws std::invalid_argument naming the violated range.
void validate(const ControlParameters & params);

/// Overridable stand-in dimensions and speeds used to build the seed scenarios.
struct ScenarioDefaults
{
  Footprint car{4.6, 1.9};
  Footprint bicycle{1.8, 0.6};
  Footprint pedestrian{0.5, 0.5};
  double lane_width{3.5};
  double initial_gap{30.0};
  double ev_speed{20.0};
  double lead_vehicle_speed{10.0};
  double bicycle_speed{5.0};
  double crossing_vehicle_speed{10.0};
  double pedestrian_speed{1.4};
};

struct SeedScenario
{
  ScenarioSpec spec;
  ControlParameters params;
};

SeedScenario make_seed(ScenarioKind kind, const ScenarioDefaults & defaults = {});

/// True iff simulating the pair produces ground-truth contact within the horizon.
bool validate_seed(const ScenarioSpec & spec, const ControlParameters & params);
bool validate_seed(
  const ScenarioSpec & spec, const ControlParameters & params, const SimConfig & cfg);

}  // namespace icsfuzz

#endif  // ICSFUZZ__SCENARIO_HPP_
