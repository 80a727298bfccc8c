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

#include "icsfuzz/simulator.hpp"

#include <json.hpp>

#include <cmath>

namespace icsfuzz
{

void validate(const SimConfig & cfg)
{
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw std::invalid_argument("sim.dt must be positive");
  }
  if (!std::isfinite(cfg.horizon) || cfg.horizon < 10.0 * cfg.dt) {
    throw std::invalid_argument("sim.horizon must be at least 10 * dt");
  }
  if (cfg.settle_frames < 0) {
    throw std::invalid_argument("sim.settle_frames must be non-negative");
  }
}

namespace
{

Point2 heading_vector(double yaw) { return {std::cos(yaw), std::sin(yaw)}; }

Point2 npc_velocity(const ActorSpec & npc)
{
  return std::visit(
    [&](const auto & b) -> Point2 {
      using B = std::decay_t<decltype(b)>;
      if constexpr (std::is_same_v<B, Cruise>) {
        return b.speed * heading_vector(npc.yaw);
      } else if constexpr (std::is_same_v<B, Crossing>) {
        return b.speed * heading_vector(b.direction);
      } else {
        return {0.0, 0.0};
      }
    },
    npc.behavior);
}

double cruise_speed(const ActorSpec & ev)
{
  if (const auto * c = std::get_if<Cruise>(&ev.behavior)) {
    return c->speed;
  }
  throw std::invalid_argument("EV behavior must be cruise");
}

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

Trace simulate(const ScenarioSpec & spec, const ControlParameters & params, const SimConfig & cfg)
{
  validate(cfg);
  validate(params);

  const OrientedBox ev0 = spec.ev.box();
  const OrientedBox npc0 = spec.npc.box();
  if (overlaps(ev0, npc0)) {
    throw std::invalid_argument("actors overlap at t = 0");
  }

  Point2 ev_pos = spec.ev.position;
  double ev_yaw = spec.ev.yaw;
  double ev_speed = cruise_speed(spec.ev);
  Point2 npc_pos = spec.npc.position;
  const Point2 npc_vel = npc_velocity(spec.npc);

  const auto last_index = static_cast<std::size_t>(std::floor(cfg.horizon / cfg.dt + 1e-9));
  const auto settle = static_cast<std::size_t>(cfg.settle_frames);
  const double reach = std::hypot(ev0.half_length(), ev0.half_width()) +
                       std::hypot(npc0.half_length(), npc0.half_width());

  Trace trace;
  trace.frames.reserve(std::min<std::size_t>(last_index + 1, 4096));
  bool triggered = false;

  for (std::size_t i = 0; i <= last_index; ++i) {
    OrientedBox ev_box = ev0.moved_to(ev_pos).rotated_to(ev_yaw);
    const OrientedBox npc_box = npc0.moved_to(npc_pos);

    // the behavior switch is a pre-impact maneuver; it is disarmed by contact
    if (!triggered && !trace.first_contact && center_distance(ev_box, npc_box) <= params.distance) {
      triggered = true;
      trace.trigger_frame = i;
      ev_speed = params.speed;
      ev_yaw = spec.ev.yaw + params.heading_offset();
      ev_box = ev_box.rotated_to(ev_yaw);
    }

    const Point2 ev_vel = ev_speed * heading_vector(ev_yaw);
    const Point2 line = npc_pos - ev_pos;
    const double dist = norm(line);
    const double closing = dist > 0.0 ? dot(ev_vel - npc_vel, (1.0 / dist) * line) : 0.0;

    // a corner sliver can pass the separating-axis test with no measurable area
    const bool contact = overlaps(ev_box, npc_box) && intersection_area(ev_box, npc_box) > kAreaEpsilon;
    trace.frames.push_back(Frame{
      static_cast<double>(i) * cfg.dt, ev_box, npc_box, contact,
      penetration_depth(ev_box, npc_box), closing, triggered});

    if (contact && !trace.first_contact) {
      trace.first_contact = i;
    }
    if (trace.first_contact && i >= *trace.first_contact + settle) {
      break;
    }
    // Velocities stay constant until the trigger fires, and forever after it.
    // Once the centers separate beyond both the trigger distance and the sum of
    // circumradii, neither a trigger nor a contact can happen any more.
    if (!trace.first_contact && closing < 0.0 && dist > reach && (triggered || dist > params.distance)) {
      break;
    }

    ev_pos = ev_pos + cfg.dt * ev_vel;
    npc_pos = npc_pos + cfg.dt * npc_vel;
    if (!finite(ev_pos) || !finite(npc_pos)) {
      throw SimulationError("non-finite actor state");
    }
  }
  return trace;
}

void write_trace_jsonl(std::ostream & out, const Trace & trace)
{
  auto box_json = [](const OrientedBox & b) {
    return nlohmann::ordered_json{{"x", b.center().x}, {"y", b.center().y}, {"yaw", b.yaw()}};
  };
  for (std::size_t i = 0; i < trace.frames.size(); ++i) {
    const Frame & f = trace.frames[i];
    nlohmann::ordered_json line{
      {"frame", i},
      {"t", f.t},
      {"ev", box_json(f.ev_box)},
      {"npc", box_json(f.npc_box)},
      {"gt_overlap", f.gt_overlap},
      {"penetration", f.penetration},
      {"closing_speed", f.closing_speed},
      {"triggered", f.triggered}};
    out << line.dump() << '\n';
  }
}

}  // namespace icsfuzz
