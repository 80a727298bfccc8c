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

#ifndef ICSFUZZ__SIMULATOR_HPP_
#define ICSFUZZ__SIMULATOR_HPP_

#include "icsfuzz/geometry.hpp"
#include "icsfuzz/scenario.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace icsfuzz
{

struct SimConfig
{
  double dt{0.01};
  double horizon{15.0};
  int settle_frames{20};  // frames kept after the first contact
};

/// Throws std::invalid_argument when dt <= 0, horizon < 10 dt or settle_frames < 0.
void validate(const SimConfig & cfg);

struct Frame
{
  double t;
  OrientedBox ev_box;
  OrientedBox npc_box;
  bool gt_overlap;  // boxes overlap with intersection area above kAreaEpsilon
  double penetration;
  double closing_speed;  // relative velocity along the EV->NPC center line, > 0 approaching
  bool triggered;
};

struct Trace
{
  std::vector<Frame> frames;
  std::optional<std::size_t> first_contact;
  std::optional<std::size_t> trigger_frame;

  /// Simulated seconds covered by the trace.
  double duration() const { return frames.empty() ? 0.0 : frames.back().t; }
};

class SimulationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Fixed-step forward-Euler rollout. The EV cruises until the center distance
/// drops to params.distance, then switches to params.speed along its original
/// heading plus params.heading_offset(). The switch is only armed until the
/// first contact. Stops settle_frames after the first
/// contact or at the horizon, whichever comes first.
Trace simulate(const ScenarioSpec & spec, const ControlParameters & params, const SimConfig & cfg);

/// One JSON object per frame.
void write_trace_jsonl(std::ostream & out, const Trace & trace);

}  // namespace icsfuzz

#endif  // ICSFUZZ__SIMULATOR_HPP_
