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
#include "icsfuzz/detector.hpp"

#include <cmath>
#include <stdexcept>

namespace icsfuzz
{

void validate(const DefectModel & defect)
{
  if (defect.sample_period < 1) {
    throw std::invalid_argument("defect.sample_period must be >= 1");
  }
  if (!(defect.min_penetration >= 0.0) || !std::isfinite(defect.min_penetration)) {
    throw std::invalid_argument("defect.min_penetration must be >= 0");
  }
  if (!(defect.min_impact_speed >= 0.0) || !std::isfinite(defect.min_impact_speed)) {
    throw std::invalid_argument("defect.min_impact_speed must be >= 0");
  }
}

std::optional<std::size_t> ground_truth(const Trace & trace)
{
  for (std::size_t i = 0; i < trace.frames.size(); ++i) {
    const Frame & f = trace.frames[i];
    if (intersection_area(f.ev_box, f.npc_box) > kAreaEpsilon) {
      return i;
    }
  }
  return std::nullopt;
}

bool builtin_cd(const Trace & trace, const DefectModel & defect)
{
  const auto k = static_cast<std::size_t>(defect.sample_period);
  for (std::size_t i = 0; i < trace.frames.size(); i += k) {
    const Frame & f = trace.frames[i];
    if (!f.gt_overlap || f.penetration < defect.min_penetration) {
      continue;
    }
    if (defect.min_impact_speed > 0.0 && f.closing_speed < defect.min_impact_speed) {
      continue;
    }
    return true;
  }
  return false;
}

}  // namespace icsfuzz
