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
#ifndef ICSFUZZ__DETECTOR_HPP_
#define ICSFUZZ__DETECTOR_HPP_

#include "icsfuzz/simulator.hpp"

#include <cstddef>
#include <optional>

namespace icsfuzz
{

/// Behavioral stand-in for an imperfect built-in collision detector.
///
/// The detector only inspects every `sample_period`-th frame (fast contacts
/// can fall between inspections) and only reports a contact whose penetration
/// reaches `min_penetration` while the actors close in at `min_impact_speed`
/// or faster (shallow grazes go unreported). A zero `min_impact_speed`
/// disables the speed gate.
struct DefectModel
{
  int sample_period{5};
  double min_penetration{0.05};
  double min_impact_speed{0.5};

  /// Sees every overlapping frame.
  static DefectModel perfect() { return {1, 0.0, 0.0}; }
};

/// Throws std::invalid_argument on k < 1 or negative thresholds.
void validate(const DefectModel & defect);

/// Index of the first frame with intersection area above kAreaEpsilon.
std::optional<std::size_t> ground_truth(const Trace & trace);

/// Verdict of the built-in detector. Only frames with geometric contact are
/// candidates, so the detector can miss contacts but never invent one.
bool builtin_cd(const Trace & trace, const DefectModel & defect);

}  // namespace icsfuzz

#endif  // ICSFUZZ__DETECTOR_HPP_
