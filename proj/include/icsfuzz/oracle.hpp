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
#ifndef ICSFUZZ__ORACLE_HPP_
#define ICSFUZZ__ORACLE_HPP_

#include "icsfuzz/detector.hpp"
#include "icsfuzz/simulator.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace icsfuzz
{

enum class ScenarioType {
  IC,  // ground-truth contact the built-in detector missed
  DC,  // contact reported by the built-in detector
  NC,  // no contact, no report
  FP,  // report without contact
};

std::string_view to_string(ScenarioType type);
std::optional<ScenarioType> parse_scenario_type(std::string_view name);

struct OracleConfig
{
  /// IoU threshold in [0, 1). Zero means "any intersection area above kAreaEpsilon".
  double t_bbox{0.0};
};

void validate(const OracleConfig & cfg);

/// The four-cell truth table over (bounding boxes overlap, detector fired).
ScenarioType classify(bool overlap_condition, bool detector_fired);

/// Largest per-frame IoU between the two actors.
double max_iou(const Trace & trace);

/// Overlap condition of the oracle at the given threshold.
bool overlap_condition(const Trace & trace, const OracleConfig & cfg);

ScenarioType check_ic(const Trace & trace, const DefectModel & defect, const OracleConfig & cfg);

struct LabeledTrace
{
  Trace trace;
  DefectModel defect;
  bool ics_label;  // ground truth present and the built-in detector silent
};

/// Labels a trace against the exact ground truth.
LabeledTrace label_trace(Trace trace, const DefectModel & defect);

struct ThresholdMetrics
{
  double threshold;
  int true_positives;
  int false_positives;
  int false_negatives;
  std::optional<double> precision;  // absent without any IC verdict
  std::optional<double> recall;     // absent without any positive label
};

/// Precision and recall of the IC verdict against the labels at each threshold.
/// Throws std::invalid_argument on an empty trace set or threshold list.
std::vector<ThresholdMetrics> recall_sweep(
  const std::vector<LabeledTrace> & labeled, const std::vector<double> & thresholds);

}  // namespace icsfuzz

#endif  // ICSFUZZ__ORACLE_HPP_
