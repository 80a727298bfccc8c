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
#include "icsfuzz/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icsfuzz
{

std::string_view to_string(ScenarioType type)
{
  switch (type) {
    case ScenarioType::IC:
      return "IC";
    case ScenarioType::DC:
      return "DC";
    case ScenarioType::NC:
      return "NC";
    case ScenarioType::FP:
      return "FP";
  }
  return "?";
}

std::optional<ScenarioType> parse_scenario_type(std::string_view name)
{
  for (auto t : {ScenarioType::IC, ScenarioType::DC, ScenarioType::NC, ScenarioType::FP}) {
    if (to_string(t) == name) {
      return t;
    }
  }
  return std::nullopt;
}

void validate(const OracleConfig & cfg)
{
  if (!std::isfinite(cfg.t_bbox) || cfg.t_bbox < 0.0 || cfg.t_bbox >= 1.0) {
    throw std::invalid_argument("oracle.t_bbox must lie in [0, 1)");
  }
}

ScenarioType classify(bool overlap, bool fired)
{
  if (overlap && !fired) {
    return ScenarioType::IC;
  }
  if (!overlap && !fired) {
    return ScenarioType::NC;
  }
  return overlap ? ScenarioType::DC : ScenarioType::FP;
}

double max_iou(const Trace & trace)
{
  double best = 0.0;
  for (const Frame & f : trace.frames) {
    if (f.gt_overlap) {
      best = std::max(best, iou(f.ev_box, f.npc_box));
    }
  }
  return best;
}

bool overlap_condition(const Trace & trace, const OracleConfig & cfg)
{
  if (cfg.t_bbox <= 0.0) {
    return ground_truth(trace).has_value();
  }
  return max_iou(trace) >= cfg.t_bbox;
}

ScenarioType check_ic(const Trace & trace, const DefectModel & defect, const OracleConfig & cfg)
{
  return classify(overlap_condition(trace, cfg), builtin_cd(trace, defect));
}

LabeledTrace label_trace(Trace trace, const DefectModel & defect)
{
  const bool label = ground_truth(trace).has_value() && !builtin_cd(trace, defect);
  return LabeledTrace{std::move(trace), defect, label};
}

std::vector<ThresholdMetrics> recall_sweep(
  const std::vector<LabeledTrace> & labeled, const std::vector<double> & thresholds)
{
  if (labeled.empty()) {
    throw std::invalid_argument("recall_sweep: no labeled traces");
  }
  if (thresholds.empty()) {
    throw std::invalid_argument("recall_sweep: no thresholds");
  }
  std::vector<ThresholdMetrics> out;
  out.reserve(thresholds.size());
  for (const double t : thresholds) {
    const OracleConfig cfg{t};
    validate(cfg);
    ThresholdMetrics m{t, 0, 0, 0, std::nullopt, std::nullopt};
    for (const auto & item : labeled) {
      const bool flagged = check_ic(item.trace, item.defect, cfg) == ScenarioType::IC;
      if (flagged && item.ics_label) {
        ++m.true_positives;
      } else if (flagged) {
        ++m.false_positives;
      } else if (item.ics_label) {
        ++m.false_negatives;
      }
    }
    if (m.true_positives + m.false_positives > 0) {
      m.precision = static_cast<double>(m.true_positives) / (m.true_positives + m.false_positives);
    }
    if (m.true_positives + m.false_negatives > 0) {
      m.recall = static_cast<double>(m.true_positives) / (m.true_positives + m.false_negatives);
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace icsfuzz
