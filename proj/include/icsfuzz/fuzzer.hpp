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
#ifndef ICSFUZZ__FUZZER_HPP_
#define ICSFUZZ__FUZZER_HPP_

#include "icsfuzz/detector.hpp"
#include "icsfuzz/oracle.hpp"
#include "icsfuzz/record.hpp"
#include "icsfuzz/scenario.hpp"
#include "icsfuzz/simulator.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace icsfuzz
{

enum class AngleMode {
  Scalar,   // step the normalized angle by angle_step_lat
  PerAxis,  // step the (long, lat) direction components independently
};

enum class MutationAxis { Distance, Speed, AnglePlus, AngleMinus, LongPlus, LongMinus };

/// Directions and step sizes of one testing round.
struct SearchPlan
{
  std::vector<double> distance_schedule;  // ascending, within [2, 7]
  std::vector<double> speed_schedule;     // ascending, within (0, 50]
  double distance_step{1.0};
  double speed_step{1.0};
  double angle_step_long{0.04};
  double angle_step_lat{0.03};
  AngleMode angle_mode{AngleMode::Scalar};
  int k_nc{3};  // consecutive NC verdicts that end an angle branch
  /// Skip the rest of a distance cell once the EV never reached the trigger
  /// distance: speed and angle cannot change such an execution.
  bool prune_untriggered{true};

  /// Per-kind step sizes with full-range schedules.
  static SearchPlan defaults_for(ScenarioKind kind);
  /// lo, lo + step, ... up to hi (inclusive within 1e-9).
  static std::vector<double> schedule(double lo, double hi, double step);
};

/// Throws std::invalid_argument naming the offending field.
void validate(const SearchPlan & plan);

/// Moves one parameter by one plan step. Returns nullopt when the step would
/// leave the parameter range (the sweep along this axis is exhausted).
std::optional<ControlParameters> mutate_step(
  const ControlParameters & params, MutationAxis axis, const SearchPlan & plan);

struct CampaignConfig
{
  std::vector<ScenarioKind> kinds{kAllKinds.begin(), kAllKinds.end()};
  std::map<ScenarioKind, SearchPlan> plans;  // kinds without an entry use defaults_for
  ScenarioDefaults scenario;
  DefectModel defect;
  OracleConfig oracle;
  SimConfig sim;
  MutatorKind mutator{MutatorKind::Guided};
  std::int64_t budget{1000};
  std::uint64_t rng_seed{0};  // Random and NCStart bookkeeping only; Guided ignores it
  unsigned workers{0};        // 0 = hardware concurrency

  SearchPlan plan_for(ScenarioKind kind) const;
};

void validate(const CampaignConfig & config);

struct Execution
{
  ScenarioType type;
  bool triggered;
  std::optional<double> first_contact_s;
  double sim_seconds;
};

/// Simulates one parameter setting and classifies it.
Execution execute(const ScenarioSpec & spec, const ControlParameters & params, const CampaignConfig & config);

struct RoundResult
{
  std::vector<OutcomeRecord> records;
  bool complete{false};  // false when max_executions cut the round short
};

/// Guided round: distance outermost, then speed, then the angle swept outward
/// from the seed angle (+ branch first), each branch ending after k_nc
/// consecutive NC verdicts or at the range bound. Records carry ordinal 0.
/// Throws std::invalid_argument when the seed is not a determined collision.
RoundResult run_round(const SeedScenario & seed, const CampaignConfig & config, std::size_t max_executions);

/// NC-start baseline round: same cells, but each angle branch starts at its
/// range bound and steps back toward the seed angle without early exit. The
/// round begins at the first cell whose + bound does not collide and wraps
/// around; throws std::invalid_argument when no cell has such a bound.
RoundResult run_nc_start_round(
  const SeedScenario & seed, const CampaignConfig & config, std::size_t max_executions);

struct CampaignResult
{
  std::vector<OutcomeRecord> records;
  std::map<ScenarioKind, bool> seed_valid;
  std::int64_t budget{0};
};

/// Deterministic given the config; ordinals follow the record order.
CampaignResult run_campaign(const CampaignConfig & config);

/// Runs the campaign and re-simulates every record with ground-truth contact,
/// labeled under config.defect. Records without contact can never be flagged
/// at any threshold and are left out.
std::vector<LabeledTrace> labeled_set(const CampaignConfig & config);

enum class SweepAxis { Distance, Speed, Angle, AngleLong, AngleLat };

struct StepSweepPoint
{
  double step;
  double mean_ics;
  std::vector<int> per_trial;
};

/// ICS counts of single-axis sweeps at each step size. Trial j draws the
/// remaining parameters from an RNG seeded with (rng_seed, j), so every step
/// size sees the same random draws.
std::vector<StepSweepPoint> step_size_sweep(
  ScenarioKind kind, SweepAxis axis, const std::vector<double> & steps, int trials,
  const CampaignConfig & config);

std::optional<SweepAxis> parse_sweep_axis(std::string_view name);

}  // namespace icsfuzz

#endif  // ICSFUZZ__FUZZER_HPP_
