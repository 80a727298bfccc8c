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
#ifndef ICSFUZZ__REPORT_HPP_
#define ICSFUZZ__REPORT_HPP_

#include "icsfuzz/record.hpp"
#include "icsfuzz/scenario.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace icsfuzz
{

/// Partition of the control-parameter box into reporting buckets. Distance and
/// speed buckets are half-open (lo, hi], so a boundary value belongs to the
/// lower bucket; the angle goes to the nearest center (ties to the lower one).
struct BucketScheme
{
  std::vector<double> distance_upper{3.0, 5.0, 7.0};
  std::vector<std::string> distance_labels{"2-3", "4-5", "6-7"};
  std::vector<double> speed_upper{10.0, 20.0, 30.0, 40.0, 50.0};
  std::vector<std::string> speed_labels{"0-10", "10-20", "20-30", "30-40", "40-50"};
  std::vector<double> angle_centers{-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0};

  std::size_t distance_index(double distance) const;
  std::size_t speed_index(double speed) const;
  std::size_t angle_index(double angle) const;
  std::string angle_label(std::size_t index) const;
};

BucketLabels bucket(const ControlParameters & params, const BucketScheme & scheme = {});

/// Coarse L/M/F, L/M/H, N/0/P classes used to group ICSs.
CategoryLabel categorize(const ControlParameters & params);

struct BucketCounts
{
  int executions{0};
  int ics{0};
  int dc{0};
  int nc{0};
  int fp{0};

  int collisions() const { return ics + dc; }
  /// ICS share of ground-truth collisions; absent when there were none.
  std::optional<double> success_rate() const;
  void add(ScenarioType type);
};

enum class Axis { Distance, Speed, Angle };

struct CrossMatrix
{
  Axis rows;
  Axis cols;
  std::vector<std::vector<BucketCounts>> cells;
};

struct KindSummary
{
  int executions{0};
  int ics{0};
  int dc{0};
  double seconds{0.0};
  /// Cumulative simulated seconds of this kind until its first ICS.
  std::optional<double> time_to_first_ics;
};

struct SRReport
{
  BucketScheme scheme;
  std::vector<BucketCounts> distance;
  std::vector<BucketCounts> speed;
  std::vector<BucketCounts> angle;
  CrossMatrix distance_speed{Axis::Distance, Axis::Speed, {}};
  CrossMatrix speed_angle{Axis::Speed, Axis::Angle, {}};
  CrossMatrix distance_angle{Axis::Distance, Axis::Angle, {}};
  std::map<ScenarioKind, KindSummary> kinds;
  int executions{0};
  int ics{0};

  double ics_proportion() const;
  const std::vector<BucketCounts> & axis(Axis a) const;
};

/// Aggregates a record list; an empty list yields an all-zero report.
SRReport success_rates(const std::vector<OutcomeRecord> & records, const BucketScheme & scheme = {});

struct CategoryRow
{
  ScenarioKind kind;
  CategoryLabel label;
  int count;
  double mean_elapsed;  // mean campaign time stamp of the ICSs in this row
};

/// Distinct (kind, category) rows over the IC records, sorted by kind then label.
std::vector<CategoryRow> categorize_ics(const std::vector<OutcomeRecord> & records);

/// Mean over kinds of KindSummary::time_to_first_ics, counting a kind without
/// any ICS at its total simulated time.
double mean_time_to_first_ics(const SRReport & report, const std::vector<ScenarioKind> & kinds);

/// Spearman rank correlation with average ranks for ties; nullopt when either side is constant.
std::optional<double> spearman(const std::vector<double> & x, const std::vector<double> & y);

void write_csv(std::ostream & out, const SRReport & report);
void write_svg(std::ostream & out, const SRReport & report);

}  // namespace icsfuzz

#endif  // ICSFUZZ__REPORT_HPP_
