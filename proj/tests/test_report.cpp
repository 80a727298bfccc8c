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


#include "icsfuzz/fuzzer.hpp"
#include "icsfuzz/report.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace icsfuzz
{
namespace
{

OutcomeRecord rec(ScenarioType type, double d = 2, double v = 17, double a = 0, ScenarioKind kind = ScenarioKind::FLV)
{
  OutcomeRecord r;
  r.kind = kind;
  r.params = ControlParameters::from_angle(d, v, a);
  r.type = type;
  r.sim_seconds = 1.0;
  r.buckets = bucket(r.params);
  r.category = categorize(r.params);
  return r;
}

std::vector<OutcomeRecord> with_times(std::vector<OutcomeRecord> records)
{
  double t = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].ordinal = i;
    t += records[i].sim_seconds;
    records[i].elapsed_s = t;
  }
  return records;
}

std::size_t csv_lines(const SRReport & report)
{
  std::ostringstream out;
  write_csv(out, report);
  const std::string s = out.str();
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

TEST(Bucket, Examples)
{
  EXPECT_EQ(bucket(ControlParameters::from_angle(2, 17, 0)).speed, "10-20");
  EXPECT_EQ(bucket(ControlParameters::from_angle(3, 17, 0)).distance, "2-3");
  EXPECT_EQ(bucket(ControlParameters::from_angle(2, 17, 0.6)).angle, 0.5);
}

TEST(Bucket, BoundariesGoToTheLowerBucket)
{
  EXPECT_EQ(bucket(ControlParameters::from_angle(5, 10, 0)).distance, "4-5");
  EXPECT_EQ(bucket(ControlParameters::from_angle(5.5, 10, 0)).distance, "6-7");
  EXPECT_EQ(bucket(ControlParameters::from_angle(2, 10, 0)).speed, "0-10");
  EXPECT_EQ(bucket(ControlParameters::from_angle(2, 10.5, 0)).speed, "10-20");
  EXPECT_EQ(bucket(ControlParameters::from_angle(2, 50, 0)).speed, "40-50");
  EXPECT_EQ(bucket(ControlParameters::from_angle(2, 0.1, 0)).speed, "0-10");
  // a tie between two centers goes to the lower one
  EXPECT_EQ(bucket(ControlParameters::from_angle(2, 10, 0.125)).angle, 0.0);
  EXPECT_EQ(bucket(ControlParameters::from_angle(2, 10, -1)).angle, -1.0);
}

TEST(Categorize, Examples)
{
  const auto c = categorize(ControlParameters::from_angle(6, 25, 0.8));
  EXPECT_EQ(c.str(), "FMP");
  EXPECT_EQ(categorize(ControlParameters::from_angle(2, 20, 0.05)).str(), "LL0");
  EXPECT_EQ(categorize(ControlParameters::from_angle(4, 41, -0.06)).str(), "MHN");
}

TEST(SuccessRates, Arithmetic)
{
  std::vector<OutcomeRecord> records;
  for (int i = 0; i < 3; ++i) {
    records.push_back(rec(ScenarioType::IC));
  }
  for (int i = 0; i < 9; ++i) {
    records.push_back(rec(ScenarioType::DC));
  }
  records.push_back(rec(ScenarioType::NC));
  const auto r = success_rates(with_times(records));
  const auto & b = r.speed[r.scheme.speed_index(17)];
  EXPECT_EQ(b.executions, 13);
  EXPECT_EQ(b.collisions(), 12);
  EXPECT_DOUBLE_EQ(*b.success_rate(), 0.25);
  EXPECT_DOUBLE_EQ(r.ics_proportion(), 3.0 / 13.0);
}

TEST(SuccessRates, AllNcHasNoRates)
{
  std::vector<OutcomeRecord> records;
  for (double v : {3.0, 13.0, 33.0}) {
    records.push_back(rec(ScenarioType::NC, 2, v, 0.3));
  }
  const auto r = success_rates(with_times(records));
  for (const Axis a : {Axis::Distance, Axis::Speed, Axis::Angle}) {
    for (const auto & b : r.axis(a)) {
      EXPECT_FALSE(b.success_rate().has_value());
    }
  }
}

TEST(SuccessRates, EmptyInput)
{
  const auto r = success_rates({});
  EXPECT_EQ(r.executions, 0);
  EXPECT_EQ(r.ics_proportion(), 0.0);
  EXPECT_EQ(csv_lines(r), 1u);
}

TEST(SuccessRates, PerfectDetectorCampaignHasZeroSr)
{
  CampaignConfig config;
  config.defect = DefectModel::perfect();
  config.budget = 1200;
  const auto r = success_rates(run_campaign(config).records);
  int defined = 0;
  for (const Axis a : {Axis::Distance, Axis::Speed, Axis::Angle}) {
    for (const auto & b : r.axis(a)) {
      if (b.success_rate()) {
        EXPECT_EQ(*b.success_rate(), 0.0);
        ++defined;
      }
    }
  }
  EXPECT_GT(defined, 0);
}

TEST(Conservation, AxesAndMarginals)
{
  for (const auto m : {MutatorKind::Guided, MutatorKind::Random}) {
    CampaignConfig config;
    config.mutator = m;
    config.budget = 2500;
    const auto records = run_campaign(config).records;
    const auto r = success_rates(records);
    for (const Axis a : {Axis::Distance, Axis::Speed, Axis::Angle}) {
      int total = 0;
      for (const auto & b : r.axis(a)) {
        total += b.ics + b.dc + b.nc + b.fp;
        EXPECT_EQ(b.executions, b.ics + b.dc + b.nc + b.fp);
      }
      EXPECT_EQ(total, static_cast<int>(records.size()));
    }
    for (const CrossMatrix * cm : {&r.distance_speed, &r.speed_angle, &r.distance_angle}) {
      const auto & rows = r.axis(cm->rows);
      const auto & cols = r.axis(cm->cols);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        BucketCounts sum;
        for (const auto & cell : cm->cells[i]) {
          sum.executions += cell.executions;
          sum.ics += cell.ics;
          sum.dc += cell.dc;
        }
        EXPECT_EQ(sum.executions, rows[i].executions);
        EXPECT_EQ(sum.ics, rows[i].ics);
        EXPECT_EQ(sum.dc, rows[i].dc);
      }
      for (std::size_t j = 0; j < cols.size(); ++j) {
        int n = 0;
        for (const auto & row : cm->cells) {
          n += row[j].executions;
        }
        EXPECT_EQ(n, cols[j].executions);
      }
    }
    for (const auto & rr : records) {
      EXPECT_EQ(rr.buckets, bucket(rr.params));
      EXPECT_EQ(rr.category, categorize(rr.params));
    }
  }
}

TEST(CategorizeIcs, RowsAndCounts)
{
  EXPECT_TRUE(categorize_ics({}).empty());
  auto records = with_times({
    rec(ScenarioType::IC, 6, 25, 0.8, ScenarioKind::PSF),
    rec(ScenarioType::DC, 6, 25, 0.8, ScenarioKind::PSF),
    rec(ScenarioType::IC, 6.5, 30, 0.5, ScenarioKind::PSF),
    rec(ScenarioType::IC, 2, 5, 0, ScenarioKind::FLB),
  });
  const auto rows = categorize_ics(records);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].kind, ScenarioKind::FLB);
  EXPECT_EQ(rows[0].label.str(), "LL0");
  EXPECT_EQ(rows[1].kind, ScenarioKind::PSF);
  EXPECT_EQ(rows[1].label.str(), "FMP");
  EXPECT_EQ(rows[1].count, 2);
  EXPECT_DOUBLE_EQ(rows[1].mean_elapsed, (1.0 + 3.0) / 2.0);
}

TEST(CategorizeIcs, DefaultCampaignHasSeveralCategories)
{
  CampaignConfig config;
  config.budget = 6000;
  EXPECT_GE(categorize_ics(run_campaign(config).records).size(), 2u);
}

TEST(TimeToFirstIcs, PerKindClock)
{
  auto records = with_times({
    rec(ScenarioType::NC, 2, 5, 0, ScenarioKind::FLB),
    rec(ScenarioType::NC, 2, 5, 0, ScenarioKind::PSF),
    rec(ScenarioType::IC, 2, 5, 0, ScenarioKind::FLB),
    rec(ScenarioType::NC, 2, 5, 0, ScenarioKind::PSF),
  });
  const auto r = success_rates(records);
  EXPECT_EQ(r.kinds.at(ScenarioKind::FLB).time_to_first_ics, 2.0);
  EXPECT_FALSE(r.kinds.at(ScenarioKind::PSF).time_to_first_ics.has_value());
  // the kind without an ICS counts at its whole clock
  EXPECT_DOUBLE_EQ(mean_time_to_first_ics(r, {ScenarioKind::FLB, ScenarioKind::PSF}), 2.0);
}

TEST(Spearman, Basics)
{
  EXPECT_DOUBLE_EQ(*spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(*spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  EXPECT_FALSE(spearman({1, 2, 3}, {5, 5, 5}).has_value());
  EXPECT_NEAR(*spearman({1, 2, 3, 4, 5}, {1, 1, 2, 3, 3}), 0.9486832980505138, 1e-12);
}

TEST(Export, CsvRowsMatchPopulatedBuckets)
{
  CampaignConfig config;
  config.budget = 1500;
  const auto r = success_rates(run_campaign(config).records);
  std::size_t populated = 0;
  for (const Axis a : {Axis::Distance, Axis::Speed, Axis::Angle}) {
    for (const auto & b : r.axis(a)) {
      populated += b.executions > 0;
    }
  }
  for (const CrossMatrix * cm : {&r.distance_speed, &r.speed_angle, &r.distance_angle}) {
    for (const auto & row : cm->cells) {
      for (const auto & cell : row) {
        populated += cell.executions > 0;
      }
    }
  }
  EXPECT_EQ(csv_lines(r), populated + 1);

  std::ostringstream a, b, sa, sb;
  write_csv(a, r);
  write_csv(b, r);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "axis,bucket,executions,collisions,ics,sr_percent");
  write_svg(sa, r);
  write_svg(sb, r);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().rfind("<svg", 0), 0u);
  EXPECT_NE(sa.str().find("</svg>"), std::string::npos);
}

TEST(Export, CsvRowFormat)
{
  std::vector<OutcomeRecord> records{rec(ScenarioType::IC, 2, 17, 0), rec(ScenarioType::DC, 2, 17, 0),
                                     rec(ScenarioType::DC, 2, 17, 0), rec(ScenarioType::NC, 2, 17, 0)};
  std::ostringstream out;
  write_csv(out, success_rates(with_times(records)));
  EXPECT_NE(out.str().find("\nspeed,10-20,4,3,1,33.3333\n"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("\ndistance*speed,2-3|10-20,4,3,1,33.3333\n"), std::string::npos);
}

}  // namespace
}  // namespace icsfuzz
