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

// Acceptance run. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Every budget, seed and tolerance is pinned below.

#include "icsfuzz/config.hpp"
#include "icsfuzz/detector.hpp"
#include "icsfuzz/fuzzer.hpp"
#include "icsfuzz/geometry.hpp"
#include "icsfuzz/oracle.hpp"
#include "icsfuzz/record.hpp"
#include "icsfuzz/report.hpp"
#include "support/mc_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace icsfuzz;

namespace
{

// geometry
constexpr int kGeomPairs = 1000;
constexpr int kMcSide = 1000;  // 10^6 samples per pair
constexpr double kAreaRelTol = 0.01;
constexpr double kAreaAbsTol = 1e-3;
constexpr double kGeomSeconds = 60.0;
constexpr std::uint64_t kGeomSeed = 20260101;

// truth table
constexpr int kFuzzedTraces = 1000;
constexpr std::uint64_t kTraceSeed = 7;

// large enough that every Guided round runs to completion
constexpr std::int64_t kFullBudget = 1000000;

// reference config: all six kinds, default plans, default defect
constexpr std::int64_t kReferenceBudget = 6000;
constexpr int kRandomSeeds = 10;
constexpr double kDominance = 2.0;

constexpr std::int64_t kRediscoveryBudget = 20000;
constexpr int kRediscoveryKinds = 4;
constexpr double kRediscoverySeconds = 600.0;

// trend presets
constexpr std::int64_t kTrendBudget = 20000;
const DefectModel kTunnelingDefect{10, 0.0, 0.0};
const DefectModel kGrazeDefect{1, 0.05, 0.5};

const std::vector<double> kSweepSteps{0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08};
constexpr int kSweepTrials = 1000;
constexpr int kMaxInversions = 1;

const std::vector<double> kThresholds{0.0, 0.05, 0.1, 0.15, 0.2};
constexpr std::int64_t kLabeledBudget = 6000;

struct Outcome
{
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char * name, const std::function<Outcome()> & check)
{
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception & e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  failures += o.pass ? 0 : 1;
  std::printf("%s %2d %s | %s | %.1fs\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char * format, double a = 0, double b = 0, double c = 0, double d = 0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

CampaignConfig reference_config(MutatorKind mutator = MutatorKind::Guided)
{
  CampaignConfig c;
  c.mutator = mutator;
  c.budget = kReferenceBudget;
  return c;
}

std::string to_jsonl(const std::vector<OutcomeRecord> & records)
{
  std::ostringstream os;
  write_records_jsonl(os, records);
  return os.str();
}

// every campaign log produced below is kept for the conservation check
std::vector<std::vector<OutcomeRecord>> logs;

CampaignResult campaign(const CampaignConfig & c)
{
  CampaignResult r = run_campaign(c);
  logs.push_back(r.records);
  return r;
}

int count(const std::vector<OutcomeRecord> & rs, ScenarioType t)
{
  return static_cast<int>(std::count_if(rs.begin(), rs.end(), [&](const OutcomeRecord & r) { return r.type == t; }));
}

// ---------------------------------------------------------------------------

Outcome geometry_equivalence()
{
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kGeomSeed);
  int area_misses = 0;
  int predicate_misses = 0;
  double worst = 0.0;
  for (int i = 0; i < kGeomPairs; ++i) {
    const auto [a, b] = testing::random_pair(rng);
    const double exact = intersection_area(a, b);
    const double mc = testing::mc_intersection_area(a, b, kMcSide, static_cast<std::uint64_t>(i) + 1);
    const double err = std::abs(exact - mc);
    worst = std::max(worst, err);
    area_misses += err > std::max(kAreaRelTol * mc, kAreaAbsTol);
    predicate_misses += overlaps(a, b) != (exact > kAreaEpsilon);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {
    area_misses == 0 && predicate_misses == 0 && secs < kGeomSeconds,
    fmt("pairs=1000 area_out_of_tol=%g predicate_disagree=%g max_abs_err=%.2e runtime=%.1fs", area_misses,
        predicate_misses, worst, secs)};
}

// Unit squares with the EV `depth` metres into the NPC along x.
Trace square_trace(const std::vector<double> & depths, double closing)
{
  const OrientedBox npc({0.0, 0.0}, 0.5, 0.5, 0.0);
  Trace t;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const OrientedBox ev({-1.0 + depths[i], 0.0}, 0.5, 0.5, 0.0);
    t.frames.push_back(Frame{
      0.01 * static_cast<double>(i), ev, npc, overlaps(ev, npc), penetration_depth(ev, npc), closing, false});
    if (!t.first_contact && t.frames.back().gt_overlap) {
      t.first_contact = i;
    }
  }
  return t;
}

Outcome truth_table()
{
  int bad = 0;
  // the four cells of the table itself
  bad += classify(true, false) != ScenarioType::IC;
  bad += classify(false, false) != ScenarioType::NC;
  bad += classify(true, true) != ScenarioType::DC;
  bad += classify(false, true) != ScenarioType::FP;

  // one trace per cell
  const OracleConfig any{0.0};
  std::vector<double> missed(10, -0.5);
  missed[3] = 0.2;  // between the every-5th-frame inspections
  bad += check_ic(square_trace(missed, 5.0), DefectModel{5, 0, 0}, any) != ScenarioType::IC;
  bad += check_ic(square_trace(std::vector<double>(10, -0.5), 5.0), DefectModel{}, any) != ScenarioType::NC;
  bad += check_ic(square_trace({0.6, 0.6}, 5.0), DefectModel{}, any) != ScenarioType::DC;
  // IoU 0.053 stays under the 0.5 threshold while a perfect detector fires
  bad += check_ic(square_trace({0.1, 0.1}, 5.0), DefectModel::perfect(), OracleConfig{0.5}) != ScenarioType::FP;

  // fuzzed simulator traces under fuzzed detectors and thresholds
  std::mt19937_64 rng(kTraceSeed);
  std::uniform_int_distribution<int> kind(0, 5), period(1, 10);
  std::uniform_real_distribution<double> d(2, 7), v(0.5, 50), a(-1, 1), pen(0, 0.2), imp(0, 2), thr(0, 0.6);
  int cells[4] = {0, 0, 0, 0};
  int mismatched = 0;
  for (int i = 0; i < kFuzzedTraces; ++i) {
    const auto seed = make_seed(kAllKinds[static_cast<std::size_t>(kind(rng))]);
    const double dist = d(rng);
    const double speed = v(rng);
    const double angle = a(rng);
    const Trace t = simulate(seed.spec, ControlParameters::from_angle(dist, speed, angle), SimConfig{});
    const DefectModel defect{period(rng), pen(rng), imp(rng)};
    const OracleConfig oc{thr(rng)};
    const ScenarioType got = check_ic(t, defect, oc);
    const bool cond = overlap_condition(t, oc);
    const bool fired = builtin_cd(t, defect);
    // exactly one cell, and the one the two conditions select
    const int hits = (got == ScenarioType::IC) + (got == ScenarioType::NC) + (got == ScenarioType::DC) +
                     (got == ScenarioType::FP);
    mismatched += hits != 1 || got != classify(cond, fired);
    ++cells[static_cast<int>(got)];
  }
  return {
    bad == 0 && mismatched == 0,
    fmt("exhaustive_errors=%g fuzzed_mismatch=%g", bad, mismatched) +
      fmt(" fuzzed IC=%g NC=%g DC=%g FP=%g", cells[0], cells[2], cells[1], cells[3])};
}

Outcome perfect_collapse()
{
  CampaignConfig c;
  c.defect = DefectModel::perfect();
  c.budget = kFullBudget;
  const auto r = campaign(c);
  const auto used = static_cast<std::int64_t>(r.records.size());
  const int ic = count(r.records, ScenarioType::IC);
  const int fp = count(r.records, ScenarioType::FP);
  return {
    ic == 0 && fp == 0 && used < kFullBudget,
    fmt("executions=%g IC=%g FP=%g DC=%g", static_cast<double>(used), ic, fp, count(r.records, ScenarioType::DC))};
}

int run_cli(const std::string & args)
{
  const std::string cmd = std::string(ICSFUZZ_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism()
{
  const CampaignConfig c = reference_config();
  CampaignConfig serial = c;
  serial.workers = 1;
  const std::string first = to_jsonl(campaign(c).records);
  const std::string second = to_jsonl(run_campaign(serial).records);
  const bool in_process = first == second;

  // the CLI twice on the same config file
  const fs::path dir = fs::temp_directory_path() / ("icsfuzz_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream(dir / "reference.json") << config_to_json(c).dump(2);
  }
  const std::string cfg = (dir / "reference.json").string();
  const int rc1 = run_cli("run --config " + cfg + " --out " + (dir / "a").string());
  const int rc2 = run_cli("run --config " + cfg + " --out " + (dir / "b").string());
  const std::string log_a = slurp(dir / "a" / "records.jsonl");
  const bool cli_identical = rc1 == 0 && rc2 == 0 && !log_a.empty() &&
                             log_a == slurp(dir / "b" / "records.jsonl") && log_a == first;

  // every logged verdict re-executed from the log alone
  std::istringstream in(log_a);
  const auto records = read_records_jsonl(in);
  int verdict_misses = 0;
  for (const auto & r : records) {
    const Execution ex = execute(make_seed(r.kind, c.scenario).spec, r.params, c);
    verdict_misses += ex.type != r.type || ex.first_contact_s != r.first_contact_s;
  }
  // and through the replay command on a sample of ordinals
  int replay_misses = 0;
  int replayed = 0;
  const std::string log = (dir / "a" / "records.jsonl").string();
  for (std::size_t i = 0; i < records.size(); i += 97) {
    replay_misses += run_cli("replay --log " + log + " --ordinal " + std::to_string(i)) != 0;
    ++replayed;
  }
  fs::remove_all(dir);
  return {
    in_process && cli_identical && verdict_misses == 0 && replay_misses == 0 &&
      records.size() == static_cast<std::size_t>(kReferenceBudget),
    fmt("identical_in_process=%g identical_cli=%g replayed_in_process=%g mismatches=%g", in_process,
        cli_identical, static_cast<double>(records.size()), verdict_misses) +
      fmt(" cli_replays=%g cli_mismatches=%g", replayed, replay_misses)};
}

Outcome rediscovery()
{
  const auto t0 = std::chrono::steady_clock::now();
  CampaignConfig c;
  c.budget = kRediscoveryBudget;
  const auto r = campaign(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const BucketScheme scheme;
  std::map<ScenarioKind, int> ics;
  int tunneling = 0;
  int graze = 0;
  for (const auto & rec : r.records) {
    if (rec.type != ScenarioType::IC) {
      continue;
    }
    ++ics[rec.kind];
    tunneling += scheme.speed_index(rec.params.speed) >= 3;  // 30-40 or 40-50
    graze += std::abs(scheme.angle_centers[scheme.angle_index(rec.params.angle)]) >= 0.75;
  }
  std::string kinds;
  for (const auto & [k, n] : ics) {
    kinds += std::string(to_string(k)) + "=" + std::to_string(n) + " ";
  }
  return {
    static_cast<int>(ics.size()) >= kRediscoveryKinds && tunneling > 0 && graze > 0 &&
      secs <= kRediscoverySeconds,
    "kinds_with_ics=" + std::to_string(ics.size()) + " (" + kinds + ")" +
      fmt("tunneling=%g graze=%g runtime=%.1fs", tunneling, graze, secs)};
}

Outcome dominance()
{
  const auto kinds = reference_config().kinds;
  const SRReport guided = success_rates(campaign(reference_config()).records);
  const double g_prop = guided.ics_proportion();
  const double g_ttf = mean_time_to_first_ics(guided, kinds);

  double r_prop = 0.0;
  double r_ttf = 0.0;
  for (int s = 0; s < kRandomSeeds; ++s) {
    CampaignConfig c = reference_config(MutatorKind::Random);
    c.rng_seed = static_cast<std::uint64_t>(s);
    const SRReport rep = success_rates(campaign(c).records);
    r_prop += rep.ics_proportion() / kRandomSeeds;
    r_ttf += mean_time_to_first_ics(rep, kinds) / kRandomSeeds;
  }
  const SRReport nc = success_rates(campaign(reference_config(MutatorKind::NCStart)).records);
  const double n_prop = nc.ics_proportion();
  const double n_ttf = mean_time_to_first_ics(nc, kinds);

  const bool prop_r = g_prop >= kDominance * r_prop;
  const bool prop_n = g_prop >= kDominance * n_prop;
  const bool ttf_r = g_ttf <= r_ttf / kDominance;
  const bool ttf_n = g_ttf <= n_ttf / kDominance;
  return {
    prop_r && prop_n && ttf_r && ttf_n,
    fmt("proportion guided=%.4f random=%.4f (x%.2f) ncstart=%.4f", g_prop, r_prop, g_prop / r_prop, n_prop) +
      fmt(" (x%.2f); ttf_s guided=%.1f random=%.1f (ratio %.2f)", g_prop / n_prop, g_ttf, r_ttf, g_ttf / r_ttf) +
      fmt(" ncstart=%.1f (ratio %.2f)", n_ttf, g_ttf / n_ttf) +
      fmt("; checks prop_r=%g prop_n=%g ttf_r=%g ttf_n=%g", prop_r, prop_n, ttf_r, ttf_n)};
}

std::optional<double> pooled_sr(const std::vector<BucketCounts> & cells)
{
  BucketCounts sum;
  for (const auto & c : cells) {
    sum.ics += c.ics;
    sum.dc += c.dc;
  }
  return sum.success_rate();
}

Outcome trends()
{
  CampaignConfig c;
  c.budget = kTrendBudget;
  c.defect = kTunnelingDefect;
  const SRReport tun = success_rates(campaign(c).records);
  std::vector<double> idx;
  std::vector<double> sr;
  std::string speed_sr;
  bool all_present = true;
  for (std::size_t i = 0; i < tun.speed.size(); ++i) {
    const auto s = tun.speed[i].success_rate();
    all_present = all_present && s.has_value();
    idx.push_back(static_cast<double>(i));
    sr.push_back(s.value_or(0.0));
    speed_sr += fmt("%.3f ", s.value_or(-1.0));
  }
  const auto rho = spearman(idx, sr);
  const bool tunneling_ok = all_present && rho && *rho > 0.0;

  c.defect = kGrazeDefect;
  const SRReport gr = success_rates(campaign(c).records);
  std::vector<BucketCounts> wide;
  std::vector<BucketCounts> narrow;
  for (std::size_t i = 0; i < gr.angle.size(); ++i) {
    const double center = std::abs(gr.scheme.angle_centers[i]);
    if (center >= 0.75) {
      wide.push_back(gr.angle[i]);
    } else if (center <= 0.25) {
      narrow.push_back(gr.angle[i]);
    }
  }
  const auto sr_wide = pooled_sr(wide);
  const auto sr_narrow = pooled_sr(narrow);
  const bool graze_ok = sr_wide && sr_narrow && *sr_wide > *sr_narrow;
  return {
    tunneling_ok && graze_ok,
    "tunneling speed SR [" + speed_sr + "]" + fmt(" rho=%.3f; graze SR |a|>=0.75=%.4f |a|<=0.25=%.4f",
                                                  rho.value_or(NAN), sr_wide.value_or(NAN),
                                                  sr_narrow.value_or(NAN))};
}

Outcome step_sweep()
{
  const auto pts = step_size_sweep(ScenarioKind::FLB, SweepAxis::Angle, kSweepSteps, kSweepTrials, CampaignConfig{});
  int inversions = 0;
  std::string means;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    means += fmt("%.2f ", pts[i].mean_ics);
    if (i > 0 && pts[i].mean_ics > pts[i - 1].mean_ics) {
      ++inversions;
    }
  }
  return {inversions <= kMaxInversions, "mean_ics [" + means + "]" + fmt("inversions=%g", inversions)};
}

Outcome threshold_sweep()
{
  CampaignConfig c;
  c.kinds = {ScenarioKind::FLB, ScenarioKind::LC, ScenarioKind::PSF};
  c.budget = kLabeledBudget;
  const auto labeled = labeled_set(c);
  const auto metrics = recall_sweep(labeled, kThresholds);
  bool monotone = true;
  bool present = true;
  std::string recalls;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    present = present && metrics[i].recall.has_value();
    recalls += fmt("%.4f ", metrics[i].recall.value_or(NAN));
    if (i > 0 && metrics[i].recall.value_or(0) > metrics[i - 1].recall.value_or(0)) {
      monotone = false;
    }
  }
  const bool full = present && metrics.front().recall == 1.0;
  return {
    present && monotone && full,
    "labeled=" + std::to_string(labeled.size()) + " recall [" + recalls + "]"};
}

bool same_counts(const BucketCounts & a, const BucketCounts & b)
{
  return a.executions == b.executions && a.ics == b.ics && a.dc == b.dc && a.nc == b.nc && a.fp == b.fp;
}

bool marginals_match(const CrossMatrix & m, const SRReport & r)
{
  const auto & rows = r.axis(m.rows);
  const auto & cols = r.axis(m.cols);
  if (m.cells.size() != rows.size()) {
    return false;
  }
  std::vector<BucketCounts> col_sum(cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (m.cells[i].size() != cols.size()) {
      return false;
    }
    BucketCounts row_sum;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const auto & c = m.cells[i][j];
      for (auto * acc : {&row_sum, &col_sum[j]}) {
        acc->executions += c.executions;
        acc->ics += c.ics;
        acc->dc += c.dc;
        acc->nc += c.nc;
        acc->fp += c.fp;
      }
    }
    if (!same_counts(row_sum, rows[i])) {
      return false;
    }
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (!same_counts(col_sum[j], cols[j])) {
      return false;
    }
  }
  return true;
}

Outcome conservation()
{
  int bad_logs = 0;
  long total = 0;
  for (const auto & log : logs) {
    const SRReport r = success_rates(log);
    total += static_cast<long>(log.size());
    bool ok = r.executions == static_cast<int>(log.size());
    for (const Axis a : {Axis::Distance, Axis::Speed, Axis::Angle}) {
      int sum = 0;
      for (const auto & c : r.axis(a)) {
        sum += c.executions;
        ok = ok && c.ics + c.dc + c.nc + c.fp == c.executions;
      }
      ok = ok && sum == r.executions;
    }
    for (const auto * m : {&r.distance_speed, &r.speed_angle, &r.distance_angle}) {
      ok = ok && marginals_match(*m, r);
    }
    bad_logs += !ok;
  }
  return {
    bad_logs == 0 && !logs.empty(),
    fmt("logs=%g records=%g violating_logs=%g", static_cast<double>(logs.size()), static_cast<double>(total),
        bad_logs)};
}

}  // namespace

int main()
{
  report(1, "geometry oracle equivalence", geometry_equivalence);
  report(2, "oracle truth table", truth_table);
  report(3, "perfect-detector collapse", perfect_collapse);
  report(4, "determinism and replay", determinism);
  report(5, "defect rediscovery", rediscovery);
  report(6, "baseline dominance", dominance);
  report(7, "trend reproduction", trends);
  report(8, "step-size sweep", step_sweep);
  report(9, "threshold sweep", threshold_sweep);
  report(10, "report conservation", conservation);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
