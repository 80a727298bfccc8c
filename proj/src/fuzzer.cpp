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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace icsfuzz
{

namespace
{

constexpr double kGrid = 1e9;
constexpr double kRangeSlack = 1e-9;

// Steps accumulate in binary floating point; snapping keeps the lattice
// values (and therefore the logs) free of 0.12000000000000001-style noise.
double snap(double v) { return std::round(v * kGrid) / kGrid; }

void check_schedule(const std::vector<double> & s, double lo, double hi, bool open_lo, const char * name)
{
  if (s.empty()) {
    throw std::invalid_argument(std::string(name) + " must not be empty");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool below = open_lo ? !(s[i] > lo) : s[i] < lo;
    if (!std::isfinite(s[i]) || below || s[i] > hi) {
      std::ostringstream os;
      os << name << "[" << i << "] = " << s[i] << " outside range " << (open_lo ? "(" : "")
         << lo << ".." << hi;
      throw std::invalid_argument(os.str());
    }
    if (i > 0 && !(s[i] > s[i - 1])) {
      throw std::invalid_argument(std::string(name) + " must be strictly ascending");
    }
  }
}

void check_step(double step, const char * name)
{
  if (!std::isfinite(step) || !(step > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)> & fn)
{
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < n; i = next++) {
            fn(i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto & e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

OutcomeRecord make_record(
  ScenarioKind kind, MutatorKind mutator, std::string branch, const ControlParameters & params,
  const Execution & ex)
{
  OutcomeRecord r;
  r.mutator = mutator;
  r.kind = kind;
  r.branch = std::move(branch);
  r.params = params;
  r.type = ex.type;
  r.triggered = ex.triggered;
  r.first_contact_s = ex.first_contact_s;
  r.sim_seconds = ex.sim_seconds;
  r.buckets = bucket(params);
  r.category = categorize(params);
  return r;
}

ControlParameters with_cell(ControlParameters p, double distance, double speed)
{
  p.distance = distance;
  p.speed = speed;
  return p;
}

// Lattice points seed+s, seed+2s, ... along one angle direction, in stepping order.
std::vector<ControlParameters> angle_lattice(
  const ControlParameters & base, MutationAxis axis, const SearchPlan & plan)
{
  std::vector<ControlParameters> out;
  for (auto p = mutate_step(base, axis, plan); p; p = mutate_step(*p, axis, plan)) {
    out.push_back(*p);
  }
  return out;
}

// The outermost angle setting in one direction: a = +-1, or theta_lat = +-1 per axis.
ControlParameters angle_bound(const ControlParameters & base, double sign, const SearchPlan & plan)
{
  if (plan.angle_mode == AngleMode::Scalar) {
    return ControlParameters::from_angle(base.distance, base.speed, sign);
  }
  return ControlParameters::from_components(base.distance, base.speed, base.theta_long, sign);
}

// Executes parameter settings in order under a shared budget.
class RoundRunner
{
public:
  RoundRunner(const SeedScenario & seed, const CampaignConfig & config, MutatorKind mutator, std::size_t cap)
  : seed_(seed), config_(config), mutator_(mutator), cap_(cap)
  {
  }

  bool full() const { return result_.records.size() >= cap_; }

  /// nullopt once the budget is spent.
  std::optional<Execution> run(const ControlParameters & params, const char * branch)
  {
    if (full()) {
      return std::nullopt;
    }
    const Execution ex = execute(seed_.spec, params, config_);
    result_.records.push_back(make_record(seed_.spec.kind, mutator_, branch, params, ex));
    return ex;
  }

  RoundResult finish(bool complete)
  {
    result_.complete = complete;
    return std::move(result_);
  }

private:
  const SeedScenario & seed_;
  const CampaignConfig & config_;
  MutatorKind mutator_;
  std::size_t cap_;
  RoundResult result_;
};

}  // namespace

SearchPlan SearchPlan::defaults_for(ScenarioKind kind)
{
  SearchPlan plan;
  switch (kind) {
    case ScenarioKind::FLB:
      plan.angle_step_long = 0.04;
      plan.angle_step_lat = 0.03;
      break;
    case ScenarioKind::FLV:
    case ScenarioKind::LC:
      plan.angle_step_long = 0.05;
      plan.angle_step_lat = 0.04;
      break;
    case ScenarioKind::InC:
      plan.angle_step_long = 0.05;
      plan.angle_step_lat = 0.02;
      plan.distance_step = 4.0;
      break;
    case ScenarioKind::PSF:
    case ScenarioKind::PCF:
      plan.angle_step_long = 0.03;
      plan.angle_step_lat = 0.03;
      break;
  }
  plan.distance_schedule = schedule(kMinDistance, kMaxDistance, plan.distance_step);
  plan.speed_schedule = schedule(plan.speed_step, kMaxSpeed, plan.speed_step);
  return plan;
}

std::vector<double> SearchPlan::schedule(double lo, double hi, double step)
{
  check_step(step, "schedule step");
  std::vector<double> out;
  for (int n = 0;; ++n) {
    const double v = snap(lo + n * step);
    if (v > hi + kRangeSlack) {
      break;
    }
    out.push_back(std::min(v, hi));
  }
  return out;
}

void validate(const SearchPlan & plan)
{
  check_schedule(plan.distance_schedule, kMinDistance, kMaxDistance, false, "distance_schedule");
  check_schedule(plan.speed_schedule, 0.0, kMaxSpeed, true, "speed_schedule");
  check_step(plan.distance_step, "distance_step");
  check_step(plan.speed_step, "speed_step");
  check_step(plan.angle_step_long, "angle_step_long");
  check_step(plan.angle_step_lat, "angle_step_lat");
  if (plan.k_nc < 1) {
    throw std::invalid_argument("k_nc must be >= 1");
  }
}

std::optional<ControlParameters> mutate_step(
  const ControlParameters & p, MutationAxis axis, const SearchPlan & plan)
{
  ControlParameters out = p;
  switch (axis) {
    case MutationAxis::Distance: {
      const double d = snap(p.distance + plan.distance_step);
      if (d > kMaxDistance + kRangeSlack) {
        return std::nullopt;
      }
      out.distance = std::min(d, kMaxDistance);
      return out;
    }
    case MutationAxis::Speed: {
      const double v = snap(p.speed + plan.speed_step);
      if (v > kMaxSpeed + kRangeSlack) {
        return std::nullopt;
      }
      out.speed = std::min(v, kMaxSpeed);
      return out;
    }
    case MutationAxis::AnglePlus:
    case MutationAxis::AngleMinus: {
      const double sign = axis == MutationAxis::AnglePlus ? 1.0 : -1.0;
      if (plan.angle_mode == AngleMode::Scalar) {
        const double a = snap(p.angle + sign * plan.angle_step_lat);
        if (std::abs(a) > 1.0 + kRangeSlack) {
          return std::nullopt;
        }
        return ControlParameters::from_angle(p.distance, p.speed, std::clamp(a, -1.0, 1.0));
      }
      const double lat = snap(p.theta_lat + sign * plan.angle_step_lat);
      if (std::abs(lat) > 1.0 + kRangeSlack) {
        return std::nullopt;
      }
      return ControlParameters::from_components(
        p.distance, p.speed, p.theta_long, std::clamp(lat, -1.0, 1.0));
    }
    case MutationAxis::LongPlus:
    case MutationAxis::LongMinus: {
      const double sign = axis == MutationAxis::LongPlus ? 1.0 : -1.0;
      const double lon = snap(p.theta_long + sign * plan.angle_step_long);
      if (lon > 1.0 + kRangeSlack || lon < kRangeSlack) {
        return std::nullopt;
      }
      return ControlParameters::from_components(p.distance, p.speed, std::min(lon, 1.0), p.theta_lat);
    }
  }
  return std::nullopt;
}

SearchPlan CampaignConfig::plan_for(ScenarioKind kind) const
{
  const auto it = plans.find(kind);
  return it != plans.end() ? it->second : SearchPlan::defaults_for(kind);
}

void validate(const CampaignConfig & config)
{
  if (config.kinds.empty()) {
    throw std::invalid_argument("kinds must not be empty");
  }
  if (config.budget < 0) {
    throw std::invalid_argument("budget must be >= 0");
  }
  for (const auto kind : config.kinds) {
    validate(config.plan_for(kind));
  }
  validate(config.defect);
  validate(config.oracle);
  validate(config.sim);
}

Execution execute(const ScenarioSpec & spec, const ControlParameters & params, const CampaignConfig & config)
{
  const Trace trace = simulate(spec, params, config.sim);
  Execution ex;
  ex.type = check_ic(trace, config.defect, config.oracle);
  ex.triggered = trace.trigger_frame.has_value();
  if (trace.first_contact) {
    ex.first_contact_s = trace.frames[*trace.first_contact].t;
  }
  ex.sim_seconds = trace.first_contact ? trace.duration() : config.sim.horizon;
  return ex;
}

RoundResult run_round(const SeedScenario & seed, const CampaignConfig & config, std::size_t max_executions)
{
  if (!validate_seed(seed.spec, seed.params, config.sim)) {
    throw std::invalid_argument(
      "seed for " + std::string(to_string(seed.spec.kind)) + " is not a determined collision");
  }
  const SearchPlan plan = config.plan_for(seed.spec.kind);
  validate(plan);
  RoundRunner runner(seed, config, MutatorKind::Guided, max_executions);

  for (const double d : plan.distance_schedule) {
    for (const double v : plan.speed_schedule) {
      const ControlParameters base = with_cell(seed.params, d, v);
      const auto first = runner.run(base, "seed");
      if (!first) {
        return runner.finish(false);
      }
      if (plan.prune_untriggered && !first->triggered) {
        break;
      }
      for (const auto axis : {MutationAxis::AnglePlus, MutationAxis::AngleMinus}) {
        const char * branch = axis == MutationAxis::AnglePlus ? "+" : "-";
        int nc_streak = 0;
        for (auto p = mutate_step(base, axis, plan); p && nc_streak < plan.k_nc;
             p = mutate_step(*p, axis, plan)) {
          const auto ex = runner.run(*p, branch);
          if (!ex) {
            return runner.finish(false);
          }
          nc_streak = ex->type == ScenarioType::NC ? nc_streak + 1 : 0;
        }
      }
    }
  }
  return runner.finish(true);
}

RoundResult run_nc_start_round(
  const SeedScenario & seed, const CampaignConfig & config, std::size_t max_executions)
{
  const SearchPlan plan = config.plan_for(seed.spec.kind);
  validate(plan);

  std::vector<ControlParameters> cells;
  for (const double d : plan.distance_schedule) {
    for (const double v : plan.speed_schedule) {
      cells.push_back(with_cell(seed.params, d, v));
    }
  }
  // displacement point: the first cell, in schedule order, whose + bound does
  // not collide; the round starts there and wraps around to the earlier cells
  const auto start = std::find_if(cells.begin(), cells.end(), [&](const ControlParameters & c) {
    return !simulate(seed.spec, angle_bound(c, 1.0, plan), config.sim).first_contact;
  });
  if (start == cells.end()) {
    throw std::invalid_argument(
      "no non-colliding start point for " + std::string(to_string(seed.spec.kind)));
  }
  std::rotate(cells.begin(), start, cells.end());

  RoundRunner runner(seed, config, MutatorKind::NCStart, max_executions);
  std::optional<double> pruned_distance;
  for (const auto & base : cells) {
    if (pruned_distance && *pruned_distance == base.distance) {
      continue;
    }
    pruned_distance.reset();
    for (const auto axis : {MutationAxis::AnglePlus, MutationAxis::AngleMinus}) {
      const bool plus = axis == MutationAxis::AnglePlus;
      // bound first, then the lattice walked back toward the seed angle
      std::vector<ControlParameters> path{angle_bound(base, plus ? 1.0 : -1.0, plan)};
      auto lattice = angle_lattice(base, axis, plan);
      if (!lattice.empty() && lattice.back() == path.front()) {
        lattice.pop_back();
      }
      path.insert(path.end(), lattice.rbegin(), lattice.rend());
      // the + branch walks all the way back to the seed angle itself
      if (plus) {
        path.push_back(base);
      }
      for (const auto & p : path) {
        const auto ex = runner.run(p, plus ? "+" : "-");
        if (!ex) {
          return runner.finish(false);
        }
        if (plan.prune_untriggered && !ex->triggered) {
          pruned_distance = base.distance;
          break;
        }
      }
      if (pruned_distance) {
        break;
      }
    }
  }
  return runner.finish(true);
}

namespace
{

std::vector<OutcomeRecord> run_stepped_campaign(
  const CampaignConfig & config, const std::vector<SeedScenario> & seeds)
{
  const std::size_t n = seeds.size();
  const auto budget = static_cast<std::size_t>(config.budget);
  std::vector<std::size_t> alloc(n, budget / n);
  for (std::size_t i = 0; i < budget % n; ++i) {
    ++alloc[i];
  }
  std::vector<RoundResult> results(n);
  std::vector<bool> stale(n, true);

  auto run_one = [&](std::size_t i) {
    results[i] = config.mutator == MutatorKind::NCStart
                   ? run_nc_start_round(seeds[i], config, alloc[i])
                   : run_round(seeds[i], config, alloc[i]);
  };

  for (;;) {
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < n; ++i) {
      if (stale[i]) {
        pending.push_back(i);
      }
    }
    parallel_for(pending.size(), config.workers, [&](std::size_t j) { run_one(pending[j]); });
    std::fill(stale.begin(), stale.end(), false);

    // hand budget left over by finished rounds to the ones that were cut short
    std::size_t used = 0;
    std::vector<std::size_t> hungry;
    for (std::size_t i = 0; i < n; ++i) {
      used += results[i].records.size();
      if (!results[i].complete) {
        hungry.push_back(i);
      }
    }
    const std::size_t leftover = budget - used;
    if (leftover == 0 || hungry.empty()) {
      break;
    }
    for (std::size_t j = 0; j < hungry.size(); ++j) {
      const std::size_t i = hungry[j];
      alloc[i] = results[i].records.size() + leftover / hungry.size() + (j < leftover % hungry.size() ? 1 : 0);
      stale[i] = alloc[i] > results[i].records.size();
    }
  }

  std::vector<OutcomeRecord> out;
  for (auto & r : results) {
    out.insert(out.end(), std::make_move_iterator(r.records.begin()), std::make_move_iterator(r.records.end()));
  }
  return out;
}

std::vector<OutcomeRecord> run_random_campaign(
  const CampaignConfig & config, const std::vector<SeedScenario> & seeds)
{
  const auto budget = static_cast<std::size_t>(config.budget);
  std::mt19937_64 rng(config.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::size_t> which(budget);
  std::vector<ControlParameters> params(budget);
  for (std::size_t i = 0; i < budget; ++i) {
    which[i] = i % seeds.size();
    const SearchPlan plan = config.plan_for(seeds[which[i]].spec.kind);
    const double dlo = plan.distance_schedule.front();
    const double dhi = plan.distance_schedule.back();
    const double vlo = plan.speed_schedule.front();
    const double vhi = plan.speed_schedule.back();
    const double d = dlo + (dhi - dlo) * unit(rng);
    // 1 - u lies in (0, 1], keeping the speed strictly positive
    const double v = vlo + (vhi - vlo) * (1.0 - unit(rng));
    const double a = -1.0 + 2.0 * unit(rng);
    params[i] = ControlParameters::from_angle(d, v, a);
  }

  std::vector<OutcomeRecord> out(budget);
  parallel_for(budget, config.workers, [&](std::size_t i) {
    const auto & seed = seeds[which[i]];
    out[i] = make_record(
      seed.spec.kind, MutatorKind::Random, "random", params[i], execute(seed.spec, params[i], config));
  });
  return out;
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig & config)
{
  validate(config);
  CampaignResult result;
  result.budget = config.budget;

  std::vector<SeedScenario> seeds;
  for (const auto kind : config.kinds) {
    seeds.push_back(make_seed(kind, config.scenario));
    result.seed_valid[kind] = validate_seed(seeds.back().spec, seeds.back().params, config.sim);
  }
  if (config.budget == 0) {
    return result;
  }

  result.records = config.mutator == MutatorKind::Random ? run_random_campaign(config, seeds)
                                                         : run_stepped_campaign(config, seeds);
  double elapsed = 0.0;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    auto & r = result.records[i];
    r.ordinal = i;
    elapsed += r.sim_seconds;
    r.elapsed_s = elapsed;
  }
  return result;
}

std::vector<LabeledTrace> labeled_set(const CampaignConfig & config)
{
  const CampaignResult result = run_campaign(config);
  std::map<ScenarioKind, SeedScenario> seeds;
  for (const auto kind : config.kinds) {
    seeds.emplace(kind, make_seed(kind, config.scenario));
  }
  std::vector<LabeledTrace> out;
  for (const auto & r : result.records) {
    if (!r.first_contact_s) {
      continue;
    }
    out.push_back(label_trace(simulate(seeds.at(r.kind).spec, r.params, config.sim), config.defect));
  }
  return out;
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view name)
{
  if (name == "distance") {
    return SweepAxis::Distance;
  }
  if (name == "speed") {
    return SweepAxis::Speed;
  }
  if (name == "angle") {
    return SweepAxis::Angle;
  }
  if (name == "angle_long") {
    return SweepAxis::AngleLong;
  }
  if (name == "angle_lat") {
    return SweepAxis::AngleLat;
  }
  return std::nullopt;
}

std::vector<StepSweepPoint> step_size_sweep(
  ScenarioKind kind, SweepAxis axis, const std::vector<double> & steps, int trials,
  const CampaignConfig & config)
{
  if (steps.empty()) {
    throw std::invalid_argument("step list must not be empty");
  }
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  for (const double s : steps) {
    check_step(s, "step");
    const double span = axis == SweepAxis::Distance ? kMaxDistance - kMinDistance
                        : axis == SweepAxis::Speed  ? kMaxSpeed
                        : axis == SweepAxis::AngleLong ? 1.0
                                                       : 2.0;
    if (s > span + kRangeSlack) {
      throw std::invalid_argument("step exceeds the range span");
    }
  }
  const SeedScenario seed = make_seed(kind, config.scenario);
  const SearchPlan base_plan = config.plan_for(kind);

  // the random part of each trial, shared by all step sizes
  struct Draw
  {
    double distance;
    double speed;
    double angle;
    double theta_long;
    double theta_lat;
  };
  std::vector<Draw> draws;
  for (int j = 0; j < trials; ++j) {
    std::seed_seq seq{config.rng_seed, static_cast<std::uint64_t>(j)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Draw d{};
    d.distance = kMinDistance + (kMaxDistance - kMinDistance) * unit(rng);
    d.speed = kMaxSpeed * (1.0 - unit(rng));
    d.angle = -1.0 + 2.0 * unit(rng);
    d.theta_long = 1.0 - unit(rng);
    d.theta_lat = -1.0 + 2.0 * unit(rng);
    draws.push_back(d);
  }

  auto count_ics = [&](const std::vector<ControlParameters> & order, bool stop_on_nc, const SearchPlan & plan) {
    int ics = 0;
    int streak = 0;
    for (const auto & p : order) {
      const auto ex = execute(seed.spec, p, config);
      ics += ex.type == ScenarioType::IC ? 1 : 0;
      streak = ex.type == ScenarioType::NC ? streak + 1 : 0;
      if (stop_on_nc && streak >= plan.k_nc) {
        break;
      }
    }
    return ics;
  };

  std::vector<StepSweepPoint> out;
  for (const double step : steps) {
    const SearchPlan & plan = base_plan;
    StepSweepPoint point{step, 0.0, std::vector<int>(static_cast<std::size_t>(trials), 0)};
    parallel_for(draws.size(), config.workers, [&](std::size_t j) {
      const Draw & dr = draws[j];
      int ics = 0;
      switch (axis) {
        case SweepAxis::Distance:
        case SweepAxis::Speed: {
          const bool dist = axis == SweepAxis::Distance;
          SearchPlan local = plan;
          local.distance_step = dist ? step : plan.distance_step;
          local.speed_step = dist ? plan.speed_step : step;
          ControlParameters p = ControlParameters::from_angle(
            dist ? kMinDistance : dr.distance, dist ? dr.speed : step, dr.angle);
          std::vector<ControlParameters> order{p};
          const auto ax = dist ? MutationAxis::Distance : MutationAxis::Speed;
          for (auto q = mutate_step(p, ax, local); q; q = mutate_step(*q, ax, local)) {
            order.push_back(*q);
          }
          ics = count_ics(order, false, local);
          break;
        }
        case SweepAxis::Angle:
        case SweepAxis::AngleLat:
        case SweepAxis::AngleLong: {
          SearchPlan local = plan;
          ControlParameters base;
          std::vector<MutationAxis> branches;
          if (axis == SweepAxis::Angle) {
            local.angle_mode = AngleMode::Scalar;
            local.angle_step_lat = step;
            base = with_cell(seed.params, dr.distance, dr.speed);
            branches = {MutationAxis::AnglePlus, MutationAxis::AngleMinus};
          } else if (axis == SweepAxis::AngleLat) {
            local.angle_mode = AngleMode::PerAxis;
            local.angle_step_lat = step;
            base = ControlParameters::from_components(dr.distance, dr.speed, dr.theta_long, 0.0);
            branches = {MutationAxis::AnglePlus, MutationAxis::AngleMinus};
          } else {
            local.angle_mode = AngleMode::PerAxis;
            local.angle_step_long = step;
            base = ControlParameters::from_components(dr.distance, dr.speed, 1.0, dr.theta_lat);
            branches = {MutationAxis::LongMinus};
          }
          const auto first = execute(seed.spec, base, config);
          ics = first.type == ScenarioType::IC ? 1 : 0;
          if (local.prune_untriggered && !first.triggered) {
            break;
          }
          for (const auto b : branches) {
            ics += count_ics(angle_lattice(base, b, local), true, local);
          }
          break;
        }
      }
      point.per_trial[j] = ics;
    });
    double sum = 0.0;
    for (const int c : point.per_trial) {
      sum += c;
    }
    point.mean_ics = sum / trials;
    out.push_back(point);
  }
  return out;
}

}  // namespace icsfuzz
