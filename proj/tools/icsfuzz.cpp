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


// icsfuzz command line: run, replay, sweep-step, sweep-threshold, report.
//
// Exit status: 0 success, 1 config or usage error, 2 I/O error,
// 3 internal invariant violation (e.g. a replay that disagrees with its log).

#include "icsfuzz/config.hpp"
#include "icsfuzz/fuzzer.hpp"
#include "icsfuzz/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace icsfuzz;

namespace
{

enum Exit { kOk = 0, kConfig = 1, kIo = 2, kInvariant = 3 };

struct Failure
{
  Exit code;
  std::string message;
};

[[noreturn]] void die(Exit code, const std::string & message) { throw Failure{code, message}; }

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    die(kIo, "cannot read " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const fs::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    die(kIo, "cannot write " + path.string());
  }
  return out;
}

CampaignConfig load_config(const std::string & path, std::string * text = nullptr)
{
  std::string bytes = read_file(path);
  try {
    CampaignConfig c = parse_config(bytes);
    if (text) {
      *text = std::move(bytes);
    }
    return c;
  } catch (const ConfigError & e) {
    die(kConfig, path + ": " + e.what());
  }
}

std::vector<double> parse_list(const std::string & text, const char * what)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      die(kConfig, std::string(what) + ": empty list element");
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception &) {
      die(kConfig, std::string(what) + ": not a number: \"" + item + "\"");
    }
  }
  if (out.empty()) {
    die(kConfig, std::string(what) + ": empty list");
  }
  return out;
}

std::vector<OutcomeRecord> load_records(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    die(kIo, "cannot read " + path);
  }
  try {
    return read_records_jsonl(in);
  } catch (const std::exception & e) {
    die(kIo, path + ": " + e.what());
  }
}

std::string fmt(double v, const char * spec = "%.6f")
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

int cmd_run(const std::string & config_path, const std::string & out_dir)
{
  std::string text;
  const CampaignConfig config = load_config(config_path, &text);
  const CampaignResult result = run_campaign(config);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    die(kIo, "cannot create " + out_dir + ": " + ec.message());
  }
  {
    auto out = open_out(fs::path(out_dir) / "records.jsonl");
    write_records_jsonl(out, result.records);
  }
  {
    auto out = open_out(fs::path(out_dir) / "manifest.json");
    out << make_manifest(text, config, result).dump(2) << '\n';
  }
  const SRReport report = success_rates(result.records);
  {
    auto out = open_out(fs::path(out_dir) / "report.csv");
    write_csv(out, report);
  }

  for (const auto kind : config.kinds) {
    const auto it = report.kinds.find(kind);
    const KindSummary s = it != report.kinds.end() ? it->second : KindSummary{};
    std::cout << to_string(kind) << " executions=" << s.executions << " ic=" << s.ics
              << " dc=" << s.dc << " seed=" << (result.seed_valid.at(kind) ? "valid" : "invalid")
              << " first_ic_s="
              << (s.time_to_first_ics ? fmt(*s.time_to_first_ics, "%.2f") : std::string("-")) << '\n';
  }
  return kOk;
}

int cmd_replay(
  const std::string & log_path, std::uint64_t ordinal, bool perfect, const std::string & manifest_opt,
  const std::string & trace_path)
{
  const auto records = load_records(log_path);
  const fs::path manifest_path =
    manifest_opt.empty() ? fs::path(log_path).parent_path() / "manifest.json" : fs::path(manifest_opt);
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(manifest_path.string()));
  } catch (const nlohmann::json::exception & e) {
    die(kIo, manifest_path.string() + ": " + e.what());
  }
  if (!manifest.contains("config")) {
    die(kIo, manifest_path.string() + ": no embedded config");
  }
  CampaignConfig config;
  try {
    config = config_from_json(manifest["config"]);
  } catch (const ConfigError & e) {
    die(kConfig, manifest_path.string() + ": " + e.what());
  }

  const auto it = std::find_if(
    records.begin(), records.end(), [&](const OutcomeRecord & r) { return r.ordinal == ordinal; });
  if (it == records.end()) {
    die(kIo, "ordinal " + std::to_string(ordinal) + " not in " + log_path);
  }

  const SeedScenario seed = make_seed(it->kind, config.scenario);
  const Trace trace = simulate(seed.spec, it->params, config.sim);
  const DefectModel defect = perfect ? DefectModel::perfect() : config.defect;
  const ScenarioType verdict = check_ic(trace, defect, config.oracle);

  if (!trace_path.empty()) {
    auto out = open_out(trace_path);
    write_trace_jsonl(out, trace);
  }
  std::cout << "ordinal=" << ordinal << " kind=" << to_string(it->kind)
            << " logged=" << to_string(it->type) << " replayed=" << to_string(verdict)
            << (perfect ? " detector=perfect" : "") << '\n';

  if (perfect) {
    if (verdict == ScenarioType::IC) {
      die(kInvariant, "perfect detector produced an IC verdict");
    }
    return kOk;
  }
  if (verdict != it->type) {
    die(kInvariant, "replayed verdict differs from the log");
  }
  return kOk;
}

CampaignConfig config_or_default(const std::string & path)
{
  return path.empty() ? CampaignConfig{} : load_config(path);
}

int cmd_sweep_step(
  const std::string & kind_name, const std::string & axis_name, const std::string & steps_text,
  int trials, const std::string & config_path, const std::string & out_path)
{
  const auto kind = parse_kind(kind_name);
  if (!kind) {
    die(kConfig, "unknown kind \"" + kind_name + "\"");
  }
  const auto axis = parse_sweep_axis(axis_name);
  if (!axis) {
    die(kConfig, "unknown axis \"" + axis_name + "\"");
  }
  const auto steps = parse_list(steps_text, "--steps");
  if (trials < 1) {
    die(kConfig, "--trials must be >= 1");
  }
  const CampaignConfig config = config_or_default(config_path);

  std::vector<StepSweepPoint> points;
  try {
    points = step_size_sweep(*kind, *axis, steps, trials, config);
  } catch (const std::invalid_argument & e) {
    die(kConfig, e.what());
  }

  std::ostringstream csv;
  csv << "step,mean_ics,trials\n";
  for (const auto & p : points) {
    csv << fmt(p.step, "%g") << ',' << fmt(p.mean_ics) << ',' << p.per_trial.size() << '\n';
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    open_out(out_path) << csv.str();
  }
  return kOk;
}

int cmd_sweep_threshold(
  const std::string & thresholds_text, const std::string & config_path, std::int64_t budget,
  const std::string & out_path)
{
  const auto thresholds = parse_list(thresholds_text, "--thresholds");
  for (const double t : thresholds) {
    if (!(t >= 0.0 && t < 1.0)) {
      die(kConfig, "--thresholds: " + fmt(t, "%g") + " outside range [0, 1)");
    }
  }
  CampaignConfig config = config_or_default(config_path);
  if (config_path.empty()) {
    config.kinds = {ScenarioKind::FLB, ScenarioKind::LC, ScenarioKind::PSF};
  }
  config.mutator = MutatorKind::Guided;
  if (budget > 0) {
    config.budget = budget;
  }

  const auto labeled = labeled_set(config);
  if (labeled.empty()) {
    die(kConfig, "campaign produced no collisions to label");
  }
  const auto metrics = recall_sweep(labeled, thresholds);

  auto opt = [](const std::optional<double> & v) { return v ? fmt(*v) : std::string(); };
  std::ostringstream csv;
  csv << "threshold,tp,fp,fn,precision,recall\n";
  for (const auto & m : metrics) {
    csv << fmt(m.threshold, "%g") << ',' << m.true_positives << ',' << m.false_positives << ','
        << m.false_negatives << ',' << opt(m.precision) << ',' << opt(m.recall) << '\n';
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    open_out(out_path) << csv.str();
  }
  return kOk;
}

int cmd_report(const std::string & log_path, const std::string & format, const std::string & out_path)
{
  const SRReport report = success_rates(load_records(log_path));
  std::ostringstream body;
  if (format == "csv") {
    write_csv(body, report);
  } else {
    write_svg(body, report);
  }
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    open_out(out_path) << body.str();
  }
  return kOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"icsfuzz: search for collisions the built-in detector ignores"};
  app.require_subcommand(1);

  std::string config_path, out_dir, log_path, manifest_path, trace_path, out_path;
  std::string kind, axis, steps, thresholds, format{"csv"};
  std::uint64_t ordinal = 0;
  bool perfect = false;
  int trials = 10;
  std::int64_t budget = 0;

  auto * run = app.add_subcommand("run", "run a campaign");
  run->add_option("--config", config_path, "campaign config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory")->required();

  auto * replay = app.add_subcommand("replay", "re-simulate one logged execution");
  replay->add_option("--log", log_path, "records.jsonl")->required();
  replay->add_option("--ordinal", ordinal, "execution ordinal")->required();
  replay->add_option("--manifest", manifest_path, "manifest (default: next to the log)");
  replay->add_option("--trace", trace_path, "write the frame trace as JSONL");
  replay->add_flag("--perfect", perfect, "replay against a perfect detector");

  auto * sweep_step = app.add_subcommand("sweep-step", "ICS count versus step size");
  sweep_step->add_option("--kind", kind, "scenario kind")->required();
  sweep_step->add_option("--axis", axis, "distance|speed|angle|angle_long|angle_lat")->required();
  sweep_step->add_option("--steps", steps, "comma separated step values")->required();
  sweep_step->add_option("--trials", trials, "trials per step");
  sweep_step->add_option("--config", config_path, "campaign config for defect/sim/rng_seed");
  sweep_step->add_option("--out", out_path, "CSV path (default stdout)");

  auto * sweep_threshold = app.add_subcommand("sweep-threshold", "oracle recall versus IoU threshold");
  sweep_threshold->add_option("--thresholds", thresholds, "comma separated thresholds")->required();
  sweep_threshold->add_option("--config", config_path, "campaign config (default FLB, LC, PSF)");
  sweep_threshold->add_option("--budget", budget, "override the campaign budget");
  sweep_threshold->add_option("--out", out_path, "CSV path (default stdout)");

  auto * report = app.add_subcommand("report", "aggregate a result log");
  report->add_option("--log", log_path, "records.jsonl")->required();
  report->add_option("--format", format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
  report->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*run) {
      return cmd_run(config_path, out_dir);
    }
    if (*replay) {
      return cmd_replay(log_path, ordinal, perfect, manifest_path, trace_path);
    }
    if (*sweep_step) {
      return cmd_sweep_step(kind, axis, steps, trials, config_path, out_path);
    }
    if (*sweep_threshold) {
      return cmd_sweep_threshold(thresholds, config_path, budget, out_path);
    }
    return cmd_report(log_path, format, out_path);
  } catch (const Failure & f) {
    std::cerr << "icsfuzz: " << f.message << '\n';
    return f.code;
  } catch (const SimulationError & e) {
    std::cerr << "icsfuzz: simulation: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::invalid_argument & e) {
    std::cerr << "icsfuzz: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception & e) {
    std::cerr << "icsfuzz: internal error: " << e.what() << '\n';
    return kInvariant;
  }
}
