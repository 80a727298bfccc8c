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
#include "icsfuzz/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace icsfuzz
{

namespace
{

constexpr double kBoundaryTolerance = 1e-9;
constexpr double kNeutralAngle = 0.05;

std::size_t upper_index(const std::vector<double> & upper, double value)
{
  for (std::size_t i = 0; i < upper.size(); ++i) {
    if (value <= upper[i] + kBoundaryTolerance) {
      return i;
    }
  }
  return upper.size() - 1;
}

std::string format_number(double v, const char * fmt = "%g")
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

std::size_t BucketScheme::distance_index(double distance) const
{
  return upper_index(distance_upper, distance);
}

std::size_t BucketScheme::speed_index(double speed) const
{
  return upper_index(speed_upper, speed);
}

std::size_t BucketScheme::angle_index(double angle) const
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < angle_centers.size(); ++i) {
    if (std::abs(angle - angle_centers[i]) < std::abs(angle - angle_centers[best])) {
      best = i;
    }
  }
  return best;
}

std::string BucketScheme::angle_label(std::size_t index) const
{
  return format_number(angle_centers.at(index));
}

BucketLabels bucket(const ControlParameters & params, const BucketScheme & scheme)
{
  return BucketLabels{
    scheme.distance_labels.at(scheme.distance_index(params.distance)),
    scheme.speed_labels.at(scheme.speed_index(params.speed)),
    scheme.angle_centers.at(scheme.angle_index(params.angle))};
}

CategoryLabel categorize(const ControlParameters & p)
{
  CategoryLabel c;
  c.distance = p.distance <= 3.0 + kBoundaryTolerance   ? 'L'
               : p.distance <= 5.0 + kBoundaryTolerance ? 'M'
                                                        : 'F';
  c.speed = p.speed <= 20.0 + kBoundaryTolerance   ? 'L'
            : p.speed <= 40.0 + kBoundaryTolerance ? 'M'
                                                   : 'H';
  c.angle = p.angle < -kNeutralAngle ? 'N' : p.angle > kNeutralAngle ? 'P' : '0';
  return c;
}

std::optional<double> BucketCounts::success_rate() const
{
  if (collisions() <= 0) {
    return std::nullopt;
  }
  return static_cast<double>(ics) / collisions();
}

void BucketCounts::add(ScenarioType type)
{
  ++executions;
  switch (type) {
    case ScenarioType::IC:
      ++ics;
      break;
    case ScenarioType::DC:
      ++dc;
      break;
    case ScenarioType::NC:
      ++nc;
      break;
    case ScenarioType::FP:
      ++fp;
      break;
  }
}

double SRReport::ics_proportion() const
{
  return executions > 0 ? static_cast<double>(ics) / executions : 0.0;
}

const std::vector<BucketCounts> & SRReport::axis(Axis a) const
{
  switch (a) {
    case Axis::Distance:
      return distance;
    case Axis::Speed:
      return speed;
    case Axis::Angle:
      return angle;
  }
  throw std::logic_error("unknown axis");
}

SRReport success_rates(const std::vector<OutcomeRecord> & records, const BucketScheme & scheme)
{
  SRReport report;
  report.scheme = scheme;
  const std::size_t nd = scheme.distance_labels.size();
  const std::size_t ns = scheme.speed_labels.size();
  const std::size_t na = scheme.angle_centers.size();
  report.distance.assign(nd, {});
  report.speed.assign(ns, {});
  report.angle.assign(na, {});
  report.distance_speed.cells.assign(nd, std::vector<BucketCounts>(ns));
  report.speed_angle.cells.assign(ns, std::vector<BucketCounts>(na));
  report.distance_angle.cells.assign(nd, std::vector<BucketCounts>(na));

  for (const auto & r : records) {
    const std::size_t di = scheme.distance_index(r.params.distance);
    const std::size_t si = scheme.speed_index(r.params.speed);
    const std::size_t ai = scheme.angle_index(r.params.angle);
    report.distance[di].add(r.type);
    report.speed[si].add(r.type);
    report.angle[ai].add(r.type);
    report.distance_speed.cells[di][si].add(r.type);
    report.speed_angle.cells[si][ai].add(r.type);
    report.distance_angle.cells[di][ai].add(r.type);

    ++report.executions;
    auto & k = report.kinds[r.kind];
    ++k.executions;
    k.seconds += r.sim_seconds;
    if (r.type == ScenarioType::IC) {
      ++report.ics;
      ++k.ics;
      if (!k.time_to_first_ics) {
        k.time_to_first_ics = k.seconds;
      }
    } else if (r.type == ScenarioType::DC) {
      ++k.dc;
    }
  }
  return report;
}

std::vector<CategoryRow> categorize_ics(const std::vector<OutcomeRecord> & records)
{
  struct Acc
  {
    int count{0};
    double elapsed{0.0};
  };
  std::map<std::pair<ScenarioKind, CategoryLabel>, Acc> rows;
  for (const auto & r : records) {
    if (r.type != ScenarioType::IC) {
      continue;
    }
    auto & acc = rows[{r.kind, categorize(r.params)}];
    ++acc.count;
    acc.elapsed += r.elapsed_s;
  }
  std::vector<CategoryRow> out;
  out.reserve(rows.size());
  for (const auto & [key, acc] : rows) {
    out.push_back({key.first, key.second, acc.count, acc.elapsed / acc.count});
  }
  return out;
}

double mean_time_to_first_ics(const SRReport & report, const std::vector<ScenarioKind> & kinds)
{
  if (kinds.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (const auto kind : kinds) {
    const auto it = report.kinds.find(kind);
    if (it == report.kinds.end()) {
      continue;
    }
    total += it->second.time_to_first_ics.value_or(it->second.seconds);
  }
  return total / static_cast<double>(kinds.size());
}

namespace
{

std::vector<double> average_ranks(const std::vector<double> & v)
{
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) {
      ++j;
    }
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      ranks[order[k]] = rank;
    }
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::optional<double> spearman(const std::vector<double> & x, const std::vector<double> & y)
{
  if (x.size() != y.size() || x.size() < 2) {
    return std::nullopt;
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    return std::nullopt;
  }
  return sxy / std::sqrt(sxx * syy);
}

namespace
{

const char * axis_name(Axis a)
{
  switch (a) {
    case Axis::Distance:
      return "distance";
    case Axis::Speed:
      return "speed";
    case Axis::Angle:
      return "angle";
  }
  return "?";
}

std::string label_of(const BucketScheme & s, Axis a, std::size_t i)
{
  switch (a) {
    case Axis::Distance:
      return s.distance_labels.at(i);
    case Axis::Speed:
      return s.speed_labels.at(i);
    case Axis::Angle:
      return s.angle_label(i);
  }
  return "?";
}

void csv_row(std::ostream & out, const std::string & axis, const std::string & bucket, const BucketCounts & c)
{
  out << axis << ',' << bucket << ',' << c.executions << ',' << c.collisions() << ',' << c.ics << ',';
  if (const auto sr = c.success_rate()) {
    out << format_number(100.0 * *sr, "%.4f");
  }
  out << '\n';
}

}  // namespace

void write_csv(std::ostream & out, const SRReport & report)
{
  out << "axis,bucket,executions,collisions,ics,sr_percent\n";
  for (const Axis a : {Axis::Distance, Axis::Speed, Axis::Angle}) {
    const auto & counts = report.axis(a);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i].executions > 0) {
        csv_row(out, axis_name(a), label_of(report.scheme, a, i), counts[i]);
      }
    }
  }
  for (const CrossMatrix * m : {&report.distance_speed, &report.speed_angle, &report.distance_angle}) {
    const std::string axis = std::string(axis_name(m->rows)) + "*" + axis_name(m->cols);
    for (std::size_t i = 0; i < m->cells.size(); ++i) {
      for (std::size_t j = 0; j < m->cells[i].size(); ++j) {
        if (m->cells[i][j].executions > 0) {
          csv_row(
            out, axis, label_of(report.scheme, m->rows, i) + "|" + label_of(report.scheme, m->cols, j),
            m->cells[i][j]);
        }
      }
    }
  }
}

void write_svg(std::ostream & out, const SRReport & report)
{
  constexpr int panel_w = 360;
  constexpr int panel_h = 220;
  constexpr int margin = 40;
  constexpr int plot_h = panel_h - 2 * margin;
  const int width = 3 * panel_w;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << panel_h
      << "\" viewBox=\"0 0 " << width << ' ' << panel_h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  int panel = 0;
  for (const Axis a : {Axis::Distance, Axis::Speed, Axis::Angle}) {
    const auto & counts = report.axis(a);
    const int x0 = panel * panel_w + margin;
    const int plot_w = panel_w - 2 * margin;
    const double bar_w = static_cast<double>(plot_w) / static_cast<double>(counts.size());
    out << "<g>\n";
    out << "<text x=\"" << x0 << "\" y=\"" << margin / 2 << "\" font-size=\"12\">SR (%) by "
        << axis_name(a) << "</text>\n";
    out << "<line x1=\"" << x0 << "\" y1=\"" << margin + plot_h << "\" x2=\"" << x0 + plot_w
        << "\" y2=\"" << margin + plot_h << "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double sr = counts[i].success_rate().value_or(0.0);
      const double h = sr * plot_h;
      const double x = x0 + static_cast<double>(i) * bar_w;
      out << "<rect x=\"" << format_number(x + 0.1 * bar_w, "%.2f") << "\" y=\""
          << format_number(margin + plot_h - h, "%.2f") << "\" width=\""
          << format_number(0.8 * bar_w, "%.2f") << "\" height=\"" << format_number(h, "%.2f")
          << "\" fill=\"steelblue\"/>\n";
      out << "<text x=\"" << format_number(x + 0.5 * bar_w, "%.2f") << "\" y=\""
          << margin + plot_h + 14 << "\" font-size=\"9\" text-anchor=\"middle\">"
          << label_of(report.scheme, a, i) << "</text>\n";
    }
    out << "</g>\n";
    ++panel;
  }
  out << "</svg>\n";
}

}  // namespace icsfuzz
