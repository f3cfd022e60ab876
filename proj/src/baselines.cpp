/*
 * Copyright 2026 The debris-ews Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "debris_ews/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace debris_ews {

void ThresholdTable::set(const std::string& station_id, int year, double threshold_mm) {
  if (!(threshold_mm > 0.0) || !std::isfinite(threshold_mm)) {
    throw InputError("threshold for station '" + station_id + "' must be positive");
  }
  if (kind_ == Kind::kOfficial) {
    const double steps = (threshold_mm - 200.0) / 50.0;
    if (threshold_mm < 200.0 || threshold_mm > 600.0 || steps != std::floor(steps)) {
      throw InputError("official threshold for station '" + station_id +
                       "' must lie in 200..600 mm in 50 mm increments");
    }
  }
  entries_[{station_id, year}] = threshold_mm;
}

double ThresholdTable::at(const std::string& station_id, int year) const {
  auto it = entries_.find({station_id, year});
  if (it == entries_.end()) {
    throw InputError("no EAR threshold for station '" + station_id + "' in " +
                     std::to_string(year));
  }
  return it->second;
}

bool ThresholdTable::contains(const std::string& station_id, int year) const {
  return entries_.count({station_id, year}) > 0;
}

ThresholdTable ThresholdTable::scaled(double scale) const {
  ThresholdTable out(Kind::kSwept);
  for (const auto& [key, thr] : entries_) out.entries_[key] = thr * scale;
  return out;
}

Predictions etm_predict(const EarTrace& trace, double threshold_mm,
                        const AlertPolicy& policy) {
  if (!(threshold_mm > 0.0)) throw InputError("EAR threshold must be > 0");
  Predictions out = Predictions::Zero(trace.ear.size());
  bool on = false;
  for (Index t = 0; t < trace.ear.size(); ++t) {
    const bool crossed = trace.ear[t] >= threshold_mm;
    on = policy.latch ? (on || crossed) : crossed;
    out[t] = on ? 1 : 0;
  }
  return out;
}

Predictions hm_predict(const EarTrace& trace, double uniform_threshold_mm,
                       const AlertPolicy& policy) {
  return etm_predict(trace, uniform_threshold_mm, policy);
}

Vector ear_alert_scores(const RainSeries& series, const EarOptions& ear,
                        const AlertPolicy& policy) {
  Vector scores = Vector::Zero(series.size());
  const auto events = segment_events(series, ear.rain_threshold, ear.quiet_hours);
  for (std::size_t k = 0; k < events.size(); ++k) {
    const MainEvent& ev = events[k];
    const EarTrace trace = ear_trace(series, ev, ear.alpha, ear.mode);
    // EAR is non-decreasing inside an event, so the running maximum equals
    // the trace itself and latching only matters after the last wet hour.
    scores.segment(ev.start_idx, ev.length()) = trace.ear;
    if (policy.latch) {
      Index stop = std::min<Index>(ev.end_idx + policy.quiet_hours, series.size() - 1);
      if (k + 1 < events.size()) stop = std::min(stop, events[k + 1].start_idx - 1);
      for (Index h = ev.end_idx + 1; h <= stop; ++h) scores[h] = trace.ear[ev.length() - 1];
    }
  }
  return scores;
}

Predictions alerts_for_series(const RainSeries& series, double threshold_mm,
                              const EarOptions& ear, const AlertPolicy& policy) {
  if (!(threshold_mm > 0.0)) throw InputError("EAR threshold must be > 0");
  const Vector scores = ear_alert_scores(series, ear, policy);
  return (scores.array() >= threshold_mm).cast<int>();
}

std::vector<double> etm_scale_grid(double max_ratio, double scale_step) {
  if (!(scale_step > 0.0)) throw InputError("scale step must be > 0");
  std::vector<double> grid;
  // Integer stepping avoids drift from repeated addition.
  for (long k = 0;; ++k) {
    const double s = static_cast<double>(k) * scale_step;
    grid.push_back(s);
    if (s > max_ratio) break;
  }
  return grid;
}

std::vector<double> hm_marked_thresholds() {
  std::vector<double> marks;
  for (int mm = 200; mm <= 600; mm += 50) marks.push_back(mm);
  return marks;
}

std::vector<double> hm_threshold_grid(double max_ear, int steps) {
  if (steps < 1) throw InputError("HM sweep needs at least one step");
  if (!(max_ear >= 0.0)) throw InputError("max EAR must be >= 0");
  std::vector<double> grid;
  const double top = max_ear > 0.0 ? max_ear : 1.0;
  for (int k = 0; k <= steps; ++k) grid.push_back(top * k / steps);
  grid.push_back(std::nextafter(top, std::numeric_limits<double>::infinity()));
  for (double m : hm_marked_thresholds()) grid.push_back(m);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

namespace {

std::vector<SweepPoint> sweep(const Vector& scores, const std::vector<double>& params) {
  std::vector<SweepPoint> out;
  out.reserve(params.size());
  for (double p : params) {
    out.push_back({p, (scores.array() >= p).cast<int>()});
  }
  return out;
}

}  // namespace

std::vector<SweepPoint> sweep_etm(const Vector& ear_over_threshold,
                                  const std::vector<double>& scales) {
  return sweep(ear_over_threshold, scales);
}

std::vector<SweepPoint> sweep_hm(const Vector& ear, const std::vector<double>& thresholds) {
  return sweep(ear, thresholds);
}

}  // namespace debris_ews
