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

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "debris_ews/rainfall.hpp"
#include "debris_ews/types.hpp"

namespace debris_ews {

// Per-station, per-year EAR alert thresholds in mm.
class ThresholdTable {
 public:
  // Official tables hold expert thresholds: 200..600 mm in 50 mm steps.
  // Swept tables accept any positive value.
  enum class Kind { kOfficial, kSwept };

  explicit ThresholdTable(Kind kind = Kind::kOfficial) : kind_(kind) {}

  void set(const std::string& station_id, int year, double threshold_mm);
  // Throws InputError when the station/year pair has no entry.
  double at(const std::string& station_id, int year) const;
  bool contains(const std::string& station_id, int year) const;

  Kind kind() const { return kind_; }
  const std::map<std::pair<std::string, int>, double>& entries() const {
    return entries_;
  }
  // Every threshold multiplied by `scale`; the result is a swept table.
  ThresholdTable scaled(double scale) const;

 private:
  Kind kind_;
  std::map<std::pair<std::string, int>, double> entries_;
};

struct AlertPolicy {
  // When set, an alert stays on from the first crossing until the event is
  // confirmed over (end of the quiet period after the last wet hour).
  bool latch = false;
  int quiet_hours = kQuietHours;
};

using Predictions = Eigen::VectorXi;

// Alerts for one event trace, indexed like trace.ear. An hour alerts when
// its EAR reaches the threshold (>=).
Predictions etm_predict(const EarTrace& trace, double threshold_mm,
                        const AlertPolicy& policy = {});
Predictions hm_predict(const EarTrace& trace, double uniform_threshold_mm,
                       const AlertPolicy& policy = {});

// Per-hour alerts over a whole series. Hours outside main events are
// negative unless covered by a latched alert.
Predictions alerts_for_series(const RainSeries& series, double threshold_mm,
                              const EarOptions& ear = {}, const AlertPolicy& policy = {});

// Continuous score equivalent of the threshold rule: alert(threshold) is
// exactly score >= threshold for these scores. Latched alerts carry the
// event's peak EAR through the quiet period.
Vector ear_alert_scores(const RainSeries& series, const EarOptions& ear = {},
                        const AlertPolicy& policy = {});

// Scale factors 0, step, 2*step, ... up to the first value at which no score
// in `max_ratio` (max EAR / station threshold) still alerts.
std::vector<double> etm_scale_grid(double max_ratio, double scale_step = 0.001);

// 0..max_ear in `steps` uniform steps, plus the nine marked thresholds
// 200, 250, ..., 600 mm, sorted and deduplicated. The last grid point is
// strictly above max_ear so the sweep ends with no alerts.
std::vector<double> hm_threshold_grid(double max_ear, int steps);
std::vector<double> hm_marked_thresholds();

struct SweepPoint {
  double parameter;  // scale (ETM) or threshold in mm (HM)
  Predictions predictions;
};

// Sweeps over a set of per-hour station-normalised EAR scores
// (ear / official threshold): prediction at scale s is ratio >= s.
std::vector<SweepPoint> sweep_etm(const Vector& ear_over_threshold,
                                  const std::vector<double>& scales);
std::vector<SweepPoint> sweep_hm(const Vector& ear,
                                 const std::vector<double>& thresholds);

}  // namespace debris_ews
