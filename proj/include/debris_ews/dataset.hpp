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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "debris_ews/baselines.hpp"
#include "debris_ews/io.hpp"
#include "debris_ews/rainfall.hpp"
#include "debris_ews/types.hpp"

namespace debris_ews {

enum class WindowKind { kPositive, kNegative };
std::string_view to_string(WindowKind kind);

// One positive (debris flow) or negative (rain, no flow) event window.
struct DatasetWindow {
  std::string id;
  WindowKind kind = WindowKind::kNegative;
  RainSeries rain;        // the window's own hours
  Index origin_idx = 0;   // offset of rain.start() in the station series
  std::optional<Index> debris_flow_idx;  // window-relative, positive only
  Index main_event_start = 0;            // window-relative

  Index length() const { return rain.size(); }
  const std::string& station_id() const { return rain.station_id(); }
};

struct WindowConfig {
  int antecedent_hours = 7 * 24;
  int tail_hours = 24;
  double rain_threshold = kMainEventThresholdMm;
  int quiet_hours = kQuietHours;
  // A negative window needs a run of this many consecutive wet hours.
  int min_wet_run = 2;
};

struct WindowBuildResult {
  std::vector<DatasetWindow> windows;  // positives and negatives, time order
  std::vector<std::string> warnings;   // skipped debris flows and the like
};

// Builds the windows of one station. `flows` are the station's debris-flow
// times, sorted. Flows outside the series, or falling inside an earlier
// positive window, are skipped and reported.
WindowBuildResult build_windows(const RainSeries& series,
                                const std::vector<Timestamp>& flows,
                                const WindowConfig& config = {});

// All stations of a corpus. Windows come back sorted by id.
WindowBuildResult build_windows(const RainfallData& rain,
                                const std::vector<DebrisFlowEvent>& flows,
                                const WindowConfig& config = {});

struct LabelingConfig {
  int lead_time_h = 12;
};

// Per-hour labels: the flow hour and the `lead_time_h` hours before it are
// positive (clipped at the window start); everything else is negative.
Labels label_hours(const DatasetWindow& window, const LabelingConfig& cfg = {});

enum class PaddingMode {
  kZeroPad,          // one example per hour, missing history reads 0 mm
  kSkipIncomplete,   // drop the first hours whose history leaves the window
};

struct FeatureSpec {
  int hourly_hours = 48;   // H in [0, 168]
  int daily_days = 0;      // D in [0, 7]
  bool daily_weighted = false;
  bool include_ear = false;
  PaddingMode padding = PaddingMode::kZeroPad;
  EarOptions ear;          // alpha/mode used for daily sums and the EAR feature

  Index width() const { return hourly_hours + daily_days + (include_ear ? 1 : 0); }
  void validate() const;
  std::vector<std::string> feature_names() const;
};

// Rows of one window: X(r, :) is the feature vector of hour first_hour + r.
struct WindowExamples {
  FeatureMatrix features;
  Labels labels;
  Index first_hour = 0;
};

// Feature order: hourly values most recent first, then daily sums R_1..R_D
// (days strictly before the hourly block), then EAR. `ear` supplies the
// per-hour EAR of the window (0 outside main events).
WindowExamples compose_features(const DatasetWindow& window, const FeatureSpec& spec,
                                const Vector& ear, const LabelingConfig& labeling = {});
WindowExamples compose_features(const DatasetWindow& window, const FeatureSpec& spec,
                                const LabelingConfig& labeling = {});

// Contiguous rows of one window inside a stacked example set.
struct WindowSpan {
  std::size_t window = 0;  // index into the windows passed to build_examples
  Index begin = 0;
  Index end = 0;
  Index first_hour = 0;
  std::optional<Index> debris_flow_idx;
};

struct ExampleSet {
  FeatureMatrix features;
  Labels labels;
  std::vector<WindowSpan> spans;
  std::vector<std::string> window_ids;
  std::vector<std::string> feature_names;

  Index rows() const { return features.rows(); }
  // Restrict to the listed window positions (spans are re-based).
  ExampleSet subset(const std::vector<std::size_t>& span_positions) const;
  Index positives() const { return labels.sum(); }
};

ExampleSet build_examples(const std::vector<DatasetWindow>& windows,
                          const FeatureSpec& spec, const LabelingConfig& labeling = {});

// Stratified by kind, keyed on window ids so input order does not matter.
// Returns (train, test) as indices into `windows`, each sorted ascending.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_windows(
    const std::vector<DatasetWindow>& windows, double test_fraction, std::uint64_t seed);

// k stratified folds of window indices; fold sizes differ by at most one.
std::vector<std::vector<std::size_t>> kfold_windows(
    const std::vector<DatasetWindow>& windows, int k, std::uint64_t seed);

// Per-hour EAR scores stacked in the same row order as build_examples,
// optionally divided by the station's threshold for the window year.
Vector stacked_ear_scores(const std::vector<DatasetWindow>& windows, const FeatureSpec& spec,
                          const AlertPolicy& policy = {},
                          const ThresholdTable* normalise_by = nullptr);

}  // namespace debris_ews
