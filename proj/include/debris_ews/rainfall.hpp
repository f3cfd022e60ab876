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

#include <array>
#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "debris_ews/types.hpp"

namespace debris_ews {

using Timestamp = std::chrono::sys_seconds;

// Parses "YYYY-MM-DDTHH:MM:SSZ" (also accepts a space separator and a
// missing "Z"). Throws InputError on anything else.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);
bool is_hour_aligned(Timestamp t);
int utc_year(Timestamp t);

inline constexpr double kMainEventThresholdMm = 4.0;
inline constexpr int kQuietHours = 6;
inline constexpr double kEarAlpha = 0.7;
inline constexpr int kAntecedentDays = 7;

enum class DailyWindowMode { kCalendarDay, kRolling24h };

std::string_view to_string(DailyWindowMode mode);
DailyWindowMode parse_daily_window_mode(std::string_view text);

// Hour-aligned, gap-free rainfall record of one station, mm/h.
class RainSeries {
 public:
  // Validates the invariants (nonempty, finite, non-negative, hour-aligned
  // start) and throws InputError when violated.
  RainSeries(std::string station_id, Timestamp start, Vector values);

  const std::string& station_id() const { return station_id_; }
  Timestamp start() const { return start_; }
  const Vector& values() const { return values_; }
  Index size() const { return values_.size(); }
  double operator[](Index i) const { return values_[i]; }

  Timestamp time_at(Index hour) const {
    return start_ + std::chrono::hours(hour);
  }
  // Hour index of `t` relative to start (may be negative or >= size()).
  Index index_of(Timestamp t) const;

  // Copy of hours [begin, end).
  RainSeries slice(Index begin, Index end) const;

 private:
  std::string station_id_;
  Timestamp start_;
  Vector values_;
};

struct MainEvent {
  Index start_idx = 0;
  Index end_idx = 0;  // inclusive

  Index length() const { return end_idx - start_idx + 1; }
  bool contains(Index hour) const { return hour >= start_idx && hour <= end_idx; }
  friend bool operator==(const MainEvent&, const MainEvent&) = default;
};

struct EarOptions {
  double alpha = kEarAlpha;
  DailyWindowMode mode = DailyWindowMode::kCalendarDay;
  double rain_threshold = kMainEventThresholdMm;
  int quiet_hours = kQuietHours;
};

struct EarTrace {
  MainEvent event;
  double antecedent_index = 0.0;
  Vector ear;  // ear[t] is the value at hour event.start_idx + t
  double alpha = kEarAlpha;
  DailyWindowMode mode = DailyWindowMode::kCalendarDay;
};

// Main rainfall events: start at an hour above the threshold, end at the last
// such hour that is followed by `quiet_hours` hours not above it. An event cut
// off by the end of the series still closes at its last wet hour.
std::vector<MainEvent> segment_events(const RainSeries& series,
                                      double rain_threshold = kMainEventThresholdMm,
                                      int quiet_hours = kQuietHours);

// Daily sums R_1..R_7 before `anchor_idx` (anchor may equal series.size()).
// calendar_day: R_i is the i-th full UTC day before the day holding the
// anchor hour; rolling_24h: R_i covers hours [anchor-24i, anchor-24(i-1)).
// Hours before the series start contribute 0 mm.
std::array<double, kAntecedentDays> daily_totals(const RainSeries& series,
                                                 Index anchor_idx,
                                                 DailyWindowMode mode);

// Variable-length form used by daily features (days in [0, 7]).
Vector daily_totals(const RainSeries& series, Index anchor_idx, int days,
                    DailyWindowMode mode);

// sum_{i=1..7} alpha^i R_i
double antecedent_index(const std::array<double, kAntecedentDays>& dailies,
                        double alpha = kEarAlpha);

EarTrace ear_trace(const RainSeries& series, const MainEvent& event,
                   double alpha = kEarAlpha,
                   DailyWindowMode mode = DailyWindowMode::kCalendarDay);

// Per-hour EAR over the whole series: the event trace inside main events,
// 0 elsewhere.
Vector ear_series(const RainSeries& series, const EarOptions& options = {});

}  // namespace debris_ews
