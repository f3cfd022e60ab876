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

#include "debris_ews/rainfall.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace debris_ews {

namespace {

using std::chrono::days;
using std::chrono::floor;
using std::chrono::hours;
using std::chrono::seconds;

double clipped_sum(const Vector& values, Index begin, Index end) {
  begin = std::max<Index>(begin, 0);
  end = std::min<Index>(end, values.size());
  if (end <= begin) return 0.0;
  return values.segment(begin, end - begin).sum();
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  const std::string buf(text);
  int consumed = 0;
  const int n = std::sscanf(buf.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%n", &y, &mo,
                            &d, &sep, &h, &mi, &s, &consumed);
  std::string_view rest = text.substr(std::min<std::size_t>(consumed, text.size()));
  const bool tail_ok = rest.empty() || rest == "Z" || rest == "+00:00";
  if (n != 7 || (sep != 'T' && sep != ' ') || !tail_ok) {
    throw InputError("invalid ISO-8601 UTC timestamp '" + buf + "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year(y),
                                        std::chrono::month(mo),
                                        std::chrono::day(d)};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
    throw InputError("out-of-range timestamp '" + buf + "'");
  }
  return std::chrono::sys_days(ymd) + hours(h) + std::chrono::minutes(mi) +
         seconds(s);
}

std::string format_timestamp(Timestamp t) {
  const auto day = floor<days>(t);
  const std::chrono::year_month_day ymd(day);
  const auto secs = (t - day).count();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<long long>(secs / 3600),
                static_cast<long long>((secs / 60) % 60),
                static_cast<long long>(secs % 60));
  return buf;
}

bool is_hour_aligned(Timestamp t) {
  return (t.time_since_epoch().count() % 3600) == 0;
}

int utc_year(Timestamp t) {
  return static_cast<int>(std::chrono::year_month_day(floor<days>(t)).year());
}

std::string_view to_string(DailyWindowMode mode) {
  return mode == DailyWindowMode::kCalendarDay ? "calendar_day" : "rolling_24h";
}

DailyWindowMode parse_daily_window_mode(std::string_view text) {
  if (text == "calendar_day") return DailyWindowMode::kCalendarDay;
  if (text == "rolling_24h") return DailyWindowMode::kRolling24h;
  throw InputError("unknown daily window mode '" + std::string(text) +
                   "' (expected calendar_day or rolling_24h)");
}

RainSeries::RainSeries(std::string station_id, Timestamp start, Vector values)
    : station_id_(std::move(station_id)), start_(start), values_(std::move(values)) {
  if (values_.size() < 1) {
    throw InputError("rain series for station '" + station_id_ + "' is empty");
  }
  if (!is_hour_aligned(start_)) {
    throw InputError("rain series for station '" + station_id_ +
                     "' does not start on an hour boundary");
  }
  for (Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw InputError("station '" + station_id_ + "' hour " +
                       format_timestamp(time_at(i)) +
                       ": rainfall must be finite and >= 0");
    }
  }
}

Index RainSeries::index_of(Timestamp t) const {
  return std::chrono::duration_cast<hours>(t - start_).count();
}

RainSeries RainSeries::slice(Index begin, Index end) const {
  begin = std::clamp<Index>(begin, 0, size());
  end = std::clamp<Index>(end, begin, size());
  return RainSeries(station_id_, time_at(begin), values_.segment(begin, end - begin));
}

std::vector<MainEvent> segment_events(const RainSeries& series, double rain_threshold,
                                      int quiet_hours) {
  const Vector& v = series.values();
  const Index n = v.size();
  std::vector<MainEvent> events;
  Index i = 0;
  while (i < n) {
    if (!(v[i] > rain_threshold)) {
      ++i;
      continue;
    }
    Index last_wet = i;
    // Extend while a wet hour reappears within the quiet window.
    for (Index j = i + 1; j < n && j - last_wet <= quiet_hours; ++j) {
      if (v[j] > rain_threshold) last_wet = j;
    }
    events.push_back({i, last_wet});
    i = last_wet + 1;
  }
  return events;
}

std::array<double, kAntecedentDays> daily_totals(const RainSeries& series,
                                                 Index anchor_idx,
                                                 DailyWindowMode mode) {
  const Vector d = daily_totals(series, anchor_idx, kAntecedentDays, mode);
  std::array<double, kAntecedentDays> out{};
  for (int k = 0; k < kAntecedentDays; ++k) out[k] = d[k];
  return out;
}

Vector daily_totals(const RainSeries& series, Index anchor_idx, int days_count,
                    DailyWindowMode mode) {
  if (anchor_idx < 0 || anchor_idx > series.size()) {
    throw InputError("daily_totals: anchor hour out of range");
  }
  Index day_end = anchor_idx;
  if (mode == DailyWindowMode::kCalendarDay) {
    const Timestamp anchor_time = series.time_at(anchor_idx);
    day_end = series.index_of(floor<days>(anchor_time));
  }
  Vector out(days_count);
  for (int i = 1; i <= days_count; ++i) {
    out[i - 1] = clipped_sum(series.values(), day_end - 24 * i, day_end - 24 * (i - 1));
  }
  return out;
}

double antecedent_index(const std::array<double, kAntecedentDays>& dailies,
                        double alpha) {
  double total = 0.0;
  double weight = 1.0;
  for (double r : dailies) {
    weight *= alpha;
    total += weight * r;
  }
  return total;
}

EarTrace ear_trace(const RainSeries& series, const MainEvent& event, double alpha,
                   DailyWindowMode mode) {
  if (event.start_idx < 0 || event.end_idx >= series.size() ||
      event.start_idx > event.end_idx) {
    throw InputError("ear_trace: event indices out of range for station '" +
                     series.station_id() + "'");
  }
  EarTrace trace;
  trace.event = event;
  trace.alpha = alpha;
  trace.mode = mode;
  trace.antecedent_index =
      antecedent_index(daily_totals(series, event.start_idx, mode), alpha);
  trace.ear.resize(event.length());
  double running = 0.0;
  for (Index t = 0; t < event.length(); ++t) {
    running += series[event.start_idx + t];
    trace.ear[t] = running + trace.antecedent_index;
  }
  return trace;
}

Vector ear_series(const RainSeries& series, const EarOptions& options) {
  Vector out = Vector::Zero(series.size());
  for (const MainEvent& ev :
       segment_events(series, options.rain_threshold, options.quiet_hours)) {
    const EarTrace trace = ear_trace(series, ev, options.alpha, options.mode);
    out.segment(ev.start_idx, ev.length()) = trace.ear;
  }
  return out;
}

}  // namespace debris_ews
