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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "debris_ews/baselines.hpp"
#include "debris_ews/rainfall.hpp"
#include "test_util.hpp"

namespace debris_ews {
namespace {

using test::series_of;

std::vector<double> with_zeros(std::vector<double> head, int zeros) {
  head.insert(head.end(), zeros, 0.0);
  return head;
}

TEST(Timestamp, RoundTrip) {
  const Timestamp t = parse_timestamp("2019-05-19T03:00:00Z");
  EXPECT_EQ(format_timestamp(t), "2019-05-19T03:00:00Z");
  EXPECT_EQ(parse_timestamp("2019-05-19 03:00:00"), t);
  EXPECT_TRUE(is_hour_aligned(t));
  EXPECT_EQ(utc_year(t), 2019);
  EXPECT_THROW(parse_timestamp("2019-13-01T00:00:00Z"), InputError);
  EXPECT_THROW(parse_timestamp("yesterday"), InputError);
}

TEST(RainSeries, RejectsBadValues) {
  EXPECT_THROW(series_of({}), InputError);
  EXPECT_THROW(series_of({1.0, -0.5}), InputError);
  EXPECT_THROW(series_of({1.0, std::nan("")}), InputError);
  EXPECT_THROW(series_of({1.0}, "2020-06-01T00:30:00Z"), InputError);
}

TEST(SegmentEvents, DrySeriesHasNoEvents) {
  EXPECT_TRUE(segment_events(series_of(std::vector<double>(48, 0.0))).empty());
}

TEST(SegmentEvents, SixQuietHoursCloseAnEvent) {
  const auto events = segment_events(series_of({5, 5, 0, 0, 0, 0, 0, 0, 5}));
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0], (MainEvent{0, 1}));
  EXPECT_EQ(events[1], (MainEvent{8, 8}));
}

TEST(SegmentEvents, ShortDipDoesNotSplit) {
  const auto events = segment_events(series_of(with_zeros({5, 3, 3, 3, 5}, 6)));
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0], (MainEvent{0, 4}));
}

TEST(SegmentEvents, ThresholdIsStrict) {
  EXPECT_TRUE(segment_events(series_of({4, 4, 4})).empty());
  EXPECT_EQ(segment_events(series_of({4, 4.5, 4})).size(), 1u);
}

TEST(SegmentEvents, FiveQuietHoursKeepEventOpen) {
  const auto events = segment_events(series_of({6, 0, 0, 0, 0, 0, 6, 0}));
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0], (MainEvent{0, 6}));
}

TEST(SegmentEvents, EventAtSeriesEndClosesAtLastWetHour) {
  const auto events = segment_events(series_of({0, 0, 7, 1}));
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0], (MainEvent{2, 2}));
}

TEST(DailyTotals, TrivialCases) {
  const auto zero = series_of(std::vector<double>(24 * 10, 0.0));
  for (auto d : daily_totals(zero, 200, DailyWindowMode::kCalendarDay)) EXPECT_EQ(d, 0.0);

  const auto ones = series_of(std::vector<double>(24 * 10, 1.0));
  for (auto d : daily_totals(ones, 24 * 8 + 5, DailyWindowMode::kRolling24h)) EXPECT_EQ(d, 24.0);
  for (auto d : daily_totals(ones, 0, DailyWindowMode::kRolling24h)) EXPECT_EQ(d, 0.0);
  for (auto d : daily_totals(ones, 0, DailyWindowMode::kCalendarDay)) EXPECT_EQ(d, 0.0);
  EXPECT_THROW(daily_totals(ones, -1, DailyWindowMode::kRolling24h), InputError);
}

TEST(DailyTotals, CalendarDayUsesFullDaysBeforeAnchorDay) {
  // Series starts at midnight; day 0 holds 1 mm/h, day 1 holds 2 mm/h.
  std::vector<double> v(72, 0.0);
  for (int h = 0; h < 24; ++h) v[h] = 1.0;
  for (int h = 24; h < 48; ++h) v[h] = 2.0;
  const auto s = series_of(v);
  const auto cal = daily_totals(s, 50, DailyWindowMode::kCalendarDay);
  EXPECT_EQ(cal[0], 48.0);
  EXPECT_EQ(cal[1], 24.0);
  EXPECT_EQ(cal[2], 0.0);
  const auto roll = daily_totals(s, 50, DailyWindowMode::kRolling24h);
  EXPECT_EQ(roll[0], 44.0);  // hours 26..49
  EXPECT_EQ(roll[1], 26.0);  // hours 2..25
}

TEST(AntecedentIndex, Examples) {
  EXPECT_EQ(antecedent_index({0, 0, 0, 0, 0, 0, 0}), 0.0);
  EXPECT_NEAR(antecedent_index({10, 0, 0, 0, 0, 0, 0}), 7.0, 1e-12);
  double geometric = 0.0;
  for (int i = 1; i <= 7; ++i) geometric += 10.0 * std::pow(0.7, i);
  const double value = antecedent_index({10, 10, 10, 10, 10, 10, 10});
  EXPECT_NEAR(value, geometric, 1e-12);
  EXPECT_NEAR(value, 21.4117, 5e-4);
}

TEST(EarTrace, RunningSumWithoutAntecedent) {
  const auto s = series_of(with_zeros({5, 7}, 6), "2020-06-01T00:00:00Z");
  const auto trace = ear_trace(s, MainEvent{0, 1});
  EXPECT_EQ(trace.antecedent_index, 0.0);
  ASSERT_EQ(trace.ear.size(), 2);
  EXPECT_EQ(trace.ear[0], 5.0);
  EXPECT_EQ(trace.ear[1], 12.0);
}

TEST(EarTrace, WorkedExampleWithPreviousDay) {
  // 10 mm on the previous calendar day, then a 20 mm hour.
  std::vector<double> v(24, 0.0);
  v[3] = 10.0;
  v.push_back(20.0);
  const auto s = series_of(with_zeros(v, 6));
  const auto trace = ear_trace(s, MainEvent{24, 24});
  EXPECT_NEAR(trace.antecedent_index, 7.0, 1e-12);
  ASSERT_EQ(trace.ear.size(), 1);
  EXPECT_NEAR(trace.ear[0], 27.0, 1e-12);
}

TEST(EarTrace, RejectsOutOfRangeEvent) {
  const auto s = series_of({5, 5});
  EXPECT_THROW(ear_trace(s, MainEvent{0, 2}), InputError);
  EXPECT_THROW(ear_trace(s, MainEvent{1, 0}), InputError);
}

TEST(EarTrace, AlertFiresAtCrossingHour) {
  // Seven days of 2 mm/h drizzle (below the event threshold), then a storm of
  // 10 mm/h. EAR crosses 300 mm at a known hour.
  std::vector<double> v(7 * 24, 2.0);
  v.insert(v.end(), 40, 10.0);
  v.insert(v.end(), 8, 0.0);
  const auto s = series_of(v);
  const auto events = segment_events(s);
  ASSERT_EQ(events.size(), 1u);
  const auto trace = ear_trace(s, events[0]);
  const double ante = antecedent_index(daily_totals(s, events[0].start_idx,
                                                    DailyWindowMode::kCalendarDay));
  // ante + 10 (t + 1) >= 300
  const Index crossing = static_cast<Index>(std::ceil((300.0 - ante) / 10.0)) - 1;
  const Predictions p = etm_predict(trace, 300.0);
  for (Index t = 0; t < p.size(); ++t) EXPECT_EQ(p[t], t >= crossing ? 1 : 0) << t;
  EXPECT_LT(trace.ear[crossing - 1], 300.0);
  EXPECT_GE(trace.ear[crossing], 300.0);
}

TEST(EarTrace, Invariants) {
  Rng rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const auto v = test::random_rain(rng, 24 * 20);
    const auto s = series_of(v);
    std::vector<double> doubled(v);
    for (auto& x : doubled) x *= 2.0;
    const auto s2 = series_of(doubled);
    for (const auto& ev : segment_events(s)) {
      const auto trace = ear_trace(s, ev);
      for (Index t = 1; t < trace.ear.size(); ++t) EXPECT_GE(trace.ear[t], trace.ear[t - 1]);
      // Superposition: doubled rain doubles EAR.
      const auto trace2 = ear_trace(s2, ev);
      EXPECT_EQ(trace2.antecedent_index, 2.0 * trace.antecedent_index);
      for (Index t = 0; t < trace.ear.size(); ++t) EXPECT_EQ(trace2.ear[t], 2.0 * trace.ear[t]);
      // alpha = 0 leaves the plain running sum.
      const auto plain = ear_trace(s, ev, 0.0);
      double run = 0.0;
      for (Index t = 0; t < plain.ear.size(); ++t) {
        run += v[ev.start_idx + t];
        EXPECT_EQ(plain.ear[t], run);
      }
    }
  }
}

TEST(EarSeries, ZeroOutsideEvents) {
  const auto s = series_of(with_zeros({0, 0, 6, 6, 0, 0}, 6));
  const Vector e = ear_series(s);
  EXPECT_EQ(e[0], 0.0);
  EXPECT_EQ(e[2], 6.0);
  EXPECT_EQ(e[3], 12.0);
  EXPECT_EQ(e[4], 0.0);
}

TEST(DailyWindowMode, Parse) {
  EXPECT_EQ(parse_daily_window_mode("calendar_day"), DailyWindowMode::kCalendarDay);
  EXPECT_EQ(parse_daily_window_mode("rolling_24h"), DailyWindowMode::kRolling24h);
  EXPECT_THROW(parse_daily_window_mode("weekly"), InputError);
}

}  // namespace
}  // namespace debris_ews
