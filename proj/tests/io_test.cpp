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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "debris_ews/io.hpp"
#include "test_util.hpp"

namespace debris_ews {
namespace {

RainfallData parse(const std::string& text, bool impute = false) {
  std::istringstream in(text);
  return parse_rainfall_csv(in, "rain.csv", impute);
}

TEST(Csv, MissingColumnsNameTheExpectedHeader) {
  std::istringstream in("station,time\nA,2020-01-01T00:00:00Z\n");
  const auto table = CsvTable::parse(in, "x.csv");
  try {
    table.require_columns({"station_id", "timestamp"});
    FAIL();
  } catch (const InputError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("x.csv"), std::string::npos);
    EXPECT_NE(what.find("station_id"), std::string::npos);
  }
}

TEST(Csv, RaggedRowIsRejected) {
  std::istringstream in("a,b\n1,2\n3\n");
  EXPECT_THROW(CsvTable::parse(in, "r.csv"), InputError);
}

TEST(RainfallCsv, ParsesStationsInOrder) {
  const auto data = parse(
      "station_id,timestamp,rainfall_mm\n"
      "B,2020-06-01T00:00:00Z,1.5\n"
      "B,2020-06-01T01:00:00Z,0\n"
      "A,2020-06-01T05:00:00Z,7\n");
  ASSERT_EQ(data.series.size(), 2u);
  EXPECT_EQ(data.series[0].station_id(), "A");
  EXPECT_EQ(data.station("B").size(), 2);
  EXPECT_EQ(data.station("B")[0], 1.5);
  EXPECT_THROW(data.station("C"), InputError);
}

TEST(RainfallCsv, GapsAndDuplicates) {
  const std::string gap =
      "station_id,timestamp,rainfall_mm\n"
      "A,2020-06-01T00:00:00Z,1\n"
      "A,2020-06-01T03:00:00Z,2\n";
  EXPECT_THROW(parse(gap), InputError);
  const auto filled = parse(gap, true);
  ASSERT_EQ(filled.series[0].size(), 4);
  EXPECT_EQ(filled.series[0][1], 0.0);
  EXPECT_EQ(filled.series[0][3], 2.0);
  EXPECT_EQ(filled.warnings.size(), 1u);

  EXPECT_THROW(parse("station_id,timestamp,rainfall_mm\n"
                     "A,2020-06-01T00:00:00Z,1\n"
                     "A,2020-06-01T00:00:00Z,2\n"),
               InputError);
  EXPECT_THROW(parse("station_id,timestamp,rainfall_mm\n"
                     "A,2020-06-01T00:00:00Z,-1\n"),
               InputError);
  EXPECT_THROW(parse("station_id,timestamp,rainfall_mm\n"
                     "A,2020-06-01T00:00:00Z,wet\n"),
               InputError);
}

TEST(Files, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "debris_ews_io_test";
  std::filesystem::create_directories(dir);

  const auto s = test::series_of({0.5, 1, 12.25, 0}, "2021-07-01T10:00:00Z", "ST9");
  write_rainfall_csv(dir / "rain.csv", {s});
  const auto back = read_rainfall_csv(dir / "rain.csv");
  ASSERT_EQ(back.series.size(), 1u);
  EXPECT_EQ(back.series[0].start(), s.start());
  EXPECT_EQ(back.series[0].values(), s.values());

  write_events_csv(dir / "events.csv", {{"ST9", s.time_at(2)}});
  const auto events = read_events_csv(dir / "events.csv");
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].station_id, "ST9");
  EXPECT_EQ(events[0].time, s.time_at(2));

  ThresholdTable table;
  table.set("ST9", 2021, 350);
  write_threshold_csv(dir / "thr.csv", table);
  EXPECT_EQ(read_threshold_csv(dir / "thr.csv").at("ST9", 2021), 350.0);

  EXPECT_THROW(read_rainfall_csv(dir / "missing.csv"), InputError);
  std::filesystem::remove_all(dir);
}

TEST(Thresholds, OfficialGridIsEnforced) {
  ThresholdTable official;
  EXPECT_THROW(official.set("A", 2020, 325), InputError);
  EXPECT_THROW(official.set("A", 2020, 650), InputError);
  official.set("A", 2020, 300);
  EXPECT_THROW(official.at("A", 2021), InputError);
  ThresholdTable swept(ThresholdTable::Kind::kSwept);
  swept.set("A", 2020, 325);
  EXPECT_THROW(swept.set("A", 2020, 0), InputError);
  EXPECT_EQ(official.scaled(0.5).at("A", 2020), 150.0);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(12.0), "12");
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_double(v)), v);
}

}  // namespace
}  // namespace debris_ews
