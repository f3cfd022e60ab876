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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "debris_ews/baselines.hpp"
#include "debris_ews/rainfall.hpp"

namespace debris_ews {

// Minimal CSV support: comma separated, no quoting, header row required.
class CsvTable {
 public:
  static CsvTable read(const std::filesystem::path& path);
  static CsvTable parse(std::istream& in, const std::string& source_name);

  // Throws InputError naming the file and the expected header when any of
  // `columns` is missing.
  void require_columns(const std::vector<std::string>& columns) const;
  std::size_t column(std::string_view name) const;

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  const std::string& source() const { return source_; }
  // 1-based line number of data row `r`, for error messages.
  std::size_t line_of(std::size_t r) const { return r + 2; }

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

double parse_double(std::string_view text, std::string_view context);

struct RainfallData {
  std::vector<RainSeries> series;  // sorted by station id
  std::vector<std::string> warnings;

  const RainSeries& station(std::string_view id) const;
};

struct DebrisFlowEvent {
  std::string station_id;
  Timestamp time;
};

// `station_id,timestamp,rainfall_mm`. Rows must be ascending per station.
// Duplicate timestamps are rejected; gaps are rejected unless
// `impute_missing`, in which case they are filled with 0 mm and reported in
// `warnings`.
RainfallData read_rainfall_csv(const std::filesystem::path& path,
                               bool impute_missing = false);
RainfallData parse_rainfall_csv(std::istream& in, const std::string& source_name,
                                bool impute_missing = false);
void write_rainfall_csv(const std::filesystem::path& path,
                        const std::vector<RainSeries>& series);

// `station_id,timestamp`, returned sorted by (station, time).
std::vector<DebrisFlowEvent> read_events_csv(const std::filesystem::path& path);
void write_events_csv(const std::filesystem::path& path,
                      const std::vector<DebrisFlowEvent>& events);

// `station_id,year,ear_threshold_mm`
ThresholdTable read_threshold_csv(const std::filesystem::path& path,
                                  ThresholdTable::Kind kind = ThresholdTable::Kind::kOfficial);
void write_threshold_csv(const std::filesystem::path& path, const ThresholdTable& table);

// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace debris_ews
