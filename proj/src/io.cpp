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

#include "debris_ews/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace debris_ews {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = line.find(',', pos);
    out.emplace_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return parse(in, path.string());
}

CsvTable CsvTable::parse(std::istream& in, const std::string& source_name) {
  CsvTable table;
  table.source_ = source_name;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      table.header_ = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header_.size()) {
      throw InputError(source_name + " line " +
                       std::to_string(table.rows_.size() + 2) + ": expected " +
                       std::to_string(table.header_.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    table.rows_.push_back(std::move(fields));
  }
  if (!have_header) throw InputError(source_name + ": empty CSV (missing header)");
  return table;
}

void CsvTable::require_columns(const std::vector<std::string>& columns) const {
  std::string missing;
  for (const auto& c : columns) {
    if (std::find(header_.begin(), header_.end(), c) == header_.end()) {
      missing += (missing.empty() ? "" : ", ") + c;
    }
  }
  if (!missing.empty()) {
    std::string expected;
    for (const auto& c : columns) expected += (expected.empty() ? "" : ",") + c;
    throw InputError(source_ + ": missing column(s) " + missing +
                     "; expected header '" + expected + "'");
  }
}

std::size_t CsvTable::column(std::string_view name) const {
  auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) {
    throw InputError(source_ + ": missing column '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - header_.begin());
}

double parse_double(std::string_view text, std::string_view context) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InputError(std::string(context) + ": cannot parse number '" +
                     std::string(text) + "'");
  }
  return value;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

const RainSeries& RainfallData::station(std::string_view id) const {
  for (const auto& s : series) {
    if (s.station_id() == id) return s;
  }
  throw InputError("no rainfall data for station '" + std::string(id) + "'");
}

RainfallData read_rainfall_csv(const std::filesystem::path& path, bool impute_missing) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open rainfall CSV '" + path.string() +
                     "' (expected header 'station_id,timestamp,rainfall_mm')");
  }
  return parse_rainfall_csv(in, path.string(), impute_missing);
}

RainfallData parse_rainfall_csv(std::istream& in, const std::string& source_name,
                                bool impute_missing) {
  const CsvTable table = CsvTable::parse(in, source_name);
  table.require_columns({"station_id", "timestamp", "rainfall_mm"});
  const auto c_station = table.column("station_id");
  const auto c_time = table.column("timestamp");
  const auto c_rain = table.column("rainfall_mm");

  struct Pending {
    Timestamp start;
    Timestamp last;
    std::vector<double> values;
  };
  std::map<std::string, Pending> by_station;
  RainfallData data;

  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    const auto& row = table.rows()[r];
    const std::string where = source_name + " line " + std::to_string(table.line_of(r));
    const Timestamp t = [&] {
      try {
        return parse_timestamp(row[c_time]);
      } catch (const InputError& e) {
        throw InputError(where + ": " + e.what());
      }
    }();
    if (!is_hour_aligned(t)) throw InputError(where + ": timestamp is not hour-aligned");
    const double mm = parse_double(row[c_rain], where);
    auto [it, inserted] = by_station.try_emplace(row[c_station]);
    Pending& p = it->second;
    if (inserted) {
      p.start = t;
    } else {
      const auto gap = std::chrono::duration_cast<std::chrono::hours>(t - p.last).count();
      if (gap == 0) throw InputError(where + ": duplicate timestamp for station '" + row[c_station] + "'");
      if (gap < 0) throw InputError(where + ": timestamps not ascending for station '" + row[c_station] + "'");
      if (gap > 1) {
        if (!impute_missing) {
          throw InputError(where + ": " + std::to_string(gap - 1) +
                           " missing hour(s) before " + row[c_time] + " for station '" +
                           row[c_station] + "' (enable impute_missing to fill with 0 mm)");
        }
        data.warnings.push_back("station '" + row[c_station] + "': imputed " +
                                std::to_string(gap - 1) + " missing hour(s) as 0 mm before " +
                                row[c_time]);
        p.values.insert(p.values.end(), static_cast<std::size_t>(gap - 1), 0.0);
      }
    }
    p.last = t;
    p.values.push_back(mm);
  }
  for (auto& [id, p] : by_station) {
    data.series.emplace_back(id, p.start,
                             Eigen::Map<const Vector>(p.values.data(),
                                                      static_cast<Index>(p.values.size())));
  }
  return data;
}

void write_rainfall_csv(const std::filesystem::path& path,
                        const std::vector<RainSeries>& series) {
  auto out = open_for_write(path);
  out << "station_id,timestamp,rainfall_mm\n";
  for (const auto& s : series) {
    for (Index i = 0; i < s.size(); ++i) {
      out << s.station_id() << ',' << format_timestamp(s.time_at(i)) << ','
          << format_double(s[i]) << '\n';
    }
  }
}

std::vector<DebrisFlowEvent> read_events_csv(const std::filesystem::path& path) {
  const CsvTable table = CsvTable::read(path);
  table.require_columns({"station_id", "timestamp"});
  const auto c_station = table.column("station_id");
  const auto c_time = table.column("timestamp");
  std::vector<DebrisFlowEvent> events;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    const auto& row = table.rows()[r];
    try {
      events.push_back({row[c_station], parse_timestamp(row[c_time])});
    } catch (const InputError& e) {
      throw InputError(path.string() + " line " + std::to_string(table.line_of(r)) +
                       ": " + e.what());
    }
  }
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    return std::tie(a.station_id, a.time) < std::tie(b.station_id, b.time);
  });
  return events;
}

void write_events_csv(const std::filesystem::path& path,
                      const std::vector<DebrisFlowEvent>& events) {
  auto out = open_for_write(path);
  out << "station_id,timestamp\n";
  for (const auto& e : events) out << e.station_id << ',' << format_timestamp(e.time) << '\n';
}

ThresholdTable read_threshold_csv(const std::filesystem::path& path,
                                  ThresholdTable::Kind kind) {
  const CsvTable table = CsvTable::read(path);
  table.require_columns({"station_id", "year", "ear_threshold_mm"});
  const auto c_station = table.column("station_id");
  const auto c_year = table.column("year");
  const auto c_thr = table.column("ear_threshold_mm");
  ThresholdTable out(kind);
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    const auto& row = table.rows()[r];
    const std::string where = path.string() + " line " + std::to_string(table.line_of(r));
    const double year = parse_double(row[c_year], where);
    try {
      out.set(row[c_station], static_cast<int>(year), parse_double(row[c_thr], where));
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return out;
}

void write_threshold_csv(const std::filesystem::path& path, const ThresholdTable& table) {
  auto out = open_for_write(path);
  out << "station_id,year,ear_threshold_mm\n";
  for (const auto& [key, thr] : table.entries()) {
    out << key.first << ',' << key.second << ',' << format_double(thr) << '\n';
  }
}

}  // namespace debris_ews
