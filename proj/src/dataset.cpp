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

#include "debris_ews/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "debris_ews/rng.hpp"

namespace debris_ews {

namespace {

struct Range {
  Index begin;
  Index end;  // inclusive
  Index event_start;
};

std::string compact_time(Timestamp t) {
  // 2019-05-19T03:00:00Z -> 20190519T03
  const std::string iso = format_timestamp(t);
  return iso.substr(0, 4) + iso.substr(5, 2) + iso.substr(8, 2) + "T" + iso.substr(11, 2);
}

bool has_wet_run(const RainSeries& s, const MainEvent& ev, double threshold, int min_run) {
  int run = 0;
  for (Index h = ev.start_idx; h <= ev.end_idx; ++h) {
    run = s[h] > threshold ? run + 1 : 0;
    if (run >= min_run) return true;
  }
  return false;
}

DatasetWindow make_window(const RainSeries& series, const Range& r, WindowKind kind,
                          std::optional<Index> flow) {
  RainSeries slice = series.slice(r.begin, r.end + 1);
  DatasetWindow w{
      series.station_id() + (kind == WindowKind::kPositive ? "-P-" : "-N-") +
          compact_time(slice.start()),
      kind, std::move(slice), r.begin, std::nullopt, r.event_start - r.begin};
  if (flow) w.debris_flow_idx = *flow - r.begin;
  return w;
}

}  // namespace

std::string_view to_string(WindowKind kind) {
  return kind == WindowKind::kPositive ? "positive" : "negative";
}

WindowBuildResult build_windows(const RainSeries& series, const std::vector<Timestamp>& flows,
                                const WindowConfig& config) {
  WindowBuildResult result;
  const Index n = series.size();
  const auto events = segment_events(series, config.rain_threshold, config.quiet_hours);

  std::vector<Range> positive;
  std::vector<Index> flow_idx;
  Index covered_until = -1;
  for (Timestamp f : flows) {
    const Index d = series.index_of(f);
    const std::string label = "debris flow at " + series.station_id() + " " + format_timestamp(f);
    if (d < 0 || d >= n) {
      result.warnings.push_back(label + " lies outside the rainfall record; skipped");
      continue;
    }
    if (d <= covered_until) {
      result.warnings.push_back(label + " falls inside an earlier positive window; skipped");
      continue;
    }
    // The main event during (or just before) which the flow happened.
    const MainEvent* main = nullptr;
    for (const auto& ev : events) {
      if (ev.start_idx > d) break;
      if (d <= ev.end_idx + config.tail_hours) main = &ev;
    }
    MainEvent anchor = main ? *main : MainEvent{d, d};
    if (!main) {
      result.warnings.push_back(label + " has no preceding main rainfall event");
    }
    Range r{std::max<Index>({0, anchor.start_idx - config.antecedent_hours, covered_until + 1}),
            std::min<Index>(n - 1, std::max<Index>(anchor.end_idx + config.tail_hours, d)),
            std::max(anchor.start_idx, covered_until + 1)};
    positive.push_back(r);
    flow_idx.push_back(d);
    covered_until = r.end;
  }

  std::vector<Range> negative;
  for (const auto& ev : events) {
    if (!has_wet_run(series, ev, config.rain_threshold, config.min_wet_run)) continue;
    Range cand{std::max<Index>(0, ev.start_idx - config.antecedent_hours),
               std::min<Index>(n - 1, ev.end_idx + config.tail_hours), ev.start_idx};
    bool hits_positive = false;
    for (const auto& p : positive) {
      if (ev.start_idx <= p.end && ev.end_idx >= p.begin) {
        hits_positive = true;
        break;
      }
      if (p.end < ev.start_idx) cand.begin = std::max(cand.begin, p.end + 1);
      if (p.begin > ev.end_idx) cand.end = std::min(cand.end, p.begin - 1);
    }
    if (hits_positive) continue;
    if (!negative.empty() && cand.begin <= negative.back().end + 1) {
      negative.back().end = std::max(negative.back().end, cand.end);
    } else {
      negative.push_back(cand);
    }
  }

  for (std::size_t k = 0; k < positive.size(); ++k) {
    result.windows.push_back(make_window(series, positive[k], WindowKind::kPositive, flow_idx[k]));
  }
  for (const auto& r : negative) {
    result.windows.push_back(make_window(series, r, WindowKind::kNegative, std::nullopt));
  }
  std::sort(result.windows.begin(), result.windows.end(),
            [](const auto& a, const auto& b) { return a.origin_idx < b.origin_idx; });
  return result;
}

WindowBuildResult build_windows(const RainfallData& rain,
                                const std::vector<DebrisFlowEvent>& flows,
                                const WindowConfig& config) {
  std::map<std::string, std::vector<Timestamp>> by_station;
  for (const auto& f : flows) by_station[f.station_id].push_back(f.time);
  WindowBuildResult all;
  for (auto& [station, times] : by_station) {
    bool known = false;
    for (const auto& s : rain.series) known = known || s.station_id() == station;
    if (!known) {
      all.warnings.push_back("debris flows at station '" + station +
                             "' have no rainfall record; skipped");
    }
    std::sort(times.begin(), times.end());
  }
  for (const auto& s : rain.series) {
    auto it = by_station.find(s.station_id());
    const std::vector<Timestamp> none;
    auto part = build_windows(s, it == by_station.end() ? none : it->second, config);
    std::move(part.windows.begin(), part.windows.end(), std::back_inserter(all.windows));
    std::move(part.warnings.begin(), part.warnings.end(), std::back_inserter(all.warnings));
  }
  std::sort(all.windows.begin(), all.windows.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return all;
}

Labels label_hours(const DatasetWindow& window, const LabelingConfig& cfg) {
  if (cfg.lead_time_h < 1) throw InputError("lead time must be >= 1 hour");
  Labels y = Labels::Zero(window.length());
  if (window.kind == WindowKind::kPositive && window.debris_flow_idx) {
    const Index d = *window.debris_flow_idx;
    for (Index h = std::max<Index>(0, d - cfg.lead_time_h); h <= d && h < y.size(); ++h) y[h] = 1;
  }
  return y;
}

void FeatureSpec::validate() const {
  std::string problems;
  if (hourly_hours < 0 || hourly_hours > 168) problems += " hourly_hours must be in [0, 168];";
  if (daily_days < 0 || daily_days > 7) problems += " daily_days must be in [0, 7];";
  if (width() == 0) problems += " feature vector is empty (H + D + include_ear must be > 0);";
  if (!(ear.alpha >= 0.0 && ear.alpha <= 1.0)) problems += " alpha must be in [0, 1];";
  if (!problems.empty()) throw InputError("invalid feature spec:" + problems);
}

std::vector<std::string> FeatureSpec::feature_names() const {
  std::vector<std::string> names;
  for (int j = 1; j <= hourly_hours; ++j) names.push_back("rain_h" + std::to_string(j));
  for (int i = 1; i <= daily_days; ++i) {
    names.push_back((daily_weighted ? "wdaily_d" : "daily_d") + std::to_string(i));
  }
  if (include_ear) names.push_back("ear");
  return names;
}

WindowExamples compose_features(const DatasetWindow& window, const FeatureSpec& spec,
                                const Vector& ear, const LabelingConfig& labeling) {
  spec.validate();
  const Index n = window.length();
  if (spec.include_ear && ear.size() != n) {
    throw InputError("EAR provider returned " + std::to_string(ear.size()) +
                     " hours for a window of " + std::to_string(n));
  }
  const int H = spec.hourly_hours;
  const int D = spec.daily_days;
  Index first = 0;
  if (spec.padding == PaddingMode::kSkipIncomplete) {
    first = std::min<Index>(n, std::max(H - 1, 0) + 24 * D);
  }
  WindowExamples out;
  out.first_hour = first;
  out.features.resize(n - first, spec.width());
  const Labels all_labels = label_hours(window, labeling);
  out.labels = all_labels.segment(first, n - first);

  const Vector& rain = window.rain.values();
  for (Index t = first; t < n; ++t) {
    const Index r = t - first;
    Index col = 0;
    for (int j = 0; j < H; ++j) out.features(r, col++) = t - j >= 0 ? rain[t - j] : 0.0;
    if (D > 0) {
      const Vector daily = daily_totals(window.rain, t + 1 - H >= 0 ? t + 1 - H : 0, D,
                                        spec.ear.mode);
      double w = 1.0;
      for (int i = 0; i < D; ++i) {
        w *= spec.ear.alpha;
        out.features(r, col++) = spec.daily_weighted ? w * daily[i] : daily[i];
      }
    }
    if (spec.include_ear) out.features(r, col++) = ear[t];
  }
  return out;
}

WindowExamples compose_features(const DatasetWindow& window, const FeatureSpec& spec,
                                const LabelingConfig& labeling) {
  const Vector ear = spec.include_ear ? ear_series(window.rain, spec.ear) : Vector();
  return compose_features(window, spec, ear, labeling);
}

ExampleSet build_examples(const std::vector<DatasetWindow>& windows, const FeatureSpec& spec,
                          const LabelingConfig& labeling) {
  spec.validate();
  std::vector<WindowExamples> parts;
  parts.reserve(windows.size());
  Index total = 0;
  for (const auto& w : windows) {
    parts.push_back(compose_features(w, spec, labeling));
    total += parts.back().features.rows();
  }
  ExampleSet set;
  set.features.resize(total, spec.width());
  set.labels.resize(total);
  set.feature_names = spec.feature_names();
  Index row = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Index m = parts[k].features.rows();
    set.features.middleRows(row, m) = parts[k].features;
    set.labels.segment(row, m) = parts[k].labels;
    set.spans.push_back({k, row, row + m, parts[k].first_hour, windows[k].debris_flow_idx});
    set.window_ids.push_back(windows[k].id);
    row += m;
  }
  return set;
}

ExampleSet ExampleSet::subset(const std::vector<std::size_t>& span_positions) const {
  Index total = 0;
  for (auto p : span_positions) total += spans.at(p).end - spans.at(p).begin;
  ExampleSet out;
  out.features.resize(total, features.cols());
  out.labels.resize(total);
  out.feature_names = feature_names;
  Index row = 0;
  for (auto p : span_positions) {
    const WindowSpan& s = spans[p];
    const Index m = s.end - s.begin;
    out.features.middleRows(row, m) = features.middleRows(s.begin, m);
    out.labels.segment(row, m) = labels.segment(s.begin, m);
    out.spans.push_back({s.window, row, row + m, s.first_hour, s.debris_flow_idx});
    out.window_ids.push_back(window_ids[p]);
    row += m;
  }
  return out;
}

namespace {

// Window indices of one kind, ordered by id and then shuffled with a
// kind-specific stream of `seed`.
std::vector<std::size_t> shuffled_ids(const std::vector<DatasetWindow>& windows, WindowKind kind,
                                      std::uint64_t seed) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].kind == kind) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return windows[a].id < windows[b].id; });
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (windows[idx[i]].id == windows[idx[i - 1]].id) {
      throw InputError("duplicate window id '" + windows[idx[i]].id + "'");
    }
  }
  Rng rng = make_rng(seed, kind == WindowKind::kPositive ? 1 : 2);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

}  // namespace

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_windows(
    const std::vector<DatasetWindow>& windows, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InputError("test fraction must lie strictly between 0 and 1");
  }
  if (windows.size() < 2) throw InputError("need at least 2 windows to split");
  std::vector<std::size_t> train, test;
  for (WindowKind kind : {WindowKind::kPositive, WindowKind::kNegative}) {
    const auto idx = shuffled_ids(windows, kind, seed);
    const auto n = static_cast<long>(idx.size());
    long n_test = std::lround(test_fraction * static_cast<double>(n));
    if (n >= 2) n_test = std::clamp<long>(n_test, 1, n - 1);
    else n_test = 0;
    test.insert(test.end(), idx.begin(), idx.begin() + n_test);
    train.insert(train.end(), idx.begin() + n_test, idx.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

std::vector<std::vector<std::size_t>> kfold_windows(const std::vector<DatasetWindow>& windows,
                                                    int k, std::uint64_t seed) {
  if (k < 2) throw InputError("k-fold needs k >= 2");
  if (static_cast<std::size_t>(k) > windows.size()) {
    throw InputError("k-fold: k = " + std::to_string(k) + " exceeds the " +
                     std::to_string(windows.size()) + " available windows");
  }
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (WindowKind kind : {WindowKind::kPositive, WindowKind::kNegative}) {
    for (std::size_t i : shuffled_ids(windows, kind, seed)) {
      folds[next % k].push_back(i);
      ++next;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

Vector stacked_ear_scores(const std::vector<DatasetWindow>& windows, const FeatureSpec& spec,
                          const AlertPolicy& policy, const ThresholdTable* normalise_by) {
  std::vector<Vector> parts;
  Index total = 0;
  for (const auto& w : windows) {
    Vector s = ear_alert_scores(w.rain, spec.ear, policy);
    if (normalise_by) {
      const int year = utc_year(w.rain.time_at(w.main_event_start));
      s /= normalise_by->at(w.station_id(), year);
    }
    Index first = 0;
    if (spec.padding == PaddingMode::kSkipIncomplete) {
      first = std::min<Index>(w.length(), std::max(spec.hourly_hours - 1, 0) + 24 * spec.daily_days);
    }
    parts.push_back(s.segment(first, w.length() - first));
    total += parts.back().size();
  }
  Vector out(total);
  Index row = 0;
  for (const auto& p : parts) {
    out.segment(row, p.size()) = p;
    row += p.size();
  }
  return out;
}

}  // namespace debris_ews
