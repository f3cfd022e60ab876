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

#include "debris_ews/synth.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <optional>
#include <cmath>
#include <random>

#include "debris_ews/parallel.hpp"

namespace debris_ews {

namespace {

constexpr int kSoilMemoryHours = 7 * 24;

double round_half_mm(double v) { return std::round(v * 2.0) / 2.0; }

}  // namespace

void SynthConfig::validate() const {
  std::vector<std::string> bad;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || std::isnan(v)) bad.emplace_back(name);
  };
  if (n_stations < 1) bad.emplace_back("n_stations");
  if (weeks < 2) bad.emplace_back("weeks");
  positive(storm_rate_per_week, "storm_rate_per_week");
  positive(duration_shape, "duration_shape");
  positive(duration_scale, "duration_scale");
  positive(intensity_shape, "intensity_shape");
  positive(intensity_scale, "intensity_scale");
  if (!(autocorrelation >= 0.0 && autocorrelation < 1.0)) bad.emplace_back("autocorrelation");
  if (!(noise_sd >= 0.0)) bad.emplace_back("noise_sd");
  if (!(drizzle_rate >= 0.0 && drizzle_rate < 1.0)) bad.emplace_back("drizzle_rate");
  if (!(soil_decay > 0.0 && soil_decay <= 1.0)) bad.emplace_back("soil_decay");
  positive(beta, "beta");
  positive(theta, "theta");
  if (!(gamma >= 0.0) || std::isinf(gamma)) bad.emplace_back("gamma");
  if (refractory_hours < 1) bad.emplace_back("refractory_hours");
  positive(threshold_center, "threshold_center");
  if (!(threshold_spread >= 0.0)) bad.emplace_back("threshold_spread");
  const Timestamp t0 = parse_timestamp(start);
  if (!is_hour_aligned(t0)) bad.emplace_back("start");
  if (!bad.empty()) {
    std::string msg = "invalid synth config field(s):";
    for (const auto& b : bad) msg += " " + b;
    throw InputError(msg);
  }
}

std::string station_name(int station_index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "ST%03d", station_index + 1);
  return buf;
}

std::vector<Storm> storm_schedule(const SynthConfig& cfg, Index hours, Rng& rng) {
  std::exponential_distribution<double> gap(cfg.storm_rate_per_week / 168.0);
  std::gamma_distribution<double> duration(cfg.duration_shape, cfg.duration_scale);
  std::gamma_distribution<double> peak(cfg.intensity_shape, cfg.intensity_scale);
  std::vector<Storm> storms;
  double t = gap(rng);
  while (t < static_cast<double>(hours)) {
    Storm s;
    s.start = static_cast<Index>(std::floor(t));
    s.duration = std::max(1, static_cast<int>(std::lround(duration(rng))));
    s.peak = peak(rng);
    storms.push_back(s);
    t += gap(rng);
  }
  return storms;
}

Vector soil_state(const Vector& rain, double decay) {
  const Index n = rain.size();
  std::array<double, kSoilMemoryHours + 1> w{};
  for (int i = 1; i <= kSoilMemoryHours; ++i) w[i] = std::pow(decay, (i + 23) / 24);
  Vector s = Vector::Zero(n);
  for (Index t = 0; t < n; ++t) {
    double acc = 0.0;
    const Index reach = std::min<Index>(kSoilMemoryHours, t);
    for (Index i = 1; i <= reach; ++i) acc += w[static_cast<std::size_t>(i)] * rain[t - i];
    s[t] = acc;
  }
  return s;
}

Vector hazard(const Vector& rain, const SynthConfig& cfg) {
  const Vector s = soil_state(rain, cfg.soil_decay);
  Vector h(rain.size());
  for (Index t = 0; t < rain.size(); ++t) {
    const double excess = s[t] - cfg.theta;
    if (std::isinf(cfg.beta)) {
      if (excess > 0.0) h[t] = 1.0;
      else if (excess < 0.0) h[t] = 0.0;
      else h[t] = 1.0 / (1.0 + std::exp(-cfg.gamma * rain[t]));
    } else {
      h[t] = 1.0 / (1.0 + std::exp(-(cfg.beta * excess + cfg.gamma * rain[t])));
    }
  }
  return h;
}

SynthStation generate_station(const SynthConfig& cfg, int station_index) {
  const Index hours = static_cast<Index>(cfg.weeks) * 168;
  Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(station_index) + 1);

  std::vector<Storm> storms = storm_schedule(cfg, hours, rng);
  Vector rain = Vector::Zero(hours);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double rho = cfg.autocorrelation;
  const double innov = std::sqrt(1.0 - rho * rho);
  for (const auto& s : storms) {
    double z = normal(rng);
    for (int k = 0; k < s.duration; ++k) {
      const Index t = s.start + k;
      if (k > 0) z = rho * z + innov * normal(rng);
      if (t >= hours) continue;
      // Rises and falls over the storm, log-normal wiggle on top.
      const double shape = std::sin(M_PI * (k + 0.5) / s.duration);
      rain[t] += s.peak * std::sqrt(shape) *
                 std::exp(cfg.noise_sd * z - 0.5 * cfg.noise_sd * cfg.noise_sd);
    }
  }
  for (Index t = 0; t < hours; ++t) {
    const double u = unit(rng);
    const double amount = 0.5 + 1.5 * unit(rng);
    if (rain[t] == 0.0 && u < cfg.drizzle_rate) rain[t] = amount;
    rain[t] = round_half_mm(rain[t]);
  }

  const Vector h = hazard(rain, cfg);
  std::vector<Index> flows;
  Index quiet_until = 0;
  for (Index t = 0; t < hours; ++t) {
    const double u = unit(rng);
    if (t < quiet_until) continue;
    if (u < h[t]) {
      flows.push_back(t);
      quiet_until = t + cfg.refractory_hours;
    }
  }
  return {RainSeries(station_name(station_index), parse_timestamp(cfg.start), std::move(rain)),
          std::move(storms), std::move(flows)};
}

SynthCorpus generate_corpus(const SynthConfig& cfg, int threads) {
  cfg.validate();
  std::vector<std::optional<SynthStation>> stations(static_cast<std::size_t>(cfg.n_stations));
  parallel_for(stations.size(), threads,
               [&](std::size_t i) { stations[i] = generate_station(cfg, static_cast<int>(i)); });

  SynthCorpus corpus;
  Rng table_rng = make_rng(cfg.seed, 0);
  std::normal_distribution<double> jitter(0.0, cfg.threshold_spread);
  for (auto& st : stations) {
    const RainSeries& rain = st->rain;
    for (Index h : st->flow_hours) corpus.flows.push_back({rain.station_id(), rain.time_at(h)});
    const double raw = cfg.threshold_center * std::exp(jitter(table_rng));
    const double snapped = std::clamp(std::round(raw / 50.0) * 50.0, 200.0, 600.0);
    const int first_year = utc_year(rain.start());
    const int last_year = utc_year(rain.time_at(rain.size() - 1));
    for (int y = first_year; y <= last_year; ++y) corpus.thresholds.set(rain.station_id(), y, snapped);
    corpus.storms.push_back(std::move(st->storms));
    corpus.rainfall.series.push_back(std::move(st->rain));
  }
  if (corpus.flows.empty()) {
    throw InputError(
        "synthetic corpus has no debris flows; lower theta, raise beta or gamma, or add "
        "stations/weeks/storm_rate_per_week");
  }
  return corpus;
}

void write_corpus(const std::filesystem::path& dir, const SynthCorpus& corpus) {
  std::filesystem::create_directories(dir);
  write_rainfall_csv(dir / "rainfall.csv", corpus.rainfall.series);
  write_events_csv(dir / "events.csv", corpus.flows);
  write_threshold_csv(dir / "thresholds.csv", corpus.thresholds);
}

}  // namespace debris_ews
