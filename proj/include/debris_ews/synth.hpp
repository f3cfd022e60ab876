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
#include <filesystem>
#include <string>
#include <vector>

#include "debris_ews/baselines.hpp"
#include "debris_ews/io.hpp"
#include "debris_ews/rainfall.hpp"
#include "debris_ews/rng.hpp"
#include "debris_ews/types.hpp"

namespace debris_ews {

struct SynthConfig {
  int n_stations = 60;
  int weeks = 23;
  std::string start = "2019-05-01T00:00:00Z";

  double storm_rate_per_week = 1.2;
  double duration_shape = 2.0;    // storm length ~ Gamma, hours
  double duration_scale = 9.0;
  double intensity_shape = 1.6;   // storm peak ~ Gamma, mm/h
  double intensity_scale = 5.0;
  double autocorrelation = 0.8;   // AR(1) of the log-intensity noise inside a storm
  double noise_sd = 0.6;
  double drizzle_rate = 0.02;     // chance of a 0.5..2 mm hour outside storms

  double soil_decay = 0.7;        // per day
  double beta = 0.06;             // 1/mm; infinity turns the hazard into a step
  double theta = 340.0;           // mm of soil state
  double gamma = 0.2;             // 1/(mm/h), weight of the current hour's rain
  int refractory_hours = 14 * 24; // no second flow at a station this soon

  double threshold_center = 300.0;  // official-style table, mm
  double threshold_spread = 0.25;   // log-normal jitter around the center

  std::uint64_t seed = 42;

  void validate() const;
};

struct Storm {
  Index start = 0;
  int duration = 1;
  double peak = 0.0;
};

// Storm starts follow a Poisson process at the configured rate.
std::vector<Storm> storm_schedule(const SynthConfig& cfg, Index hours, Rng& rng);

// S(t) = sum_{i=1..168} decay^ceil(i/24) * rain(t - i); rain before the
// first hour counts as 0.
Vector soil_state(const Vector& rain, double decay);

// sigmoid(beta * (S(t) - theta) + gamma * rain(t)).
Vector hazard(const Vector& rain, const SynthConfig& cfg);

struct SynthStation {
  RainSeries rain;
  std::vector<Storm> storms;
  std::vector<Index> flow_hours;
};

struct SynthCorpus {
  RainfallData rainfall;
  std::vector<DebrisFlowEvent> flows;
  ThresholdTable thresholds{ThresholdTable::Kind::kOfficial};
  std::vector<std::vector<Storm>> storms;  // per station, same order as rainfall.series
};

SynthStation generate_station(const SynthConfig& cfg, int station_index);

// Throws InputError when the configuration yields no debris flows at all.
SynthCorpus generate_corpus(const SynthConfig& cfg, int threads = 1);

// rainfall.csv, events.csv, thresholds.csv
void write_corpus(const std::filesystem::path& dir, const SynthCorpus& corpus);

std::string station_name(int station_index);

}  // namespace debris_ews
