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
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "debris_ews/dataset.hpp"
#include "debris_ews/types.hpp"

namespace debris_ews {

enum class BootstrapStatistic { kAuprc, kAuroc };
std::string_view to_string(BootstrapStatistic s);

struct BootstrapOptions {
  int block_hours = 6;
  int replicates = 10000;
  double level = 0.95;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct BootstrapCI {
  std::string statistic;
  double point = 0.0;  // statistic on the original sample
  double level = 0.95;
  double lower = 0.0;
  double upper = 0.0;
  int block_hours = 6;
  int replicates = 0;
  int skipped_replicates = 0;  // single-class resamples
  bool low_replicate_warning = false;  // replicates < 100
  std::uint64_t seed = 0;
  std::string method = "percentile, circular blocks within windows";
};

// Row ranges [begin, end) of each window, in stacking order.
using RowGroups = std::vector<std::pair<Index, Index>>;
RowGroups row_groups(const std::vector<WindowSpan>& spans);

// Resampled row indices of one replicate: for every group, ceil(len/block)
// blocks start at uniform offsets and wrap around inside the group; the last
// block is truncated so the group keeps its length.
std::vector<Index> circular_block_resample(const RowGroups& groups, int block_hours,
                                           std::uint64_t replicate_seed);

using StatisticFn = std::function<double(const Vector& scores, const Labels& labels)>;

BootstrapCI block_bootstrap_ci(const Vector& scores, const Labels& labels, const RowGroups& groups,
                               BootstrapStatistic stat, const BootstrapOptions& options);
BootstrapCI block_bootstrap_ci(const Vector& scores, const Labels& labels, const RowGroups& groups,
                               const std::string& name, const StatisticFn& stat,
                               const BootstrapOptions& options);

// Linear-interpolation quantile (type 7) of sorted values.
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace debris_ews
