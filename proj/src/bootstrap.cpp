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

#include "debris_ews/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "debris_ews/metrics.hpp"
#include "debris_ews/parallel.hpp"
#include "debris_ews/rng.hpp"

namespace debris_ews {

std::string_view to_string(BootstrapStatistic s) {
  return s == BootstrapStatistic::kAuprc ? "AUPRC" : "AUROC";
}

RowGroups row_groups(const std::vector<WindowSpan>& spans) {
  RowGroups g;
  g.reserve(spans.size());
  for (const auto& s : spans) g.emplace_back(s.begin, s.end);
  return g;
}

std::vector<Index> circular_block_resample(const RowGroups& groups, int block_hours,
                                           std::uint64_t replicate_seed) {
  Rng rng(replicate_seed);
  std::vector<Index> rows;
  for (const auto& [begin, end] : groups) {
    const Index len = end - begin;
    if (len <= 0) continue;
    std::uniform_int_distribution<Index> start(0, len - 1);
    Index filled = 0;
    while (filled < len) {
      const Index s = start(rng);
      for (Index j = 0; j < block_hours && filled < len; ++j, ++filled) {
        rows.push_back(begin + (s + j) % len);
      }
    }
  }
  return rows;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw InputError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BootstrapCI block_bootstrap_ci(const Vector& scores, const Labels& labels, const RowGroups& groups,
                               BootstrapStatistic stat, const BootstrapOptions& options) {
  const StatisticFn fn = stat == BootstrapStatistic::kAuprc
                             ? StatisticFn([](const Vector& s, const Labels& y) { return auprc(s, y); })
                             : StatisticFn([](const Vector& s, const Labels& y) { return auroc(s, y); });
  return block_bootstrap_ci(scores, labels, groups, std::string(to_string(stat)), fn, options);
}

BootstrapCI block_bootstrap_ci(const Vector& scores, const Labels& labels, const RowGroups& groups,
                               const std::string& name, const StatisticFn& stat,
                               const BootstrapOptions& options) {
  if (scores.size() != labels.size()) throw InputError("scores and labels differ in length");
  if (options.block_hours < 1) throw InputError("bootstrap block length must be >= 1 hour");
  if (options.replicates < 1) throw InputError("bootstrap needs at least one replicate");
  if (!(options.level > 0.0 && options.level < 1.0)) {
    throw InputError("confidence level must lie in (0, 1)");
  }
  for (const auto& [b, e] : groups) {
    if (b < 0 || e > scores.size() || b > e) throw InputError("bootstrap row group out of range");
  }

  BootstrapCI ci;
  ci.statistic = name;
  ci.level = options.level;
  ci.block_hours = options.block_hours;
  ci.replicates = options.replicates;
  ci.seed = options.seed;
  ci.low_replicate_warning = options.replicates < 100;
  ci.point = stat(scores, labels);

  const auto reps = static_cast<std::size_t>(options.replicates);
  std::vector<double> values(reps, 0.0);
  std::vector<char> valid(reps, 0);
  parallel_for(reps, options.threads, [&](std::size_t r) {
    const auto rows = circular_block_resample(groups, options.block_hours,
                                              derive_seed(options.seed, r));
    Vector s(static_cast<Index>(rows.size()));
    Labels y(static_cast<Index>(rows.size()));
    Index pos = 0;
    for (Index row : rows) {
      s[pos] = scores[row];
      y[pos] = labels[row];
      ++pos;
    }
    const Index npos = y.sum();
    if (npos == 0 || npos == y.size()) return;  // single class
    values[r] = stat(s, y);
    valid[r] = 1;
  });

  std::vector<double> kept;
  for (std::size_t r = 0; r < reps; ++r) {
    if (valid[r]) kept.push_back(values[r]);
  }
  ci.skipped_replicates = static_cast<int>(reps - kept.size());
  if (kept.empty()) throw InputError("every bootstrap replicate was single-class");
  std::sort(kept.begin(), kept.end());
  const double alpha = 1.0 - options.level;
  ci.lower = quantile_sorted(kept, alpha / 2.0);
  ci.upper = quantile_sorted(kept, 1.0 - alpha / 2.0);
  return ci;
}

}  // namespace debris_ews
