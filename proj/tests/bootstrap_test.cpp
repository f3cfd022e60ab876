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

#include <algorithm>

#include "debris_ews/bootstrap.hpp"
#include "debris_ews/metrics.hpp"
#include "debris_ews/rng.hpp"

namespace debris_ews {
namespace {

struct Sample {
  Vector scores;
  Labels labels;
  RowGroups groups;
};

Sample random_sample(std::uint64_t seed, int windows, int length) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Sample s{Vector(windows * length), Labels(windows * length), {}};
  for (int w = 0; w < windows; ++w) {
    s.groups.push_back({w * length, (w + 1) * length});
    for (int h = 0; h < length; ++h) {
      const Index i = w * length + h;
      s.labels[i] = u(rng) < 0.2;
      s.scores[i] = 0.5 * u(rng) + 0.4 * s.labels[i];
    }
  }
  return s;
}

TEST(Resample, StaysInsideGroupsAndKeepsLength) {
  const RowGroups groups = {{0, 10}, {10, 13}, {13, 30}};
  const auto rows = circular_block_resample(groups, 6, 99);
  ASSERT_EQ(rows.size(), 30u);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (Index r = groups[g].first; r < groups[g].second; ++r) {
      EXPECT_GE(rows[r], groups[g].first);
      EXPECT_LT(rows[r], groups[g].second);
    }
  }
  // Inside a block, rows advance by one with wrap-around.
  const Index len = groups[2].second - groups[2].first;
  for (Index r = 13 + 1; r < 13 + 6; ++r) {
    EXPECT_EQ(rows[r] - 13, (rows[r - 1] - 13 + 1) % len);
  }
  EXPECT_EQ(rows, circular_block_resample(groups, 6, 99));
}

TEST(Bootstrap, DeterministicAndThreadFree) {
  const auto s = random_sample(1, 20, 30);
  BootstrapOptions o;
  o.replicates = 200;
  o.seed = 8;
  const auto a = block_bootstrap_ci(s.scores, s.labels, s.groups, BootstrapStatistic::kAuprc, o);
  o.threads = 3;
  const auto b = block_bootstrap_ci(s.scores, s.labels, s.groups, BootstrapStatistic::kAuprc, o);
  EXPECT_EQ(a.lower, b.lower);
  EXPECT_EQ(a.upper, b.upper);
  EXPECT_LE(a.lower, a.upper);
  EXPECT_EQ(a.point, auprc(s.scores, s.labels));
  o.seed = 9;
  const auto c = block_bootstrap_ci(s.scores, s.labels, s.groups, BootstrapStatistic::kAuprc, o);
  EXPECT_NE(a.lower, c.lower);
}

TEST(Bootstrap, RotationGivesZeroWidth) {
  const auto s = random_sample(2, 8, 25);
  BootstrapOptions o;
  o.block_hours = 25;
  o.replicates = 150;
  for (auto stat : {BootstrapStatistic::kAuprc, BootstrapStatistic::kAuroc}) {
    const auto ci = block_bootstrap_ci(s.scores, s.labels, s.groups, stat, o);
    EXPECT_EQ(ci.lower, ci.point);
    EXPECT_EQ(ci.upper, ci.point);
  }
}

TEST(Bootstrap, ConstantStatisticGivesZeroWidth) {
  const auto s = random_sample(3, 5, 20);
  BootstrapOptions o;
  o.replicates = 50;
  const auto ci = block_bootstrap_ci(s.scores, s.labels, s.groups, "const",
                                     [](const Vector&, const Labels&) { return 0.25; }, o);
  EXPECT_EQ(ci.lower, 0.25);
  EXPECT_EQ(ci.upper, 0.25);
  EXPECT_TRUE(ci.low_replicate_warning);
}

TEST(Bootstrap, Errors) {
  const auto s = random_sample(4, 3, 10);
  BootstrapOptions o;
  o.block_hours = 0;
  EXPECT_THROW(block_bootstrap_ci(s.scores, s.labels, s.groups, BootstrapStatistic::kAuprc, o),
               InputError);
  o.block_hours = 6;
  o.level = 1.0;
  EXPECT_THROW(block_bootstrap_ci(s.scores, s.labels, s.groups, BootstrapStatistic::kAuprc, o),
               InputError);
}

TEST(Quantile, Type7) {
  const std::vector<double> v = {1, 2, 3, 4};
  EXPECT_EQ(quantile_sorted(v, 0.0), 1.0);
  EXPECT_EQ(quantile_sorted(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.25), 1.75);
}

TEST(RowGroups, FromSpans) {
  const std::vector<WindowSpan> spans = {{0, 0, 5, 0, {}}, {1, 5, 12, 0, 3}};
  EXPECT_EQ(row_groups(spans), (RowGroups{{0, 5}, {5, 12}}));
}

}  // namespace
}  // namespace debris_ews
