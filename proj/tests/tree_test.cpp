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

#include "debris_ews/rng.hpp"
#include "debris_ews/tree.hpp"

namespace debris_ews {
namespace {

struct Data {
  FeatureMatrix X;
  Labels y;
};

Data random_data(Rng& rng, Index n, Index f, double noise = 0.2) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Data d{FeatureMatrix(n, f), Labels(n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < f; ++j) d.X(i, j) = std::round(g(rng) * 4.0) / 4.0;
    const bool pos = d.X(i, 0) + 0.5 * d.X(i, f - 1) > 0.3;
    d.y[i] = (u(rng) < noise) ? !pos : pos;
  }
  return d;
}

TEST(FitTree, PurePositiveIsSingleLeaf) {
  const FeatureMatrix X = FeatureMatrix::Random(10, 3);
  const Labels y = Labels::Ones(10);
  const auto t = fit_tree(X, y, Vector::Ones(10), {}, 0);
  ASSERT_EQ(t.node_count(), 1u);
  EXPECT_EQ(t.value[0], 1.0);
  EXPECT_EQ(t.depth(), 0);
}

TEST(FitTree, SeparableOneFeatureFitsExactly) {
  FeatureMatrix X(8, 1);
  X << 1, 2, 3, 4, 5, 6, 7, 8;
  Labels y(8);
  y << 0, 0, 1, 1, 0, 1, 0, 0;
  const auto t = fit_tree(X, y, Vector::Ones(8), {}, 0);
  const Vector p = t.predict(X);
  for (Index i = 0; i < 8; ++i) EXPECT_EQ(p[i], y[i]);
}

TEST(FitTree, SplitsAtMidpoint) {
  FeatureMatrix X(4, 1);
  X << 1, 2, 5, 6;
  Labels y(4);
  y << 0, 0, 1, 1;
  const auto t = fit_tree(X, y, Vector::Ones(4), {}, 0);
  EXPECT_EQ(t.feature[0], 0);
  EXPECT_EQ(t.threshold[0], 3.5);
}

TEST(FitTree, WeightScaleInvariance) {
  Rng rng(1);
  const auto d = random_data(rng, 200, 4);
  Vector w(200);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (auto& x : w) x = u(rng);
  TreeParams p;
  p.max_depth = 6;
  p.min_samples_leaf = 3;
  const auto a = fit_tree(d.X, d.y, w, p, 0);
  const auto b = fit_tree(d.X, d.y, w * 8.0, p, 0);
  EXPECT_EQ(a.feature, b.feature);
  EXPECT_EQ(a.threshold, b.threshold);
  EXPECT_EQ(a.value, b.value);
}

TEST(FitTree, RespectsDepthAndLeafSize) {
  Rng rng(2);
  const auto d = random_data(rng, 300, 3);
  TreeParams p;
  p.max_depth = 3;
  p.min_samples_leaf = 10;
  const auto t = fit_tree(d.X, d.y, Vector::Ones(300), p, 0);
  EXPECT_LE(t.depth(), 3);
  for (std::size_t n = 0; n < t.node_count(); ++n) {
    if (t.is_leaf(n)) {
      EXPECT_GE(t.count[n], 10);
    }
  }
}

TEST(FitTree, InputErrors) {
  FeatureMatrix X(3, 1);
  X << 1, 2, 3;
  Labels bad(3);
  bad << 0, 2, 1;
  EXPECT_THROW(fit_tree(X, bad, Vector::Ones(3), {}, 0), InputError);
  EXPECT_THROW(fit_tree(FeatureMatrix(0, 1), Labels(0), Vector(0), {}, 0), InputError);
  FeatureMatrix nan = X;
  nan(1, 0) = std::nan("");
  EXPECT_THROW(fit_tree(nan, Labels::Zero(3), Vector::Ones(3), {}, 0), InputError);
  EXPECT_THROW(fit_tree(X, Labels::Zero(3), Vector::Constant(3, -1.0), {}, 0), InputError);
}

TEST(RegressionTree, LeafOutputIsNewtonStep) {
  FeatureMatrix X(4, 1);
  X << 0, 0, 1, 1;
  const Vector g = (Vector(4) << -1, -1, 1, 1).finished();
  const Vector h = Vector::Constant(4, 0.25);
  RegressionTreeParams p;
  p.max_depth = 1;
  p.min_child_weight = 0.0;
  p.lambda = 1.0;
  p.learning_rate = 0.5;
  const auto t = fit_regression_tree(X, g, h, p);
  ASSERT_EQ(t.node_count(), 3u);
  EXPECT_DOUBLE_EQ(t.value[t.left[0]], -0.5 * (-2.0) / (0.5 + 1.0));
  EXPECT_DOUBLE_EQ(t.value[t.right[0]], -0.5 * 2.0 / (0.5 + 1.0));
}

}  // namespace
}  // namespace debris_ews
