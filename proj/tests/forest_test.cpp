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

#include "debris_ews/forest.hpp"
#include "debris_ews/metrics.hpp"
#include "debris_ews/model_io.hpp"
#include "debris_ews/rng.hpp"

namespace debris_ews {
namespace {

struct Data {
  FeatureMatrix X;
  Labels y;
};

// Imbalanced: about one row in eight is positive.
Data imbalanced(std::uint64_t seed, Index n = 400, Index f = 5) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Data d{FeatureMatrix(n, f), Labels(n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < f; ++j) d.X(i, j) = g(rng);
    d.y[i] = d.X(i, 0) + 0.7 * g(rng) > 1.4;
  }
  return d;
}

std::string serialized(const ForestModel& m) {
  return to_json(ModelDocument{m, FeatureSpec{}, {}, m.seed}).dump();
}

TEST(Forest, SingleTreeWithoutBootstrapEqualsTree) {
  const auto d = imbalanced(1);
  ForestParams p;
  p.n_trees = 1;
  p.bootstrap = false;
  p.tree.max_features = 0;
  const auto f = fit_forest(d.X, d.y, p, 1.0, 9);
  TreeParams tp = p.tree;
  tp.max_features = f.max_features;
  const auto t = fit_tree(d.X, d.y, Vector::Ones(d.X.rows()), tp, f.tree_seeds[0]);
  EXPECT_EQ(f.trees[0], t);
  EXPECT_EQ(f.predict_proba(d.X), t.predict(d.X));
}

TEST(Forest, DeterministicAcrossThreads) {
  const auto d = imbalanced(2);
  ForestParams p;
  p.n_trees = 8;
  const auto a = fit_forest(d.X, d.y, p, 1.0, 5, 1);
  const auto b = fit_forest(d.X, d.y, p, 1.0, 5, 4);
  EXPECT_EQ(serialized(a), serialized(b));
  const auto c = fit_forest(d.X, d.y, p, 1.0, 6, 1);
  EXPECT_NE(serialized(a), serialized(c));
}

TEST(Forest, ScoreIsMeanOfTrees) {
  const auto d = imbalanced(3);
  ForestParams p;
  p.n_trees = 5;
  const auto f = fit_forest(d.X, d.y, p, 1.0, 1);
  const Vector s = f.predict_proba(d.X);
  for (Index i = 0; i < 20; ++i) {
    double m = 0.0;
    for (const auto& t : f.trees) m += t.predict(d.X.row(i));
    EXPECT_DOUBLE_EQ(s[i], m / 5.0);
  }
}

TEST(Forest, TwoLeafMean) {
  ForestModel f;
  DecisionTree a, b;
  for (auto* t : {&a, &b}) {
    t->feature = {-1};
    t->threshold = {0.0};
    t->left = {-1};
    t->right = {-1};
    t->weight = {1.0};
    t->count = {1};
  }
  a.value = {0.2};
  b.value = {0.8};
  f.trees = {a, b};
  f.n_features = 1;
  EXPECT_DOUBLE_EQ(f.predict_proba(FeatureMatrix::Zero(3, 1))[1], 0.5);
}

TEST(Forest, TrainingWeightRaisesRecall) {
  const auto d = imbalanced(4, 600);
  ForestParams p;
  p.n_trees = 10;
  p.tree.max_depth = 4;
  p.tree.min_samples_leaf = 5;
  auto recall_at_half = [&](double tw) {
    const auto f = fit_forest(d.X, d.y, p, tw, 3);
    return *point_metrics(confusion(d.y, classify(f.predict_proba(d.X), 0.5))).recall;
  };
  EXPECT_GE(recall_at_half(1e6), recall_at_half(1.0));
}

TEST(Forest, FeatureScaleInvariance) {
  const auto d = imbalanced(5);
  ForestParams p;
  p.n_trees = 6;
  const auto a = fit_forest(d.X, d.y, p, 1.0, 2);
  FeatureMatrix Xs = d.X;
  Xs.col(0) *= 1000.0;
  Xs.col(3) *= 0.25;
  const auto b = fit_forest(Xs, d.y, p, 1.0, 2);
  EXPECT_EQ(a.predict_proba(d.X), b.predict_proba(Xs));
}

TEST(Forest, DefaultMaxFeatures) {
  EXPECT_EQ(resolve_max_features(-1, 48), 6);
  EXPECT_EQ(resolve_max_features(0, 48), 48);
  EXPECT_EQ(resolve_max_features(100, 48), 48);
  EXPECT_EQ(resolve_max_features(-1, 1), 1);
}

}  // namespace
}  // namespace debris_ews
