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

#include "debris_ews/explain.hpp"
#include "debris_ews/rng.hpp"

namespace debris_ews {
namespace {

DecisionTree leaf(double v) {
  DecisionTree t;
  t.feature = {-1};
  t.threshold = {0.0};
  t.left = {-1};
  t.right = {-1};
  t.value = {v};
  t.weight = {1.0};
  t.count = {1};
  return t;
}

DecisionTree stump(int feature, double thr, double lo, double hi) {
  DecisionTree t;
  t.feature = {feature, -1, -1};
  t.threshold = {thr, 0.0, 0.0};
  t.left = {1, -1, -1};
  t.right = {2, -1, -1};
  t.value = {0.5 * (lo + hi), lo, hi};
  t.weight = {2.0, 1.0, 1.0};
  t.count = {2, 1, 1};
  return t;
}

ForestModel forest_of(std::vector<DecisionTree> trees, Index n_features) {
  ForestModel f;
  f.trees = std::move(trees);
  f.n_features = n_features;
  return f;
}

FeatureMatrix random_matrix(Rng& rng, Index rows, Index cols) {
  std::uniform_int_distribution<int> u(0, 4);
  FeatureMatrix X(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) X(i, j) = u(rng);
  return X;
}

TEST(TreeShap, ConstantModelHasNoAttribution) {
  Rng rng(1);
  const auto f = forest_of({leaf(0.3)}, 3);
  const auto bg = random_matrix(rng, 10, 3);
  const auto a = tree_shap(f, Vector::Constant(3, 2.0), bg);
  EXPECT_EQ(a.phi, Vector::Zero(3));
  EXPECT_DOUBLE_EQ(a.base, 0.3);
}

TEST(TreeShap, StumpCreditsItsFeature) {
  Rng rng(2);
  const auto f = forest_of({stump(0, 1.5, 0.1, 0.9)}, 3);
  const auto bg = random_matrix(rng, 20, 3);
  const Vector x = (Vector(3) << 4, 0, 0).finished();
  const auto a = tree_shap(f, x, bg);
  double base = 0.0;
  for (Index i = 0; i < bg.rows(); ++i) base += bg(i, 0) <= 1.5 ? 0.1 : 0.9;
  base /= 20.0;
  EXPECT_NEAR(a.base, base, 1e-12);
  EXPECT_NEAR(a.phi[0], 0.9 - base, 1e-12);
  EXPECT_EQ(a.phi[1], 0.0);
  EXPECT_EQ(a.phi[2], 0.0);
}

TEST(TreeShap, AdditiveStumpsDecompose) {
  Rng rng(3);
  const auto bg = random_matrix(rng, 16, 2);
  const Vector x = (Vector(2) << 3, 0).finished();
  const auto t0 = stump(0, 2.5, 0.0, 0.6);
  const auto t1 = stump(1, 0.5, 0.8, 0.2);
  const auto both = tree_shap(forest_of({t0, t1}, 2), x, bg);
  const auto only0 = tree_shap(forest_of({t0}, 2), x, bg);
  const auto only1 = tree_shap(forest_of({t1}, 2), x, bg);
  EXPECT_NEAR(both.phi[0], 0.5 * only0.phi[0], 1e-12);
  EXPECT_NEAR(both.phi[1], 0.5 * only1.phi[1], 1e-12);
  const auto brute = brute_shap(forest_of({t0, t1}, 2), x, bg);
  EXPECT_NEAR((both.phi - brute.phi).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(TreeShap, ExplainedRowEqualsBackground) {
  const Vector x = (Vector(2) << 1, 3).finished();
  FeatureMatrix bg(1, 2);
  bg.row(0) = x.transpose();
  DecisionTree t = stump(0, 2.0, 0.2, 0.7);
  const auto a = tree_shap(forest_of({t, stump(1, 2.0, 0.4, 0.1)}, 2), x, bg);
  EXPECT_EQ(a.phi, Vector::Zero(2));
}

TEST(TreeShap, SymmetricFeaturesShareCredit) {
  // f = 1 iff x0 > 0.5 and x1 > 0.5, written with x0 at the root.
  DecisionTree t;
  t.feature = {0, -1, 1, -1, -1};
  t.threshold = {0.5, 0, 0.5, 0, 0};
  t.left = {1, -1, 3, -1, -1};
  t.right = {2, -1, 4, -1, -1};
  t.value = {0.25, 0.0, 0.5, 0.0, 1.0};
  t.weight = {4, 2, 2, 1, 1};
  t.count = {4, 2, 2, 1, 1};
  FeatureMatrix bg(2, 2);
  bg << 0, 0, 1, 1;
  const auto a = tree_shap(forest_of({t}, 2), Vector::Ones(2), bg);
  EXPECT_NEAR(a.phi[0], a.phi[1], 1e-15);
  EXPECT_NEAR(a.phi.sum() + a.base, 1.0, 1e-15);
}

TEST(TreeShap, MatchesBruteForceOnRandomForests) {
  Rng rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    const Index f = 2 + rep % 4;
    const FeatureMatrix X = random_matrix(rng, 80, f);
    Labels y(80);
    for (Index i = 0; i < 80; ++i) y[i] = X(i, 0) + X(i, f - 1) > 4;
    ForestParams p;
    p.n_trees = 4;
    p.tree.max_depth = 4;
    const auto model = fit_forest(X, y, p, 1.0, rep);
    const auto bg = X.topRows(12);
    for (Index r = 40; r < 44; ++r) {
      const Vector x = X.row(r).transpose();
      const auto a = tree_shap(model, x, bg);
      const auto b = brute_shap(model, x, bg);
      EXPECT_LT((a.phi - b.phi).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_NEAR(a.base, b.base, 1e-12);
      EXPECT_NEAR(a.phi.sum() + a.base, model.predict_row(x), 1e-12);
    }
  }
}

TEST(TreeShap, EnsembleIsMeanOfTrees) {
  Rng rng(5);
  const FeatureMatrix X = random_matrix(rng, 60, 3);
  Labels y(60);
  for (Index i = 0; i < 60; ++i) y[i] = X(i, 1) > 2;
  ForestParams p;
  p.n_trees = 3;
  const auto model = fit_forest(X, y, p, 1.0, 1);
  const Vector x = X.row(7).transpose();
  Vector mean = Vector::Zero(3);
  for (const auto& t : model.trees) mean += tree_shap(forest_of({t}, 3), x, X).phi;
  EXPECT_LT((tree_shap(model, x, X).phi - mean / 3.0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TreeShap, InputErrors) {
  const auto f = forest_of({leaf(0.1)}, 2);
  EXPECT_THROW(tree_shap(f, Vector::Zero(3), FeatureMatrix::Zero(2, 2)), InputError);
  EXPECT_THROW(tree_shap(f, Vector::Zero(2), FeatureMatrix::Zero(0, 2)), InputError);
  EXPECT_THROW(brute_shap(forest_of({leaf(0.1)}, 16), Vector::Zero(16), FeatureMatrix::Zero(1, 16)),
               InputError);
}

TEST(Importance, UsedFeatureRanksFirstUnusedIsZero) {
  Rng rng(6);
  const FeatureMatrix X = random_matrix(rng, 200, 3);
  Labels y(200);
  for (Index i = 0; i < 200; ++i) y[i] = X(i, 0) >= 3;
  const auto model = forest_of({stump(0, 2.5, 0.0, 1.0)}, 3);
  const std::vector<std::string> names = {"a", "b", "c"};
  for (auto method : {ImportanceMethod::kMeanAbsShap, ImportanceMethod::kPermutation}) {
    ImportanceOptions o;
    o.method = method;
    o.seed = 3;
    const auto r = importance_ranking(model, X, y, X.topRows(30), names, o);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0].feature, 0);
    EXPECT_EQ(r[0].name, "a");
    EXPECT_GT(r[0].score, 0.0);
    EXPECT_EQ(r[1].score, 0.0);
    EXPECT_EQ(r[2].score, 0.0);
  }
}

TEST(SampleBackground, SeededSubsetInOrder) {
  FeatureMatrix X(50, 1);
  for (Index i = 0; i < 50; ++i) X(i, 0) = i;
  const auto a = sample_background(X, 10, 1);
  ASSERT_EQ(a.rows(), 10);
  for (Index i = 1; i < 10; ++i) EXPECT_LT(a(i - 1, 0), a(i, 0));
  EXPECT_EQ(a, sample_background(X, 10, 1));
  EXPECT_EQ(sample_background(X, 100, 1), X);
}

}  // namespace
}  // namespace debris_ews
