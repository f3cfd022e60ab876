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
#include <vector>

#include "debris_ews/tree.hpp"

namespace debris_ews {

struct ForestParams {
  int n_trees = 40;
  TreeParams tree{std::optional<int>(15), 1, -1};  // max_features -1: floor(sqrt(n_features))
  bool bootstrap = true;
};

// Random forest of Gini trees with soft voting.
struct ForestModel {
  std::vector<DecisionTree> trees;
  std::vector<std::uint64_t> tree_seeds;
  int max_features = 0;
  double training_weight = 1.0;
  ForestParams params;
  std::uint64_t seed = 0;
  Index n_features = 0;

  // Mean over trees of the leaf positive fraction.
  Vector predict_proba(const FeatureMatrix& X) const;
  template <typename Row>
  double predict_row(const Row& x) const {
    double s = 0.0;
    for (const auto& t : trees) s += t.predict(x);
    return s / static_cast<double>(trees.size());
  }
};

int resolve_max_features(int requested, Index n_features);

// Each tree sees a bootstrap resample (n draws with replacement, seeded per
// tree) and positive rows weighted by `training_weight`. Trees are grown on
// up to `threads` workers; the result does not depend on the thread count.
ForestModel fit_forest(const FeatureMatrix& X, const Labels& y, const ForestParams& params,
                       double training_weight, std::uint64_t seed, int threads = 1);
ForestModel fit_forest(const FeatureMatrix& X, const Labels& y, const Vector& sample_weights,
                       const ForestParams& params, double training_weight, std::uint64_t seed,
                       int threads = 1);

}  // namespace debris_ews
