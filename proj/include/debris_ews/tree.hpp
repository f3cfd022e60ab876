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
#include <optional>
#include <vector>

#include "debris_ews/types.hpp"

namespace debris_ews {

// Flat binary tree. Node 0 is the root; a node with feature < 0 is a leaf.
// Rows with x[feature] <= threshold go left.
struct DecisionTree {
  std::vector<int> feature;
  std::vector<double> threshold;
  std::vector<int> left;
  std::vector<int> right;
  // Classification trees: weighted positive fraction. Regression (boosting)
  // trees: the additive leaf output. Internal nodes hold the same statistic
  // for the node's training rows.
  std::vector<double> value;
  std::vector<double> weight;      // weighted training mass (hessian sum for boosting)
  std::vector<std::int64_t> count; // training rows, bootstrap multiplicity included

  std::size_t node_count() const { return feature.size(); }
  bool is_leaf(std::size_t node) const { return feature[node] < 0; }
  int depth() const;
  int leaf_of(const double* row, Index stride) const;
  template <typename Row>
  double predict(const Row& x) const {
    std::size_t node = 0;
    while (feature[node] >= 0) {
      node = x[feature[node]] <= threshold[node] ? left[node] : right[node];
    }
    return value[node];
  }
  Vector predict(const FeatureMatrix& X) const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct TreeParams {
  std::optional<int> max_depth;  // nullopt: grow until pure or too small
  int min_samples_leaf = 1;      // rows per leaf, bootstrap multiplicity included
  int max_features = 0;          // features examined per split; 0 means all
};

// Greedy weighted-Gini CART. Split candidates are midpoints between
// consecutive distinct values; ties go to the lowest feature index and then
// the lowest threshold. `seed` only matters when max_features < n_features.
// `counts` (optional, same length as y) gives per-row multiplicities used by
// min_samples_leaf; rows with count 0 are ignored.
DecisionTree fit_tree(const FeatureMatrix& X, const Labels& y, const Vector& sample_weights,
                      const TreeParams& params, std::uint64_t seed,
                      const std::vector<std::int64_t>* counts = nullptr);

struct RegressionTreeParams {
  std::optional<int> max_depth = 6;
  double min_child_weight = 1.0;  // minimum hessian mass per child
  double lambda = 1.0;            // L2 penalty on leaf outputs
  double learning_rate = 0.1;     // leaf outputs are pre-multiplied by this
};

// Second-order regression tree for gradient boosting: leaf output
// -lr * G / (H + lambda), split gain G_L^2/(H_L+l) + G_R^2/(H_R+l) - G^2/(H+l).
DecisionTree fit_regression_tree(const FeatureMatrix& X, const Vector& grad, const Vector& hess,
                                 const RegressionTreeParams& params);

// Shared input checks: rectangular, binary labels, positive finite weights,
// finite features. Throws InputError.
void validate_training_data(const FeatureMatrix& X, const Labels& y, const Vector& w);

}  // namespace debris_ews
