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

#include <optional>
#include <vector>

#include "debris_ews/tree.hpp"

namespace debris_ews {

struct GbtParams {
  int n_rounds = 100;
  std::optional<int> max_depth = 6;
  double min_child_weight = 1.0;
  double learning_rate = 0.1;
  double lambda = 1.0;
  double training_weight = 1.0;
};

// Gradient-boosted regression trees on the logistic loss.
struct GbtModel {
  std::vector<DecisionTree> trees;  // leaf values already scaled by the learning rate
  double initial_log_odds = 0.0;
  GbtParams params;
  Index n_features = 0;
  // Weighted mean log-loss on the training rows after each round (index 0 is
  // the prior-only model).
  std::vector<double> train_loss;

  Vector decision_function(const FeatureMatrix& X) const;
  Vector predict_proba(const FeatureMatrix& X) const;
};

GbtModel fit_gbt(const FeatureMatrix& X, const Labels& y, const Vector& sample_weights,
                 const GbtParams& params);

}  // namespace debris_ews
