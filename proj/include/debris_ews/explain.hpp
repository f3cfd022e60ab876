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
#include <span>
#include <string>
#include <vector>

#include "debris_ews/forest.hpp"
#include "debris_ews/types.hpp"

namespace debris_ews {

// Interventional Shapley attribution of one prediction. Local accuracy:
// phi.sum() + base == score.
struct ShapAttribution {
  Vector phi;
  double base = 0.0;   // mean model output over the background rows
  double score = 0.0;  // model output at the explained row
};

// Exact interventional Shapley values. For every (tree, background row) pair
// the tree is walked once, splitting the walk wherever the explained row and
// the background row disagree; each reached leaf credits the features that
// sent the walk towards the explained row and debits those that sent it
// towards the background row. Results are averaged over background rows and
// trees.
ShapAttribution tree_shap(std::span<const DecisionTree> trees, const Vector& x,
                          const FeatureMatrix& background);
ShapAttribution tree_shap(const ForestModel& model, const Vector& x, const FeatureMatrix& background);

// Exhaustive-coalition oracle: v(S) is the model output with features in S
// taken from x and the rest from a background row, averaged over background.
// Limited to 15 features.
ShapAttribution brute_shap(const ForestModel& model, const Vector& x,
                           const FeatureMatrix& background);

// Up to `max_rows` rows drawn without replacement (seeded), in original order.
FeatureMatrix sample_background(const FeatureMatrix& X, Index max_rows, std::uint64_t seed);

enum class ImportanceMethod { kMeanAbsShap, kPermutation };

struct FeatureImportance {
  Index feature = 0;
  std::string name;
  double score = 0.0;
};

struct ImportanceOptions {
  ImportanceMethod method = ImportanceMethod::kMeanAbsShap;
  std::uint64_t seed = 0;
  int permutations = 10;
  int threads = 1;
};

// Sorted by decreasing score, ties by feature index. mean_abs_shap averages
// |phi| over the rows of X; permutation reports the mean AUPRC drop over
// seeded shuffles of each column.
std::vector<FeatureImportance> importance_ranking(const ForestModel& model, const FeatureMatrix& X,
                                                  const Labels& y, const FeatureMatrix& background,
                                                  const std::vector<std::string>& names,
                                                  const ImportanceOptions& options);

}  // namespace debris_ews
