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
#include <string>
#include <vector>

#include "debris_ews/dataset.hpp"
#include "debris_ews/model_io.hpp"

namespace debris_ews {

enum class ModelKind { kRandomForest, kLogistic, kGbt };
std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);  // "rf", "lr", "gbt"

// One fully specified model configuration.
struct ModelSpec {
  ModelKind kind = ModelKind::kRandomForest;
  ForestParams forest;
  GbtParams gbt;
  LogisticParams logistic;
  double training_weight = 1.0;

  // Short human-readable summary, e.g. "rf trees=40 depth=15 leaf=1".
  std::string describe() const;
};

AnyModel train_model(const FeatureMatrix& X, const Labels& y, const ModelSpec& spec,
                     std::uint64_t seed, int threads = 1);

struct GridSpec {
  ModelKind kind = ModelKind::kRandomForest;
  std::vector<int> n_trees{10, 40, 70, 100};
  std::vector<std::optional<int>> max_depth{std::nullopt, 1, 2, 6, 15, 39, 100};
  std::vector<int> min_samples_leaf{1, 2, 4};  // gbt: minimum child weight
  std::vector<double> learning_rate{0.001, 0.01, 0.1, 1.0};  // gbt only
  std::vector<double> l2_coefficient{0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0};  // lr only
  bool include_unpenalised = true;                                               // lr only
  double training_weight = 1.0;

  // Expanded cells in a fixed order. Throws InputError on an empty grid.
  std::vector<ModelSpec> cells() const;
};

struct GridCellScore {
  ModelSpec spec;
  std::vector<double> fold_auprc;
  double mean_auprc = 0.0;
  double std_error = 0.0;
};

struct GridSearchResult {
  GridCellScore best;
  std::vector<GridCellScore> cells;
};

// Window-grouped k-fold cross-validation of every grid cell. Folds whose
// held-out rows are single-class are an error. Ties in mean AUPRC prefer the
// smaller model: fewer trees, then shallower (unbounded counts as deepest).
GridSearchResult grid_search_cv(const std::vector<DatasetWindow>& windows, const FeatureSpec& spec,
                                const GridSpec& grid, int k, std::uint64_t seed,
                                const LabelingConfig& labeling = {}, int threads = 1);

// Cross-validated AUPRC of a single model spec.
GridCellScore cross_validate(const std::vector<DatasetWindow>& windows, const FeatureSpec& spec,
                             const ModelSpec& model, int k, std::uint64_t seed,
                             const LabelingConfig& labeling = {}, int threads = 1);

}  // namespace debris_ews
