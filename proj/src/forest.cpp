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

#include "debris_ews/forest.hpp"

#include <cmath>

#include "debris_ews/parallel.hpp"
#include "debris_ews/rng.hpp"

namespace debris_ews {

int resolve_max_features(int requested, Index n_features) {
  if (requested < 0) {
    return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_features)))));
  }
  if (requested == 0 || requested > n_features) return static_cast<int>(n_features);
  return requested;
}

Vector ForestModel::predict_proba(const FeatureMatrix& X) const {
  if (X.cols() != n_features) {
    throw InputError("forest expects " + std::to_string(n_features) + " features, got " +
                     std::to_string(X.cols()));
  }
  Vector sum = Vector::Zero(X.rows());
  for (const auto& t : trees) sum += t.predict(X);
  return sum / static_cast<double>(trees.size());
}

ForestModel fit_forest(const FeatureMatrix& X, const Labels& y, const ForestParams& params,
                       double training_weight, std::uint64_t seed, int threads) {
  return fit_forest(X, y, Vector::Ones(X.rows()), params, training_weight, seed, threads);
}

ForestModel fit_forest(const FeatureMatrix& X, const Labels& y, const Vector& sample_weights,
                       const ForestParams& params, double training_weight, std::uint64_t seed,
                       int threads) {
  validate_training_data(X, y, sample_weights);
  if (params.n_trees < 1) throw InputError("a forest needs at least one tree");
  if (!(training_weight > 0.0) || !std::isfinite(training_weight)) {
    throw InputError("training weight must be positive and finite");
  }
  ForestModel model;
  model.params = params;
  model.seed = seed;
  model.training_weight = training_weight;
  model.n_features = X.cols();
  model.max_features = resolve_max_features(params.tree.max_features, X.cols());

  Vector w = sample_weights;
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i]) w[i] *= training_weight;
  }
  TreeParams tp = params.tree;
  tp.max_features = model.max_features;

  const auto n_trees = static_cast<std::size_t>(params.n_trees);
  model.trees.resize(n_trees);
  model.tree_seeds.resize(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) model.tree_seeds[t] = derive_seed(seed, t);

  parallel_for(n_trees, threads, [&](std::size_t t) {
    if (!params.bootstrap) {
      model.trees[t] = fit_tree(X, y, w, tp, model.tree_seeds[t]);
      return;
    }
    Rng rng(derive_seed(model.tree_seeds[t], 1));
    std::uniform_int_distribution<Index> pick(0, X.rows() - 1);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(X.rows()), 0);
    for (Index k = 0; k < X.rows(); ++k) ++counts[static_cast<std::size_t>(pick(rng))];
    model.trees[t] = fit_tree(X, y, w, tp, model.tree_seeds[t], &counts);
  });
  return model;
}

}  // namespace debris_ews
