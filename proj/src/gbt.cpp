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

#include "debris_ews/gbt.hpp"

#include <cmath>

#include "debris_ews/logistic.hpp"

namespace debris_ews {

namespace {

double mean_log_loss(const Vector& margin, const Labels& y, const Vector& w) {
  double total = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    const double z = margin[i];
    const double sp = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    total += w[i] * (sp - y[i] * z);
  }
  return total / w.sum();
}

}  // namespace

Vector GbtModel::decision_function(const FeatureMatrix& X) const {
  if (X.cols() != n_features) {
    throw InputError("boosted model expects " + std::to_string(n_features) +
                     " features, got " + std::to_string(X.cols()));
  }
  Vector margin = Vector::Constant(X.rows(), initial_log_odds);
  for (const auto& t : trees) margin += t.predict(X);
  return margin;
}

Vector GbtModel::predict_proba(const FeatureMatrix& X) const {
  return decision_function(X).unaryExpr([](double z) { return sigmoid(z); });
}

GbtModel fit_gbt(const FeatureMatrix& X, const Labels& y, const Vector& sample_weights,
                 const GbtParams& params) {
  validate_training_data(X, y, sample_weights);
  if (params.n_rounds < 0) throw InputError("boosting rounds must be >= 0");
  if (!(params.learning_rate >= 0.0)) throw InputError("learning rate must be >= 0");
  if (!(params.lambda >= 0.0)) throw InputError("lambda must be >= 0");
  if (!(params.training_weight > 0.0)) throw InputError("training weight must be positive");

  Vector w = sample_weights;
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i]) w[i] *= params.training_weight;
  }
  double wp = 0.0;
  for (Index i = 0; i < y.size(); ++i) wp += y[i] ? w[i] : 0.0;
  const double wn = w.sum() - wp;
  if (wp <= 0.0 || wn <= 0.0) throw InputError("boosting needs both classes in the training data");

  GbtModel model;
  model.params = params;
  model.n_features = X.cols();
  model.initial_log_odds = std::log(wp / wn);

  RegressionTreeParams tp{params.max_depth, params.min_child_weight, params.lambda,
                          params.learning_rate};
  Vector margin = Vector::Constant(X.rows(), model.initial_log_odds);
  model.train_loss.push_back(mean_log_loss(margin, y, w));
  Vector grad(X.rows()), hess(X.rows());
  for (int round = 0; round < params.n_rounds; ++round) {
    for (Index i = 0; i < X.rows(); ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = w[i] * (p - y[i]);
      hess[i] = w[i] * p * (1.0 - p);
    }
    DecisionTree tree = fit_regression_tree(X, grad, hess, tp);
    margin += tree.predict(X);
    model.trees.push_back(std::move(tree));
    model.train_loss.push_back(mean_log_loss(margin, y, w));
  }
  return model;
}

}  // namespace debris_ews
