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

#include <vector>

#include "debris_ews/types.hpp"

namespace debris_ews {

enum class Penalty { kNone, kL2 };

struct LogisticParams {
  Penalty penalty = Penalty::kNone;
  double coefficient = 0.0;  // L2 strength: adds coefficient/2 * ||w||^2
  double training_weight = 1.0;
  double gradient_tolerance = 1e-6;
  int max_iterations = 10000;
};

struct LinearModel {
  Vector weights;
  double bias = 0.0;
  Penalty penalty = Penalty::kNone;
  double coefficient = 0.0;
  double training_weight = 1.0;
  int iterations = 0;
  bool converged = false;
  // Objective value after each accepted step (for convergence diagnostics).
  std::vector<double> loss_trace;

  Vector decision_function(const FeatureMatrix& X) const;
  Vector predict_proba(const FeatureMatrix& X) const;
};

double sigmoid(double z);

// Weighted negative log-likelihood, summed over rows, plus the L2 term on
// the weights (the bias is not penalised).
double logistic_objective(const FeatureMatrix& X, const Labels& y, const Vector& w,
                          const Vector& weights, double bias, const LogisticParams& params);
// Gradient of logistic_objective; the last entry is d/d(bias).
Vector logistic_gradient(const FeatureMatrix& X, const Labels& y, const Vector& w,
                         const Vector& weights, double bias, const LogisticParams& params);

// Damped Newton iterations with backtracking (Armijo) line search on the
// convex objective. Stops when the gradient norm falls below
// gradient_tolerance times the total effective row weight (at least 1), or
// after max_iterations. Throws when the loss becomes non-finite.
LinearModel fit_logistic(const FeatureMatrix& X, const Labels& y, const Vector& sample_weights,
                         const LogisticParams& params);

}  // namespace debris_ews
