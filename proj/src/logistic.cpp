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

#include "debris_ews/logistic.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "debris_ews/tree.hpp"

namespace debris_ews {

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double l2(const LogisticParams& p) {
  return p.penalty == Penalty::kL2 ? p.coefficient : 0.0;
}

struct Problem {
  const FeatureMatrix& X;
  const Labels& y;
  Vector w;  // effective row weights
  LogisticParams params;

  Vector scores(const Vector& theta) const {
    const Index d = X.cols();
    return (X * theta.head(d)).array() + theta[d];
  }
  double loss(const Vector& theta) const {
    const Vector z = scores(theta);
    double total = 0.0;
    for (Index i = 0; i < z.size(); ++i) total += w[i] * (softplus(z[i]) - y[i] * z[i]);
    return total + 0.5 * l2(params) * theta.head(X.cols()).squaredNorm();
  }
  Vector residual(const Vector& theta) const {
    const Vector z = scores(theta);
    Vector r(z.size());
    for (Index i = 0; i < z.size(); ++i) r[i] = w[i] * (sigmoid(z[i]) - y[i]);
    return r;
  }
  Vector gradient(const Vector& theta) const {
    const Index d = X.cols();
    const Vector r = residual(theta);
    Vector g(d + 1);
    g.head(d) = X.transpose() * r + l2(params) * theta.head(d);
    g[d] = r.sum();
    return g;
  }
  Eigen::MatrixXd hessian(const Vector& theta) const {
    const Index d = X.cols();
    const Vector z = scores(theta);
    Vector s(z.size());
    for (Index i = 0; i < z.size(); ++i) {
      const double p = sigmoid(z[i]);
      s[i] = w[i] * p * (1.0 - p);
    }
    Eigen::MatrixXd H(d + 1, d + 1);
    const FeatureMatrix SX = s.asDiagonal() * X;
    H.topLeftCorner(d, d) = X.transpose() * SX;
    H.topLeftCorner(d, d).diagonal().array() += l2(params);
    H.block(0, d, d, 1) = SX.colwise().sum().transpose();
    H.block(d, 0, 1, d) = H.block(0, d, d, 1).transpose();
    H(d, d) = s.sum();
    return H;
  }
};

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Vector LinearModel::decision_function(const FeatureMatrix& X) const {
  if (X.cols() != weights.size()) {
    throw InputError("linear model expects " + std::to_string(weights.size()) +
                     " features, got " + std::to_string(X.cols()));
  }
  return (X * weights).array() + bias;
}

Vector LinearModel::predict_proba(const FeatureMatrix& X) const {
  return decision_function(X).unaryExpr([](double z) { return sigmoid(z); });
}

double logistic_objective(const FeatureMatrix& X, const Labels& y, const Vector& w,
                          const Vector& weights, double bias, const LogisticParams& params) {
  Vector theta(weights.size() + 1);
  theta << weights, bias;
  return Problem{X, y, w, params}.loss(theta);
}

Vector logistic_gradient(const FeatureMatrix& X, const Labels& y, const Vector& w,
                         const Vector& weights, double bias, const LogisticParams& params) {
  Vector theta(weights.size() + 1);
  theta << weights, bias;
  return Problem{X, y, w, params}.gradient(theta);
}

LinearModel fit_logistic(const FeatureMatrix& X, const Labels& y, const Vector& sample_weights,
                         const LogisticParams& params) {
  validate_training_data(X, y, sample_weights);
  if (params.penalty == Penalty::kL2 && !(params.coefficient >= 0.0)) {
    throw InputError("L2 coefficient must be >= 0");
  }
  if (!(params.training_weight > 0.0)) throw InputError("training weight must be positive");
  Problem prob{X, y, sample_weights, params};
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i]) prob.w[i] *= params.training_weight;
  }
  const Index d = X.cols();
  Vector theta = Vector::Zero(d + 1);
  double f = prob.loss(theta);

  // The objective is a sum over rows, so the tolerance applies to the
  // weight-averaged gradient.
  const double tolerance = params.gradient_tolerance * std::max(1.0, prob.w.sum());

  LinearModel model;
  model.penalty = params.penalty;
  model.coefficient = params.coefficient;
  model.training_weight = params.training_weight;
  model.loss_trace.push_back(f);

  for (int it = 0; it < params.max_iterations; ++it) {
    if (!std::isfinite(f)) throw InputError("logistic regression: loss became non-finite");
    const Vector g = prob.gradient(theta);
    if (g.norm() < tolerance) {
      model.converged = true;
      break;
    }
    Eigen::MatrixXd H = prob.hessian(theta);
    const double ridge = 1e-10 * (H.trace() / static_cast<double>(d + 1)) + 1e-12;
    H.diagonal().array() += ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    Vector step = -g;
    if (ldlt.info() == Eigen::Success) {
      const Vector newton = ldlt.solve(-g);
      if (newton.allFinite() && newton.dot(g) < 0.0) step = newton;
    }
    const double slope = step.dot(g);
    double t = 1.0;
    double f_new = prob.loss(theta + t * step);
    while (!(f_new <= f + 1e-4 * t * slope) && t > 1e-20) {
      t *= 0.5;
      f_new = prob.loss(theta + t * step);
    }
    model.iterations = it + 1;
    if (!(f_new <= f)) {
      // No further decrease representable in floating point.
      model.converged = true;
      break;
    }
    theta += t * step;
    f = f_new;
    model.loss_trace.push_back(f);
  }
  model.weights = theta.head(d);
  model.bias = theta[d];
  if (!model.weights.allFinite() || !std::isfinite(model.bias)) {
    throw InputError("logistic regression diverged to non-finite parameters");
  }
  return model;
}

}  // namespace debris_ews
