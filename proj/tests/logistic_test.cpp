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

#include "debris_ews/logistic.hpp"
#include "debris_ews/rng.hpp"

namespace debris_ews {
namespace {

struct Data {
  FeatureMatrix X;
  Labels y;
};

Data noisy(std::uint64_t seed, Index n, Index f) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Data d{FeatureMatrix(n, f), Labels(n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < f; ++j) d.X(i, j) = g(rng);
    d.y[i] = d.X(i, 0) - 0.5 * d.X(i, 1 % f) + g(rng) > 0.5;
  }
  return d;
}

TEST(Logistic, ZeroModelScoresHalf) {
  LinearModel m;
  m.weights = Vector::Zero(3);
  EXPECT_EQ(m.predict_proba(FeatureMatrix::Random(4, 3)), Vector::Constant(4, 0.5));
  EXPECT_THROW(m.predict_proba(FeatureMatrix::Random(4, 2)), InputError);
}

TEST(Logistic, SymmetricDataHasZeroBias) {
  // Mirror pairs (x, 1) and (-x, 0).
  Rng rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  FeatureMatrix X(200, 2);
  Labels y(200);
  for (Index i = 0; i < 100; ++i) {
    const double a = g(rng), b = g(rng);
    X.row(2 * i) << a, b;
    X.row(2 * i + 1) << -a, -b;
    const bool pos = a + g(rng) > 0;
    y[2 * i] = pos;
    y[2 * i + 1] = !pos;
  }
  const auto m = fit_logistic(X, y, Vector::Ones(200), {});
  EXPECT_TRUE(m.converged);
  EXPECT_NEAR(m.bias, 0.0, 1e-4);
}

TEST(Logistic, SeparableWithL2StaysFinite) {
  FeatureMatrix X(6, 1);
  X << -3, -2, -1, 1, 2, 3;
  Labels y(6);
  y << 0, 0, 0, 1, 1, 1;
  LogisticParams p;
  p.penalty = Penalty::kL2;
  p.coefficient = 0.1;
  const auto m = fit_logistic(X, y, Vector::Ones(6), p);
  EXPECT_TRUE(std::isfinite(m.weights[0]));
  EXPECT_GT(m.weights[0], 0.0);
  const Vector s = m.predict_proba(X);
  for (Index i = 0; i < 6; ++i) EXPECT_EQ(s[i] >= 0.5, y[i] == 1);

  // The optimum beats every nearby weight on a small grid.
  const Vector w = Vector::Ones(6);
  const double best = logistic_objective(X, y, w, m.weights, m.bias, p);
  for (double dw : {-0.05, 0.05}) {
    for (double db : {-0.05, 0.0, 0.05}) {
      Vector v = m.weights;
      v[0] += dw;
      EXPECT_LT(best, logistic_objective(X, y, w, v, m.bias + db, p));
    }
  }
}

TEST(Logistic, GradientMatchesFiniteDifferences) {
  const auto d = noisy(5, 50, 3);
  const Vector w = Vector::LinSpaced(50, 0.5, 2.0);
  LogisticParams p;
  p.penalty = Penalty::kL2;
  p.coefficient = 0.3;
  p.training_weight = 3.0;
  const Vector beta = (Vector(3) << 0.2, -0.4, 0.1).finished();
  const double b = 0.3;
  const Vector grad = logistic_gradient(d.X, d.y, w, beta, b, p);
  const double h = 1e-6;
  for (Index j = 0; j < 3; ++j) {
    Vector up = beta, dn = beta;
    up[j] += h;
    dn[j] -= h;
    const double fd = (logistic_objective(d.X, d.y, w, up, b, p) -
                       logistic_objective(d.X, d.y, w, dn, b, p)) / (2 * h);
    EXPECT_NEAR(grad[j], fd, 1e-5);
  }
  const double fd_b = (logistic_objective(d.X, d.y, w, beta, b + h, p) -
                       logistic_objective(d.X, d.y, w, beta, b - h, p)) / (2 * h);
  EXPECT_NEAR(grad[3], fd_b, 1e-5);
}

TEST(Logistic, LossTraceNeverIncreases) {
  const auto d = noisy(6, 300, 4);
  const auto m = fit_logistic(d.X, d.y, Vector::Ones(300), {});
  ASSERT_GE(m.loss_trace.size(), 2u);
  for (std::size_t k = 1; k < m.loss_trace.size(); ++k) {
    EXPECT_LE(m.loss_trace[k], m.loss_trace[k - 1]);
  }
  EXPECT_TRUE(m.converged);
}

TEST(Logistic, WeightScaleInvarianceUnpenalised) {
  const auto d = noisy(7, 200, 3);
  const auto a = fit_logistic(d.X, d.y, Vector::Ones(200), {});
  const auto b = fit_logistic(d.X, d.y, Vector::Constant(200, 5.0), {});
  EXPECT_LT((a.weights - b.weights).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(a.bias, b.bias, 1e-6);
}

TEST(Logistic, TrainingWeightShiftsBias) {
  const auto d = noisy(8, 200, 2);
  LogisticParams heavy;
  heavy.training_weight = 10.0;
  const auto a = fit_logistic(d.X, d.y, Vector::Ones(200), {});
  const auto b = fit_logistic(d.X, d.y, Vector::Ones(200), heavy);
  EXPECT_GT(b.bias, a.bias);
}

TEST(Logistic, RejectsBadInput) {
  const auto d = noisy(9, 20, 2);
  LogisticParams p;
  p.penalty = Penalty::kL2;
  p.coefficient = -1.0;
  EXPECT_THROW(fit_logistic(d.X, d.y, Vector::Ones(20), p), InputError);
  FeatureMatrix inf = d.X;
  inf(0, 0) = INFINITY;
  EXPECT_THROW(fit_logistic(inf, d.y, Vector::Ones(20), {}), InputError);
}

}  // namespace
}  // namespace debris_ews
