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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "debris_ews/dataset.hpp"
#include "debris_ews/types.hpp"

namespace debris_ews {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  std::int64_t positives() const { return tp + fn; }
  std::int64_t negatives() const { return fp + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(const Labels& labels, const Eigen::VectorXi& predictions);

// Ratios with a 0/0 denominator are std::nullopt, never NaN.
struct PointMetrics {
  std::optional<double> precision;    // TP / (TP + FP)
  std::optional<double> recall;       // TP / (TP + FN), the TPR
  std::optional<double> specificity;  // TN / (TN + FP)
  std::optional<double> fpr;          // FP / (FP + TN)
  std::optional<double> fnr;          // FN / (FN + TP)
  std::optional<double> fdr;          // FP / (FP + TP)
  std::optional<double> false_omission_rate;  // FN / (FN + TN)
};

PointMetrics point_metrics(const ConfusionCounts& c);

enum class CurveKind { kRoc, kPr };
std::string_view to_string(CurveKind kind);

struct CurvePoint {
  double threshold;  // predictions are score >= threshold; +inf means none
  double x;          // ROC: FPR, PR: recall
  double y;          // ROC: TPR, PR: precision
  ConfusionCounts counts;
};

// Points are ordered by decreasing threshold, so x never decreases.
struct Curve {
  CurveKind kind = CurveKind::kRoc;
  std::vector<CurvePoint> points;
};

// One point per distinct score (descending) plus the (0,0) start; the last
// point is (1,1). Throws InputError unless both classes are present.
Curve roc_curve(const Vector& scores, const Labels& labels);
// One point per distinct score (descending), preceded by a recall-0 anchor
// carrying the first achieved precision. Throws InputError without positives.
Curve pr_curve(const Vector& scores, const Labels& labels);

// Same curves evaluated only at the given thresholds (any order). Used for
// the threshold sweeps of the EAR baselines.
Curve roc_curve_at(const Vector& scores, const Labels& labels, std::vector<double> thresholds);
Curve pr_curve_at(const Vector& scores, const Labels& labels, std::vector<double> thresholds);

// Trapezoidal area over the curve's points in x-ascending order.
double auc(const Curve& curve);
std::string auc_method(CurveKind kind);

// AUROC from integer counts: sum over threshold steps of
// dFP * (TP_prev + TP_next), divided by 2 * P * N once.
double auroc(const Vector& scores, const Labels& labels);
double auprc(const Vector& scores, const Labels& labels);

enum class TargetMetric { kRecall, kPrecision };

struct OperatingPoint {
  double target = 0.0;
  bool feasible = false;
  double threshold = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> specificity;
  ConfusionCounts counts;
};

// For each target, the point whose metric is closest to the target without
// falling below it; ties prefer the better other metric, then the higher
// threshold. Targets outside (0, 1] throw.
std::vector<OperatingPoint> operating_points(const Curve& curve,
                                             const std::vector<double>& targets,
                                             TargetMetric metric);
// The point of `curve` at exactly `threshold` (e.g. the official ETM scale 1).
OperatingPoint point_at_threshold(const Curve& curve, double threshold);

struct CaptureRow {
  double threshold;
  int captured;
  int missed;
};

// 0.00, 0.01, ..., 1.00
std::vector<double> capture_thresholds(double step = 0.01);

// A positive window is captured at tau when some hour in
// [flow - lead, flow] scores >= tau. `scores` are stacked like `spans`.
std::vector<CaptureRow> event_capture(const std::vector<WindowSpan>& spans, const Vector& scores,
                                      const std::vector<double>& thresholds, int lead = 12);

}  // namespace debris_ews
