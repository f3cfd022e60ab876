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

#include "debris_ews/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace debris_ews {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

void check_inputs(const Vector& scores, const Labels& labels) {
  if (scores.size() != labels.size()) {
    throw InputError("scores and labels differ in length");
  }
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw InputError("labels must be 0 or 1");
    if (!std::isfinite(scores[i])) throw InputError("scores must be finite");
  }
}

// Rows sorted by score, highest first, with cumulative positive counts.
struct Ranked {
  std::vector<double> score;        // descending
  std::vector<std::int64_t> cum_tp; // cum_tp[k]: positives among the top k rows
  std::int64_t P = 0;
  std::int64_t N = 0;

  Ranked(const Vector& scores, const Labels& labels) {
    const auto n = static_cast<std::size_t>(scores.size());
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
    });
    score.resize(n);
    cum_tp.assign(n + 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
      score[k] = scores[order[k]];
      cum_tp[k + 1] = cum_tp[k] + labels[order[k]];
    }
    P = cum_tp[n];
    N = static_cast<std::int64_t>(n) - P;
  }

  ConfusionCounts counts_top(std::size_t k) const {
    ConfusionCounts c;
    c.tp = cum_tp[k];
    c.fp = static_cast<std::int64_t>(k) - c.tp;
    c.fn = P - c.tp;
    c.tn = N - c.fp;
    return c;
  }
  // Number of rows with score >= t.
  std::size_t count_at_least(double t) const {
    return static_cast<std::size_t>(
        std::partition_point(score.begin(), score.end(), [&](double s) { return s >= t; }) -
        score.begin());
  }
};

CurvePoint roc_point(double threshold, const ConfusionCounts& c) {
  return {threshold, static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn),
          static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn), c};
}

// Returns false when precision is undefined (no predicted positives).
bool pr_point(double threshold, const ConfusionCounts& c, CurvePoint& out) {
  if (c.tp + c.fp == 0) return false;
  out = {threshold, static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn),
         static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp), c};
  return true;
}

void add_pr_anchor(Curve& curve, const ConfusionCounts& none_predicted) {
  if (curve.points.empty()) return;
  const CurvePoint first = curve.points.front();
  if (first.x == 0.0) return;
  curve.points.insert(curve.points.begin(), CurvePoint{kInf, 0.0, first.y, none_predicted});
}

}  // namespace

ConfusionCounts confusion(const Labels& labels, const Eigen::VectorXi& predictions) {
  if (labels.size() != predictions.size()) {
    throw InputError("labels and predictions differ in length");
  }
  ConfusionCounts c;
  for (Index i = 0; i < labels.size(); ++i) {
    const bool y = labels[i] != 0;
    const bool p = predictions[i] != 0;
    if (y && p) ++c.tp;
    else if (!y && p) ++c.fp;
    else if (y) ++c.fn;
    else ++c.tn;
  }
  return c;
}

PointMetrics point_metrics(const ConfusionCounts& c) {
  PointMetrics m;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.specificity = ratio(c.tn, c.tn + c.fp);
  m.fpr = ratio(c.fp, c.fp + c.tn);
  m.fnr = ratio(c.fn, c.fn + c.tp);
  m.fdr = ratio(c.fp, c.fp + c.tp);
  m.false_omission_rate = ratio(c.fn, c.fn + c.tn);
  return m;
}

std::string_view to_string(CurveKind kind) { return kind == CurveKind::kRoc ? "ROC" : "PR"; }

Curve roc_curve(const Vector& scores, const Labels& labels) {
  check_inputs(scores, labels);
  const Ranked r(scores, labels);
  if (r.P == 0 || r.N == 0) throw InputError("ROC curve needs both positive and negative labels");
  Curve curve{CurveKind::kRoc, {}};
  curve.points.push_back(roc_point(kInf, r.counts_top(0)));
  const std::size_t n = r.score.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 < n && r.score[k + 1] == r.score[k]) continue;
    curve.points.push_back(roc_point(r.score[k], r.counts_top(k + 1)));
  }
  return curve;
}

Curve pr_curve(const Vector& scores, const Labels& labels) {
  check_inputs(scores, labels);
  const Ranked r(scores, labels);
  if (r.P == 0) throw InputError("PR curve needs at least one positive label");
  Curve curve{CurveKind::kPr, {}};
  const std::size_t n = r.score.size();
  CurvePoint p{};
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 < n && r.score[k + 1] == r.score[k]) continue;
    if (pr_point(r.score[k], r.counts_top(k + 1), p)) curve.points.push_back(p);
  }
  add_pr_anchor(curve, r.counts_top(0));
  return curve;
}

Curve roc_curve_at(const Vector& scores, const Labels& labels, std::vector<double> thresholds) {
  check_inputs(scores, labels);
  const Ranked r(scores, labels);
  if (r.P == 0 || r.N == 0) throw InputError("ROC curve needs both positive and negative labels");
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  Curve curve{CurveKind::kRoc, {}};
  for (double t : thresholds) curve.points.push_back(roc_point(t, r.counts_top(r.count_at_least(t))));
  if (curve.points.empty() || curve.points.front().counts.tp + curve.points.front().counts.fp > 0) {
    curve.points.insert(curve.points.begin(), roc_point(kInf, r.counts_top(0)));
  }
  if (curve.points.back().counts.tn + curve.points.back().counts.fn > 0) {
    const double lowest = r.score.back();
    curve.points.push_back(roc_point(std::min(lowest, thresholds.empty() ? lowest : thresholds.back()),
                                     r.counts_top(r.score.size())));
  }
  return curve;
}

Curve pr_curve_at(const Vector& scores, const Labels& labels, std::vector<double> thresholds) {
  check_inputs(scores, labels);
  const Ranked r(scores, labels);
  if (r.P == 0) throw InputError("PR curve needs at least one positive label");
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  Curve curve{CurveKind::kPr, {}};
  CurvePoint p{};
  for (double t : thresholds) {
    if (pr_point(t, r.counts_top(r.count_at_least(t)), p)) curve.points.push_back(p);
  }
  add_pr_anchor(curve, r.counts_top(0));
  return curve;
}

double auc(const Curve& curve) {
  double area = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& a = curve.points[k - 1];
    const auto& b = curve.points[k];
    area += (b.x - a.x) * 0.5 * (a.y + b.y);
  }
  return area;
}

std::string auc_method(CurveKind kind) {
  if (kind == CurveKind::kRoc) {
    return "trapezoid over achieved (FPR, TPR) points including (0,0) and (1,1)";
  }
  return "trapezoid over achieved (recall, precision) points, no interpolation; "
         "anchored at recall 0 with the first achieved precision";
}

double auroc(const Vector& scores, const Labels& labels) {
  check_inputs(scores, labels);
  const Ranked r(scores, labels);
  if (r.P == 0 || r.N == 0) throw InputError("AUROC needs both positive and negative labels");
  // Integer numerator: sum of dFP * (TP_prev + TP_next) over score groups.
  std::int64_t twice_area = 0;
  std::int64_t prev_tp = 0, prev_fp = 0;
  const std::size_t n = r.score.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 < n && r.score[k + 1] == r.score[k]) continue;
    const ConfusionCounts c = r.counts_top(k + 1);
    twice_area += (c.fp - prev_fp) * (c.tp + prev_tp);
    prev_tp = c.tp;
    prev_fp = c.fp;
  }
  return static_cast<double>(twice_area) / (2.0 * static_cast<double>(r.P) * static_cast<double>(r.N));
}

double auprc(const Vector& scores, const Labels& labels) { return auc(pr_curve(scores, labels)); }

std::vector<OperatingPoint> operating_points(const Curve& curve, const std::vector<double>& targets,
                                             TargetMetric metric) {
  std::vector<OperatingPoint> rows;
  for (double target : targets) {
    if (!(target > 0.0 && target <= 1.0)) {
      throw InputError("operating-point targets must lie in (0, 1]");
    }
    OperatingPoint best;
    best.target = target;
    double best_metric = kInf, best_other = -kInf;
    for (const auto& p : curve.points) {
      if (!std::isfinite(p.threshold)) continue;
      const PointMetrics m = point_metrics(p.counts);
      const auto& primary = metric == TargetMetric::kRecall ? m.recall : m.precision;
      const auto& other = metric == TargetMetric::kRecall ? m.precision : m.recall;
      if (!primary || *primary < target) continue;
      const double o = other.value_or(-1.0);
      const bool better =
          *primary < best_metric ||
          (*primary == best_metric && (o > best_other || (o == best_other && p.threshold > best.threshold)));
      if (!best.feasible || better) {
        best.feasible = true;
        best_metric = *primary;
        best_other = o;
        best.threshold = p.threshold;
        best.precision = m.precision;
        best.recall = m.recall;
        best.specificity = m.specificity;
        best.counts = p.counts;
      }
    }
    rows.push_back(best);
  }
  return rows;
}

OperatingPoint point_at_threshold(const Curve& curve, double threshold) {
  for (const auto& p : curve.points) {
    if (p.threshold == threshold) {
      const PointMetrics m = point_metrics(p.counts);
      return {std::numeric_limits<double>::quiet_NaN(), true, threshold, m.precision, m.recall,
              m.specificity, p.counts};
    }
  }
  OperatingPoint none;
  none.threshold = threshold;
  return none;
}

std::vector<double> capture_thresholds(double step) {
  if (!(step > 0.0)) throw InputError("capture threshold step must be > 0");
  std::vector<double> out;
  const long n = std::lround(1.0 / step);
  for (long k = 0; k <= n; ++k) out.push_back(static_cast<double>(k) / static_cast<double>(n));
  return out;
}

std::vector<CaptureRow> event_capture(const std::vector<WindowSpan>& spans, const Vector& scores,
                                      const std::vector<double>& thresholds, int lead) {
  std::vector<double> peak;  // best score inside each positive window's lead interval
  for (const auto& s : spans) {
    if (!s.debris_flow_idx) continue;
    if (s.end > scores.size()) throw InputError("scores do not cover all window rows");
    double m = -kInf;
    const Index flow = *s.debris_flow_idx;
    for (Index h = std::max<Index>(flow - lead, s.first_hour); h <= flow; ++h) {
      const Index row = s.begin + (h - s.first_hour);
      if (row >= s.begin && row < s.end) m = std::max(m, scores[row]);
    }
    peak.push_back(m);
  }
  std::vector<CaptureRow> rows;
  for (double tau : thresholds) {
    const int captured =
        static_cast<int>(std::count_if(peak.begin(), peak.end(), [&](double m) { return m >= tau; }));
    rows.push_back({tau, captured, static_cast<int>(peak.size()) - captured});
  }
  return rows;
}

}  // namespace debris_ews
