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

#include "debris_ews/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "debris_ews/rng.hpp"

namespace debris_ews {

namespace {

struct GiniCriterion {
  struct Stats {
    double w = 0.0;
    double wp = 0.0;
    std::int64_t c = 0;
    std::int64_t npos = 0;
    std::int64_t nrows = 0;
  };
  const Labels& y;
  const Vector& w;
  const std::vector<std::int64_t>* counts;
  int min_samples_leaf;

  void add(Stats& s, Index r) const {
    s.w += w[r];
    if (y[r]) {
      s.wp += w[r];
      ++s.npos;
    }
    s.c += counts ? (*counts)[r] : 1;
    ++s.nrows;
  }
  static Stats minus(const Stats& a, const Stats& b) {
    return {a.w - b.w, a.wp - b.wp, a.c - b.c, a.npos - b.npos, a.nrows - b.nrows};
  }
  bool stop(const Stats& s) const {
    return s.npos == 0 || s.npos == s.nrows || s.c < 2 * static_cast<std::int64_t>(min_samples_leaf);
  }
  bool admissible(const Stats& l, const Stats& r) const {
    return l.c >= min_samples_leaf && r.c >= min_samples_leaf;
  }
  // Weighted Gini of the children, halved: sum_k wp_k (w_k - wp_k) / w_k.
  static double part(const Stats& s) {
    return s.w > 0.0 ? s.wp * (s.w - s.wp) / s.w : 0.0;
  }
  double objective(const Stats& l, const Stats& r) const { return part(l) + part(r); }
  bool accept(double, const Stats&) const { return true; }
  double tolerance(const Stats& s) const { return 1e-12 * s.w; }
  void fill(DecisionTree& t, std::size_t node, const Stats& s) const {
    t.value[node] = s.w > 0.0 ? std::clamp(s.wp / s.w, 0.0, 1.0) : 0.0;
    t.weight[node] = s.w;
    t.count[node] = s.c;
  }
};

struct NewtonCriterion {
  struct Stats {
    double g = 0.0;
    double h = 0.0;
    std::int64_t nrows = 0;
  };
  const Vector& grad;
  const Vector& hess;
  const RegressionTreeParams& params;

  void add(Stats& s, Index r) const {
    s.g += grad[r];
    s.h += hess[r];
    ++s.nrows;
  }
  static Stats minus(const Stats& a, const Stats& b) {
    return {a.g - b.g, a.h - b.h, a.nrows - b.nrows};
  }
  bool stop(const Stats& s) const { return s.nrows < 2 || s.h < 2.0 * params.min_child_weight; }
  bool admissible(const Stats& l, const Stats& r) const {
    return l.h >= params.min_child_weight && r.h >= params.min_child_weight;
  }
  double score(const Stats& s) const { return s.g * s.g / (s.h + params.lambda); }
  double objective(const Stats& l, const Stats& r) const { return -(score(l) + score(r)); }
  bool accept(double best, const Stats& node) const {
    return -best - score(node) > tolerance(node);
  }
  double tolerance(const Stats& node) const { return 1e-12 * (score(node) + 1e-300); }
  void fill(DecisionTree& t, std::size_t node, const Stats& s) const {
    t.value[node] = -params.learning_rate * s.g / (s.h + params.lambda);
    t.weight[node] = s.h;
    t.count[node] = s.nrows;
  }
};

struct SortedEntry {
  double x;
  Index row;
};

template <typename Crit>
DecisionTree grow(const FeatureMatrix& X, std::vector<Index> rows, const Crit& crit,
                  std::optional<int> max_depth, int max_features, Rng* rng) {
  using Stats = typename Crit::Stats;
  const int n_features = static_cast<int>(X.cols());
  DecisionTree tree;
  auto new_node = [&] {
    tree.feature.push_back(-1);
    tree.threshold.push_back(0.0);
    tree.left.push_back(-1);
    tree.right.push_back(-1);
    tree.value.push_back(0.0);
    tree.weight.push_back(0.0);
    tree.count.push_back(0);
    return static_cast<int>(tree.feature.size() - 1);
  };

  struct Task {
    int node;
    std::size_t begin;
    std::size_t end;
    int depth;
  };
  std::vector<Task> stack{{new_node(), 0, rows.size(), 0}};
  std::vector<SortedEntry> scratch;
  std::vector<int> order(n_features);

  while (!stack.empty()) {
    const Task task = stack.back();
    stack.pop_back();
    Stats node_stats;
    for (std::size_t k = task.begin; k < task.end; ++k) crit.add(node_stats, rows[k]);
    crit.fill(tree, task.node, node_stats);
    if (crit.stop(node_stats) || (max_depth && task.depth >= *max_depth)) continue;

    std::iota(order.begin(), order.end(), 0);
    int budget = n_features;
    if (rng && max_features > 0 && max_features < n_features) {
      std::shuffle(order.begin(), order.end(), *rng);
      budget = max_features;
    }

    double best_obj = std::numeric_limits<double>::infinity();
    int best_feature = -1;
    double best_threshold = 0.0;
    const double tol = crit.tolerance(node_stats);
    int visited = 0;
    for (int f : order) {
      if (visited >= budget) break;
      // Rainfall features are mostly exact zeros: place those in the middle
      // and sort only the nonzero values on either side.
      scratch.resize(task.end - task.begin);
      std::size_t lo = 0, hi = scratch.size();
      for (std::size_t k = task.begin; k < task.end; ++k) {
        const double x = X(rows[k], f);
        if (x < 0.0) scratch[lo++] = {x, rows[k]};
        else if (x > 0.0) scratch[--hi] = {x, rows[k]};
      }
      for (std::size_t k = lo; k < hi; ++k) scratch[k] = {0.0, 0};
      if (lo < hi) {
        std::size_t z = lo;
        for (std::size_t k = task.begin; k < task.end; ++k) {
          if (X(rows[k], f) == 0.0) scratch[z++].row = rows[k];
        }
      }
      const auto by_x = [](const SortedEntry& a, const SortedEntry& b) { return a.x < b.x; };
      std::sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(lo), by_x);
      std::sort(scratch.begin() + static_cast<std::ptrdiff_t>(hi), scratch.end(), by_x);
      if (scratch.front().x == scratch.back().x) continue;  // constant here
      ++visited;
      Stats left;
      for (std::size_t k = 0; k + 1 < scratch.size(); ++k) {
        crit.add(left, scratch[k].row);
        if (scratch[k].x == scratch[k + 1].x) continue;
        const Stats right = Crit::minus(node_stats, left);
        if (!crit.admissible(left, right)) continue;
        const double obj = crit.objective(left, right);
        double thr = 0.5 * (scratch[k].x + scratch[k + 1].x);
        if (!(thr < scratch[k + 1].x)) thr = scratch[k].x;
        const bool better =
            obj < best_obj - tol ||
            (std::abs(obj - best_obj) <= tol &&
             (f < best_feature || (f == best_feature && thr < best_threshold)));
        if (better) {
          best_obj = obj;
          best_feature = f;
          best_threshold = thr;
        }
      }
    }
    if (best_feature < 0 || !crit.accept(best_obj, node_stats)) continue;

    auto mid = std::stable_partition(
        rows.begin() + static_cast<std::ptrdiff_t>(task.begin),
        rows.begin() + static_cast<std::ptrdiff_t>(task.end),
        [&](Index r) { return X(r, best_feature) <= best_threshold; });
    const auto split = static_cast<std::size_t>(mid - rows.begin());
    const int l = new_node();
    const int r = new_node();
    tree.feature[task.node] = best_feature;
    tree.threshold[task.node] = best_threshold;
    tree.left[task.node] = l;
    tree.right[task.node] = r;
    stack.push_back({r, split, task.end, task.depth + 1});
    stack.push_back({l, task.begin, split, task.depth + 1});
  }
  return tree;
}

}  // namespace

int DecisionTree::depth() const {
  if (feature.empty()) return 0;
  int best = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [node, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (feature[node] >= 0) {
      stack.push_back({left[node], d + 1});
      stack.push_back({right[node], d + 1});
    }
  }
  return best;
}

int DecisionTree::leaf_of(const double* row, Index stride) const {
  std::size_t node = 0;
  while (feature[node] >= 0) {
    node = row[feature[node] * stride] <= threshold[node] ? left[node] : right[node];
  }
  return static_cast<int>(node);
}

Vector DecisionTree::predict(const FeatureMatrix& X) const {
  Vector out(X.rows());
  for (Index i = 0; i < X.rows(); ++i) {
    out[i] = value[leaf_of(X.data() + i, X.rows())];
  }
  return out;
}

void validate_training_data(const FeatureMatrix& X, const Labels& y, const Vector& w) {
  if (X.rows() == 0 || X.cols() == 0) throw InputError("training data is empty");
  if (y.size() != X.rows() || w.size() != X.rows()) {
    throw InputError("training data: features, labels and weights differ in length");
  }
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw InputError("training labels must be 0 or 1");
    if (!(w[i] > 0.0) || !std::isfinite(w[i])) {
      throw InputError("sample weights must be positive and finite");
    }
  }
  if (!X.allFinite()) throw InputError("training features contain NaN or infinity");
}

DecisionTree fit_tree(const FeatureMatrix& X, const Labels& y, const Vector& sample_weights,
                      const TreeParams& params, std::uint64_t seed,
                      const std::vector<std::int64_t>* counts) {
  validate_training_data(X, y, sample_weights);
  if (params.min_samples_leaf < 1) throw InputError("min_samples_leaf must be >= 1");
  if (params.max_depth && *params.max_depth < 0) throw InputError("max_depth must be >= 0");
  if (params.max_features < 0 || params.max_features > X.cols()) {
    throw InputError("max_features must be in [0, n_features]");
  }
  if (counts && static_cast<Index>(counts->size()) != X.rows()) {
    throw InputError("row multiplicities differ in length from the training data");
  }
  std::vector<Index> rows;
  rows.reserve(static_cast<std::size_t>(X.rows()));
  for (Index i = 0; i < X.rows(); ++i) {
    if (!counts || (*counts)[i] > 0) rows.push_back(i);
  }
  if (rows.empty()) throw InputError("no training rows with positive multiplicity");
  // Effective weight is sample weight times multiplicity.
  Vector w = sample_weights;
  if (counts) {
    for (Index i = 0; i < X.rows(); ++i) w[i] *= static_cast<double>((*counts)[i]);
  }
  GiniCriterion crit{y, w, counts, params.min_samples_leaf};
  Rng rng(derive_seed(seed, 0));
  return grow(X, std::move(rows), crit, params.max_depth, params.max_features, &rng);
}

DecisionTree fit_regression_tree(const FeatureMatrix& X, const Vector& grad, const Vector& hess,
                                 const RegressionTreeParams& params) {
  std::vector<Index> rows(static_cast<std::size_t>(X.rows()));
  std::iota(rows.begin(), rows.end(), Index{0});
  NewtonCriterion crit{grad, hess, params};
  return grow(X, std::move(rows), crit, params.max_depth, 0, nullptr);
}

}  // namespace debris_ews
