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

#include "debris_ews/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "debris_ews/metrics.hpp"
#include "debris_ews/parallel.hpp"
#include "debris_ews/rng.hpp"

namespace debris_ews {

namespace {

enum class Side : unsigned char { kFree, kForeground, kBackground };

// 1 / (k * C(n, k)), the total Shapley weight of all coalitions that contain
// the other k-1 members of a size-k group and none of the n-k opposing ones.
double group_weight(int k, int n) {
  double binom = 1.0;
  for (int i = 1; i <= k; ++i) binom = binom * static_cast<double>(n - k + i) / i;
  return 1.0 / (static_cast<double>(k) * binom);
}

class PairWalker {
 public:
  PairWalker(const DecisionTree& tree, const Vector& x, Vector& phi)
      : tree_(tree), x_(x), phi_(phi), side_(static_cast<std::size_t>(x.size()), Side::kFree) {}

  void run(const Eigen::Ref<const Eigen::RowVectorXd>& z) {
    z_ = &z;
    walk(0);
  }

 private:
  void walk(int node) {
    const int f = tree_.feature[node];
    if (f < 0) {
      credit(tree_.value[node]);
      return;
    }
    const double thr = tree_.threshold[node];
    const int x_child = x_[f] <= thr ? tree_.left[node] : tree_.right[node];
    const int z_child = (*z_)[f] <= thr ? tree_.left[node] : tree_.right[node];
    switch (side_[f]) {
      case Side::kForeground: walk(x_child); return;
      case Side::kBackground: walk(z_child); return;
      case Side::kFree: break;
    }
    if (x_child == z_child) {
      walk(x_child);
      return;
    }
    side_[f] = Side::kForeground;
    fg_.push_back(f);
    walk(x_child);
    fg_.pop_back();
    side_[f] = Side::kBackground;
    bg_.push_back(f);
    walk(z_child);
    bg_.pop_back();
    side_[f] = Side::kFree;
  }

  void credit(double v) {
    const int a = static_cast<int>(fg_.size());
    const int b = static_cast<int>(bg_.size());
    if (a > 0) {
      const double gain = v * group_weight(a, a + b);
      for (int f : fg_) phi_[f] += gain;
    }
    if (b > 0) {
      const double loss = v * group_weight(b, a + b);
      for (int f : bg_) phi_[f] -= loss;
    }
  }

  const DecisionTree& tree_;
  const Vector& x_;
  Vector& phi_;
  const Eigen::Ref<const Eigen::RowVectorXd>* z_ = nullptr;
  std::vector<Side> side_;
  std::vector<int> fg_;
  std::vector<int> bg_;
};

}  // namespace

ShapAttribution tree_shap(std::span<const DecisionTree> trees, const Vector& x,
                          const FeatureMatrix& background) {
  if (trees.empty()) throw InputError("tree_shap needs at least one tree");
  if (background.rows() == 0) throw InputError("tree_shap needs a nonempty background set");
  if (background.cols() != x.size()) {
    throw InputError("explained row and background differ in feature count");
  }
  ShapAttribution out;
  out.phi = Vector::Zero(x.size());
  const double n_bg = static_cast<double>(background.rows());
  const double n_trees = static_cast<double>(trees.size());
  for (const auto& tree : trees) {
    for (int f : tree.feature) {
      if (f >= x.size()) throw InputError("tree references a feature beyond the explained row");
    }
    Vector phi_tree = Vector::Zero(x.size());
    PairWalker walker(tree, x, phi_tree);
    double base_tree = 0.0;
    for (Index r = 0; r < background.rows(); ++r) {
      const Eigen::RowVectorXd z = background.row(r);
      walker.run(z);
      base_tree += tree.predict(z);
    }
    out.phi += phi_tree / n_bg;
    out.base += base_tree / n_bg;
    out.score += tree.predict(x);
  }
  out.phi /= n_trees;
  out.base /= n_trees;
  out.score /= n_trees;
  return out;
}

ShapAttribution tree_shap(const ForestModel& model, const Vector& x, const FeatureMatrix& background) {
  if (x.size() != model.n_features) {
    throw InputError("explained row has " + std::to_string(x.size()) + " features, model expects " +
                     std::to_string(model.n_features));
  }
  return tree_shap(std::span<const DecisionTree>(model.trees), x, background);
}

ShapAttribution brute_shap(const ForestModel& model, const Vector& x, const FeatureMatrix& background) {
  const Index n = x.size();
  if (n != model.n_features || background.cols() != n) {
    throw InputError("brute_shap: feature count mismatch");
  }
  if (n > 15) throw InputError("brute_shap enumerates 2^n coalitions; at most 15 features");
  if (background.rows() == 0) throw InputError("brute_shap needs a nonempty background set");
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<double> value(subsets, 0.0);
  Vector hybrid(n);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    double total = 0.0;
    for (Index r = 0; r < background.rows(); ++r) {
      for (Index f = 0; f < n; ++f) hybrid[f] = (mask >> f) & 1U ? x[f] : background(r, f);
      total += model.predict_row(hybrid);
    }
    value[mask] = total / static_cast<double>(background.rows());
  }
  // weight[s] = s! (n - s - 1)! / n!
  std::vector<double> weight(static_cast<std::size_t>(n), 0.0);
  for (Index s = 0; s < n; ++s) {
    double w = 1.0 / static_cast<double>(n);
    for (Index k = 1; k <= s; ++k) w *= static_cast<double>(k) / static_cast<double>(n - k);
    weight[static_cast<std::size_t>(s)] = w;
  }
  ShapAttribution out;
  out.phi = Vector::Zero(n);
  for (Index f = 0; f < n; ++f) {
    const std::size_t bit = std::size_t{1} << f;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      if (mask & bit) continue;
      const int s = std::popcount(mask);
      out.phi[f] += weight[static_cast<std::size_t>(s)] * (value[mask | bit] - value[mask]);
    }
  }
  out.base = value[0];
  out.score = value[subsets - 1];
  return out;
}

FeatureMatrix sample_background(const FeatureMatrix& X, Index max_rows, std::uint64_t seed) {
  if (max_rows < 1) throw InputError("background size must be >= 1");
  if (X.rows() <= max_rows) return X;
  std::vector<Index> idx(static_cast<std::size_t>(X.rows()));
  std::iota(idx.begin(), idx.end(), Index{0});
  Rng rng = make_rng(seed, 0x5a9);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<std::size_t>(max_rows));
  std::sort(idx.begin(), idx.end());
  FeatureMatrix out(max_rows, X.cols());
  for (Index r = 0; r < max_rows; ++r) out.row(r) = X.row(idx[static_cast<std::size_t>(r)]);
  return out;
}

std::vector<FeatureImportance> importance_ranking(const ForestModel& model, const FeatureMatrix& X,
                                                  const Labels& y, const FeatureMatrix& background,
                                                  const std::vector<std::string>& names,
                                                  const ImportanceOptions& options) {
  if (X.rows() == 0) throw InputError("importance needs a nonempty dataset");
  if (X.cols() != model.n_features) throw InputError("importance: feature count mismatch");
  const Index d = X.cols();
  Vector scores = Vector::Zero(d);

  if (options.method == ImportanceMethod::kMeanAbsShap) {
    std::vector<Vector> per_row(static_cast<std::size_t>(X.rows()));
    parallel_for(per_row.size(), options.threads, [&](std::size_t r) {
      const Vector x = X.row(static_cast<Index>(r)).transpose();
      per_row[r] = tree_shap(model, x, background).phi.cwiseAbs();
    });
    for (const auto& v : per_row) scores += v;
    scores /= static_cast<double>(X.rows());
  } else {
    if (options.permutations < 1) throw InputError("permutation importance needs >= 1 shuffle");
    const double reference = auprc(model.predict_proba(X), y);
    parallel_for(static_cast<std::size_t>(d), options.threads, [&](std::size_t j) {
      FeatureMatrix shuffled = X;
      double drop = 0.0;
      for (int p = 0; p < options.permutations; ++p) {
        Rng rng = make_rng(options.seed, j * 1000003ULL + static_cast<std::uint64_t>(p));
        Vector col = X.col(static_cast<Index>(j));
        std::shuffle(col.data(), col.data() + col.size(), rng);
        shuffled.col(static_cast<Index>(j)) = col;
        drop += reference - auprc(model.predict_proba(shuffled), y);
      }
      scores[static_cast<Index>(j)] = drop / options.permutations;
    });
  }

  std::vector<FeatureImportance> out;
  for (Index j = 0; j < d; ++j) {
    const auto name = static_cast<std::size_t>(j) < names.size() ? names[static_cast<std::size_t>(j)]
                                                                 : "f" + std::to_string(j);
    out.push_back({j, name, scores[j]});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.score > b.score; });
  return out;
}

}  // namespace debris_ews
