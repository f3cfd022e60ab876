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

#include "debris_ews/grid_search.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <sstream>

#include "debris_ews/metrics.hpp"
#include "debris_ews/parallel.hpp"
#include "debris_ews/rng.hpp"

namespace debris_ews {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kRandomForest: return "rf";
    case ModelKind::kLogistic: return "lr";
    case ModelKind::kGbt: return "gbt";
  }
  return "rf";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "rf") return ModelKind::kRandomForest;
  if (text == "lr") return ModelKind::kLogistic;
  if (text == "gbt") return ModelKind::kGbt;
  throw InputError("unknown model kind '" + std::string(text) + "' (expected rf, lr or gbt)");
}

std::string ModelSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  auto depth = [](const std::optional<int>& d) { return d ? std::to_string(*d) : std::string("none"); };
  switch (kind) {
    case ModelKind::kRandomForest:
      os << " trees=" << forest.n_trees << " depth=" << depth(forest.tree.max_depth)
         << " leaf=" << forest.tree.min_samples_leaf;
      break;
    case ModelKind::kGbt:
      os << " rounds=" << gbt.n_rounds << " depth=" << depth(gbt.max_depth)
         << " child=" << gbt.min_child_weight << " lr=" << gbt.learning_rate;
      break;
    case ModelKind::kLogistic:
      os << " penalty=" << (logistic.penalty == Penalty::kL2 ? "l2" : "none");
      if (logistic.penalty == Penalty::kL2) os << " c=" << logistic.coefficient;
      break;
  }
  os << " tw=" << training_weight;
  return os.str();
}

AnyModel train_model(const FeatureMatrix& X, const Labels& y, const ModelSpec& spec,
                     std::uint64_t seed, int threads) {
  switch (spec.kind) {
    case ModelKind::kRandomForest:
      return fit_forest(X, y, spec.forest, spec.training_weight, seed, threads);
    case ModelKind::kLogistic: {
      LogisticParams p = spec.logistic;
      p.training_weight = spec.training_weight;
      return fit_logistic(X, y, Vector::Ones(X.rows()), p);
    }
    case ModelKind::kGbt: {
      GbtParams p = spec.gbt;
      p.training_weight = spec.training_weight;
      return fit_gbt(X, y, Vector::Ones(X.rows()), p);
    }
  }
  throw std::logic_error("unhandled model kind");
}

std::vector<ModelSpec> GridSpec::cells() const {
  std::vector<ModelSpec> out;
  ModelSpec base;
  base.kind = kind;
  base.training_weight = training_weight;
  switch (kind) {
    case ModelKind::kRandomForest:
      for (int t : n_trees)
        for (const auto& d : max_depth)
          for (int m : min_samples_leaf) {
            ModelSpec s = base;
            s.forest.n_trees = t;
            s.forest.tree.max_depth = d;
            s.forest.tree.min_samples_leaf = m;
            out.push_back(s);
          }
      break;
    case ModelKind::kGbt:
      for (int t : n_trees)
        for (const auto& d : max_depth)
          for (int m : min_samples_leaf)  // used as minimum child weight
            for (double lr : learning_rate) {
              ModelSpec s = base;
              s.gbt.n_rounds = t;
              s.gbt.max_depth = d;
              s.gbt.min_child_weight = m;
              s.gbt.learning_rate = lr;
              out.push_back(s);
            }
      break;
    case ModelKind::kLogistic:
      if (include_unpenalised) out.push_back(base);
      for (double c : l2_coefficient) {
        ModelSpec s = base;
        s.logistic.penalty = Penalty::kL2;
        s.logistic.coefficient = c;
        out.push_back(s);
      }
      break;
  }
  if (out.empty()) throw InputError("hyperparameter grid is empty");
  return out;
}

namespace {

long size_key(const ModelSpec& s) {
  switch (s.kind) {
    case ModelKind::kRandomForest: return s.forest.n_trees;
    case ModelKind::kGbt: return s.gbt.n_rounds;
    case ModelKind::kLogistic: return 0;
  }
  return 0;
}

long depth_key(const ModelSpec& s) {
  const auto& d = s.kind == ModelKind::kGbt ? s.gbt.max_depth : s.forest.tree.max_depth;
  if (s.kind == ModelKind::kLogistic) return 0;
  return d ? *d : LONG_MAX;
}

void summarise(GridCellScore& cell) {
  const auto k = static_cast<double>(cell.fold_auprc.size());
  double sum = 0.0;
  for (double v : cell.fold_auprc) sum += v;
  cell.mean_auprc = sum / k;
  double ss = 0.0;
  for (double v : cell.fold_auprc) ss += (v - cell.mean_auprc) * (v - cell.mean_auprc);
  cell.std_error = k > 1 ? std::sqrt(ss / (k - 1.0)) / std::sqrt(k) : 0.0;
}

std::vector<GridCellScore> evaluate_cells(const std::vector<DatasetWindow>& windows,
                                          const FeatureSpec& spec,
                                          const std::vector<ModelSpec>& cells, int k,
                                          std::uint64_t seed, const LabelingConfig& labeling,
                                          int threads) {
  const auto folds = kfold_windows(windows, k, seed);
  const ExampleSet all = build_examples(windows, spec, labeling);
  std::vector<ExampleSet> train_sets, test_sets;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train.begin(), train.end());
    train_sets.push_back(all.subset(train));
    test_sets.push_back(all.subset(folds[f]));
    const Index pos = test_sets.back().positives();
    if (pos == 0 || pos == test_sets.back().rows()) {
      throw InputError("cross-validation fold " + std::to_string(f) +
                       " has single-class held-out rows; use fewer folds");
    }
  }

  const std::size_t n_folds = folds.size();
  std::vector<GridCellScore> scores(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    scores[c].spec = cells[c];
    scores[c].fold_auprc.assign(n_folds, 0.0);
  }
  parallel_for(cells.size() * n_folds, threads, [&](std::size_t job) {
    const std::size_t c = job / n_folds;
    const std::size_t f = job % n_folds;
    const AnyModel model = train_model(train_sets[f].features, train_sets[f].labels, cells[c],
                                       derive_seed(seed, 1000 + f), 1);
    scores[c].fold_auprc[f] = auprc(predict_proba(model, test_sets[f].features), test_sets[f].labels);
  });
  for (auto& s : scores) summarise(s);
  return scores;
}

}  // namespace

GridSearchResult grid_search_cv(const std::vector<DatasetWindow>& windows, const FeatureSpec& spec,
                                const GridSpec& grid, int k, std::uint64_t seed,
                                const LabelingConfig& labeling, int threads) {
  GridSearchResult result;
  result.cells = evaluate_cells(windows, spec, grid.cells(), k, seed, labeling, threads);
  const GridCellScore* best = &result.cells.front();
  for (const auto& c : result.cells) {
    if (c.mean_auprc > best->mean_auprc) {
      best = &c;
    } else if (c.mean_auprc == best->mean_auprc) {
      const auto a = std::make_pair(size_key(c.spec), depth_key(c.spec));
      const auto b = std::make_pair(size_key(best->spec), depth_key(best->spec));
      if (a < b) best = &c;
    }
  }
  result.best = *best;
  return result;
}

GridCellScore cross_validate(const std::vector<DatasetWindow>& windows, const FeatureSpec& spec,
                             const ModelSpec& model, int k, std::uint64_t seed,
                             const LabelingConfig& labeling, int threads) {
  return evaluate_cells(windows, spec, {model}, k, seed, labeling, threads).front();
}

}  // namespace debris_ews
