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

#include "debris_ews/grid_search.hpp"
#include "debris_ews/synth.hpp"

namespace debris_ews {
namespace {

std::vector<DatasetWindow> small_corpus() {
  SynthConfig cfg;
  cfg.n_stations = 12;
  cfg.weeks = 16;
  cfg.seed = 7;
  const auto corpus = generate_corpus(cfg);
  return build_windows(corpus.rainfall, corpus.flows).windows;
}

FeatureSpec short_spec() {
  FeatureSpec spec;
  spec.hourly_hours = 12;
  return spec;
}

GridSpec tiny_grid() {
  GridSpec g;
  g.n_trees = {5};
  g.max_depth = {2, 6};
  g.min_samples_leaf = {4};
  return g;
}

TEST(GridSpec, CellsExpandInOrder) {
  GridSpec g;
  EXPECT_EQ(g.cells().size(), 4u * 7u * 3u);
  g.kind = ModelKind::kLogistic;
  EXPECT_EQ(g.cells().size(), 8u);
  g.kind = ModelKind::kGbt;
  EXPECT_EQ(g.cells().size(), 4u * 7u * 3u * 4u);
  g.kind = ModelKind::kRandomForest;
  g.n_trees.clear();
  EXPECT_THROW(g.cells(), InputError);
}

TEST(ModelKind, Parse) {
  EXPECT_EQ(parse_model_kind("rf"), ModelKind::kRandomForest);
  EXPECT_EQ(parse_model_kind("lr"), ModelKind::kLogistic);
  EXPECT_EQ(parse_model_kind("gbt"), ModelKind::kGbt);
  EXPECT_THROW(parse_model_kind("svm"), InputError);
}

TEST(GridSearch, SingleCellIsReturned) {
  const auto windows = small_corpus();
  GridSpec g = tiny_grid();
  g.max_depth = {4};
  const auto r = grid_search_cv(windows, short_spec(), g, 3, 1);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_EQ(r.best.spec.describe(), r.cells[0].spec.describe());
  EXPECT_EQ(r.best.fold_auprc.size(), 3u);
}

TEST(GridSearch, DeterministicAndThreadFree) {
  const auto windows = small_corpus();
  const auto a = grid_search_cv(windows, short_spec(), tiny_grid(), 3, 5, {}, 1);
  const auto b = grid_search_cv(windows, short_spec(), tiny_grid(), 3, 5, {}, 3);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t c = 0; c < a.cells.size(); ++c) {
    EXPECT_EQ(a.cells[c].fold_auprc, b.cells[c].fold_auprc);
  }
  EXPECT_EQ(a.best.spec.describe(), b.best.spec.describe());
  double top = 0.0;
  for (const auto& c : a.cells) top = std::max(top, c.mean_auprc);
  EXPECT_EQ(a.best.mean_auprc, top);
}

TEST(CrossValidate, MatchesSingleCellGrid) {
  const auto windows = small_corpus();
  GridSpec g = tiny_grid();
  g.max_depth = {6};
  const auto grid = grid_search_cv(windows, short_spec(), g, 3, 2);
  const auto cv = cross_validate(windows, short_spec(), grid.cells[0].spec, 3, 2);
  EXPECT_EQ(cv.fold_auprc, grid.cells[0].fold_auprc);
  EXPECT_GT(cv.std_error, 0.0);
}

}  // namespace
}  // namespace debris_ews
