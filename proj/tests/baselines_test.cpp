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

#include "debris_ews/baselines.hpp"
#include "debris_ews/dataset.hpp"
#include "test_util.hpp"

namespace debris_ews {
namespace {

EarTrace trace_of(std::vector<double> ear) {
  EarTrace t;
  t.event = {0, static_cast<Index>(ear.size()) - 1};
  t.ear = Eigen::Map<Vector>(ear.data(), static_cast<Index>(ear.size()));
  return t;
}

TEST(EtmPredict, Examples) {
  const auto t = trace_of({100, 250, 310});
  EXPECT_EQ(etm_predict(t, 300.0), (Predictions(3) << 0, 0, 1).finished());
  EXPECT_EQ(etm_predict(t, 1e-9).sum(), 3);
  EXPECT_EQ(etm_predict(t, 311.0).sum(), 0);
  EXPECT_EQ(etm_predict(t, 250.0), (Predictions(3) << 0, 1, 1).finished());  // >=
  EXPECT_EQ(hm_predict(t, 300.0), etm_predict(t, 300.0));
  EXPECT_THROW(etm_predict(t, 0.0), InputError);
}

TEST(AlertScores, ThresholdMonotoneAndLatchSuperset) {
  Rng rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const auto s = test::series_of(test::random_rain(rng, 24 * 15));
    const AlertPolicy latch{true};
    Predictions prev;
    for (double thr : {20.0, 50.0, 100.0, 200.0, 300.0}) {
      const Predictions p = alerts_for_series(s, thr);
      const Predictions l = alerts_for_series(s, thr, {}, latch);
      for (Index h = 0; h < p.size(); ++h) {
        EXPECT_LE(p[h], l[h]);
        if (prev.size()) {
          EXPECT_LE(p[h], prev[h]);
        }
      }
      prev = p;
    }
  }
}

TEST(AlertScores, LatchHoldsThroughQuietHours) {
  std::vector<double> v = {0, 8, 8, 0, 0, 0, 0, 0, 0, 0, 0};
  const auto s = test::series_of(v);
  const Vector plain = ear_alert_scores(s);
  const Vector latched = ear_alert_scores(s, {}, AlertPolicy{true});
  EXPECT_EQ(plain[3], 0.0);
  for (Index h = 3; h <= 8; ++h) EXPECT_EQ(latched[h], 16.0);
  EXPECT_EQ(latched[9], 0.0);
}

TEST(Sweeps, ScaleZeroAndOne) {
  const Vector ratio = (Vector(5) << 0.0, 0.4, 1.0, 1.2, 0.99).finished();
  const auto pts = sweep_etm(ratio, {0.0, 1.0});
  EXPECT_EQ(pts[0].predictions.sum(), 5);
  EXPECT_EQ(pts[1].predictions, (Predictions(5) << 0, 0, 1, 1, 0).finished());
}

TEST(Sweeps, ConstantTableEtmEqualsHm) {
  Rng rng(3);
  std::vector<DatasetWindow> ws;
  ThresholdTable table;
  for (int k = 0; k < 4; ++k) {
    const std::string id = "S" + std::to_string(k);
    auto s = test::series_of(test::random_rain(rng, 400), "2020-06-01T00:00:00Z", id);
    ws.push_back({id + "-N", WindowKind::kNegative, s, 0, std::nullopt, 0});
    table.set(id, 2020, 250.0);
  }
  FeatureSpec spec;
  const Vector ear = stacked_ear_scores(ws, spec);
  const Vector ratio = stacked_ear_scores(ws, spec, {}, &table);
  for (double thr : {10.0, 100.0, 250.0, 400.0}) {
    const auto hm = sweep_hm(ear, {thr});
    const auto etm = sweep_etm(ratio, {thr / 250.0});
    EXPECT_EQ(hm[0].predictions, etm[0].predictions) << thr;
  }
}

TEST(Grids, HmGridCoversMarksAndEndsEmpty) {
  const auto g = hm_threshold_grid(420.0, 10);
  for (double m : hm_marked_thresholds()) {
    EXPECT_NE(std::find(g.begin(), g.end(), m), g.end()) << m;
  }
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  const double top = 420.0;
  EXPECT_GT(*std::find_if(g.begin(), g.end(), [&](double x) { return x > top; }), top);
  EXPECT_EQ(g.front(), 0.0);

  const auto e = etm_scale_grid(1.2345, 0.001);
  EXPECT_EQ(e.front(), 0.0);
  EXPECT_GT(e.back(), 1.2345);
  EXPECT_LE(e[e.size() - 2], 1.2345);
  EXPECT_THROW(etm_scale_grid(1.0, 0.0), InputError);
}

}  // namespace
}  // namespace debris_ews
