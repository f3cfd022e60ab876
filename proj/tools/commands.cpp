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

#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <tuple>
#include <variant>

#include <spdlog/spdlog.h>

#include "debris_ews/baselines.hpp"
#include "debris_ews/bootstrap.hpp"
#include "debris_ews/explain.hpp"
#include "debris_ews/io.hpp"
#include "debris_ews/metrics.hpp"
#include "debris_ews/model_io.hpp"
#include "debris_ews/parallel.hpp"
#include "debris_ews/rng.hpp"

namespace debris_ews::cli {

namespace fs = std::filesystem;

std::filesystem::path Context::resolve(const std::string& relative) const {
  const fs::path p(relative);
  return p.is_absolute() ? p : out / p;
}

std::filesystem::path Context::path_of(const std::string& key) const {
  return resolve(cfg.at("paths").at(key).get<std::string>());
}

int Context::threads() const { return cfg.at("threads").get<int>(); }

namespace {

std::string num(double v) { return format_double(v); }

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write " + path.string());
  return os;
}

void write_json(const fs::path& path, const Json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

void require_file(const fs::path& path, const std::string& what, const std::string& producer) {
  if (!fs::exists(path)) {
    throw InputError("missing " + what + ": expected " + path.string() + " (" + producer + ")");
  }
}

RainfallData load_rainfall(const Context& ctx) {
  const auto path = ctx.path_of("rainfall");
  require_file(path, "rainfall CSV", "columns station_id,timestamp,rainfall_mm; `synth` writes one");
  RainfallData rain = read_rainfall_csv(path, ctx.cfg.at("rainfall").at("impute_missing").get<bool>());
  for (const auto& w : rain.warnings) spdlog::warn("{}", w);
  return rain;
}

std::vector<DebrisFlowEvent> load_events(const Context& ctx) {
  const auto path = ctx.path_of("events");
  require_file(path, "debris-flow events CSV", "columns station_id,timestamp; `synth` writes one");
  return read_events_csv(path);
}

ThresholdTable load_thresholds(const Context& ctx) {
  const auto path = ctx.path_of("thresholds");
  require_file(path, "threshold table CSV",
               "columns station_id,year,ear_threshold_mm; `synth` writes one");
  return read_threshold_csv(path);
}

std::vector<DatasetWindow> load_windows(const Context& ctx) {
  const RainfallData rain = load_rainfall(ctx);
  const auto events = load_events(ctx);
  WindowBuildResult built = build_windows(rain, events, window_config(ctx.cfg));
  for (const auto& w : built.warnings) spdlog::warn("{}", w);
  spdlog::info("{} windows from {} stations", built.windows.size(), rain.series.size());
  return std::move(built.windows);
}

struct Split {
  std::vector<DatasetWindow> train;
  std::vector<DatasetWindow> test;
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
};

Split split_of(const Context& ctx, const std::vector<DatasetWindow>& windows) {
  Split s;
  std::tie(s.train_idx, s.test_idx) = split_windows(
      windows, ctx.cfg.at("split").at("test_fraction").get<double>(), seed_of(ctx.cfg));
  for (auto i : s.train_idx) s.train.push_back(windows[i]);
  for (auto i : s.test_idx) s.test.push_back(windows[i]);
  return s;
}

// Scores CSV: window_id,hour,label,score with the rows of a window
// contiguous and hours ascending (hour is window-relative).
void write_scores(const fs::path& path, const ExampleSet& set, const Vector& scores) {
  auto os = open_out(path);
  os << "window_id,hour,label,score\n";
  for (const auto& span : set.spans) {
    for (Index r = span.begin; r < span.end; ++r) {
      os << set.window_ids[span.window] << ',' << span.first_hour + (r - span.begin) << ','
         << set.labels[r] << ',' << num(scores[r]) << '\n';
    }
  }
}

struct ScoreTable {
  Vector scores;
  Labels labels;
  std::vector<WindowSpan> spans;
  std::vector<std::string> ids;
};

// The debris-flow hour of a positive window is its last positive label.
ScoreTable read_scores(const fs::path& path) {
  require_file(path, "scores CSV", "columns window_id,hour,label,score; `eval` writes one");
  const CsvTable t = CsvTable::read(path);
  t.require_columns({"window_id", "hour", "label", "score"});
  const auto c_id = t.column("window_id"), c_h = t.column("hour"), c_l = t.column("label"),
             c_s = t.column("score");
  ScoreTable out;
  const auto n = static_cast<Index>(t.rows().size());
  out.scores.resize(n);
  out.labels.resize(n);
  for (Index r = 0; r < n; ++r) {
    const auto& row = t.rows()[static_cast<std::size_t>(r)];
    const std::string ctx = t.source() + ":" + std::to_string(t.line_of(static_cast<std::size_t>(r)));
    const double label = parse_double(row[c_l], ctx);
    if (label != 0.0 && label != 1.0) throw InputError(ctx + ": label must be 0 or 1");
    out.labels[r] = static_cast<int>(label);
    out.scores[r] = parse_double(row[c_s], ctx);
    const auto hour = static_cast<Index>(parse_double(row[c_h], ctx));
    if (out.ids.empty() || out.ids.back() != row[c_id]) {
      if (std::find(out.ids.begin(), out.ids.end(), row[c_id]) != out.ids.end()) {
        throw InputError(ctx + ": rows of window " + row[c_id] + " are not contiguous");
      }
      out.ids.push_back(row[c_id]);
      out.spans.push_back({out.spans.size(), r, r, hour, std::nullopt});
    }
    auto& span = out.spans.back();
    if (hour != span.first_hour + (r - span.begin)) {
      throw InputError(ctx + ": hours of window " + row[c_id] + " must be consecutive");
    }
    span.end = r + 1;
    if (out.labels[r]) span.debris_flow_idx = hour;
  }
  if (n == 0) throw InputError(path.string() + " has no rows");
  return out;
}

void write_curve(std::ostream& os, const std::string& prefix, const Curve& c) {
  for (const auto& p : c.points) {
    os << prefix << to_string(c.kind) << ',' << num(p.threshold) << ',' << num(p.x) << ',' << num(p.y)
       << '\n';
  }
}

Json counts_json(const ConfusionCounts& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

Json point_json(const ConfusionCounts& c) {
  const PointMetrics m = point_metrics(c);
  return {{"precision", opt_json(m.precision)},
          {"recall", opt_json(m.recall)},
          {"specificity", opt_json(m.specificity)},
          {"fpr", opt_json(m.fpr)},
          {"fnr", opt_json(m.fnr)},
          {"fdr", opt_json(m.fdr)},
          {"false_omission_rate", opt_json(m.false_omission_rate)},
          {"counts", counts_json(c)}};
}

void write_sweep(const fs::path& path, const std::vector<double>& params, const Vector& scores,
                 const Labels& labels) {
  auto os = open_out(path);
  os << "parameter,tp,fp,tn,fn,precision,recall,specificity,fpr\n";
  for (double p : params) {
    ConfusionCounts c;
    for (Index i = 0; i < scores.size(); ++i) {
      const bool pred = scores[i] >= p;
      if (labels[i]) (pred ? c.tp : c.fn)++;
      else (pred ? c.fp : c.tn)++;
    }
    const PointMetrics m = point_metrics(c);
    os << num(p) << ',' << c.tp << ',' << c.fp << ',' << c.tn << ',' << c.fn << ',' << opt(m.precision)
       << ',' << opt(m.recall) << ',' << opt(m.specificity) << ',' << opt(m.fpr) << '\n';
  }
}

fs::path tagged(const Context& ctx, const std::string& dir) {
  return ctx.tag.empty() ? ctx.out / dir : ctx.out / dir / ctx.tag;
}

fs::path model_path(const Context& ctx) {
  return ctx.model_path.empty() ? ctx.path_of("model") : ctx.resolve(ctx.model_path);
}

ModelDocument load_model_doc(const Context& ctx) {
  const auto path = model_path(ctx);
  require_file(path, "model document", "JSON written by `train`");
  return load_model(path);
}

}  // namespace

void write_resolved(const Context& ctx, const Json& extra) {
  Json j;
  j["command"] = ctx.command;
  j["config"] = ctx.cfg;
  Json flags = Json::object();
  if (!ctx.model_path.empty()) flags["model_path"] = ctx.model_path;
  if (!ctx.tag.empty()) flags["tag"] = ctx.tag;
  if (!ctx.scores.empty()) flags["scores"] = ctx.scores;
  if (ctx.command == "sweep-baselines") flags["subset"] = ctx.subset;
  if (ctx.command == "build-dataset") flags["features_csv"] = ctx.features_csv;
  j["flags"] = flags;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  const std::string name = ctx.tag.empty() ? ctx.command : ctx.command + "." + ctx.tag;
  write_json(ctx.out / (name + ".resolved.json"), j);
}

void run_synth(const Context& ctx) {
  const SynthConfig sc = synth_config(ctx.cfg);
  const SynthCorpus corpus = generate_corpus(sc, ctx.threads());
  write_rainfall_csv(ctx.path_of("rainfall"), corpus.rainfall.series);
  write_events_csv(ctx.path_of("events"), corpus.flows);
  write_threshold_csv(ctx.path_of("thresholds"), corpus.thresholds);
  std::size_t storms = 0;
  for (const auto& s : corpus.storms) storms += s.size();
  spdlog::info("synth: {} stations, {} storms, {} debris flows", corpus.rainfall.series.size(), storms,
               corpus.flows.size());
  write_resolved(ctx, {{"summary",
                        {{"stations", corpus.rainfall.series.size()},
                         {"storms", storms},
                         {"debris_flows", corpus.flows.size()}}}});
}

void run_segment(const Context& ctx) {
  const RainfallData rain = load_rainfall(ctx);
  const EarOptions ear = ear_options(ctx.cfg);
  auto os = open_out(ctx.out / "segment" / "main_events.csv");
  os << "station_id,event_id,start_idx,end_idx,start,end,length_h,total_mm,peak_mm\n";
  std::size_t count = 0;
  for (const auto& s : rain.series) {
    const auto events = segment_events(s, ear.rain_threshold, ear.quiet_hours);
    for (std::size_t e = 0; e < events.size(); ++e) {
      const auto& ev = events[e];
      const auto seg = s.values().segment(ev.start_idx, ev.length());
      os << s.station_id() << ',' << e << ',' << ev.start_idx << ',' << ev.end_idx << ','
         << format_timestamp(s.time_at(ev.start_idx)) << ',' << format_timestamp(s.time_at(ev.end_idx))
         << ',' << ev.length() << ',' << num(seg.sum()) << ',' << num(seg.maxCoeff()) << '\n';
    }
    count += events.size();
  }
  spdlog::info("segment: {} main events", count);
  write_resolved(ctx, {{"summary", {{"main_events", count}}}});
}

void run_ear(const Context& ctx) {
  const RainfallData rain = load_rainfall(ctx);
  const EarOptions ear = ear_options(ctx.cfg);
  auto os = open_out(ctx.out / "ear" / "ear_trace.csv");
  os << "station_id,event_id,event_start_idx,event_end_idx,hour_idx,timestamp,rainfall_mm,"
        "antecedent_mm,ear_mm\n";
  std::size_t rows = 0;
  for (const auto& s : rain.series) {
    const auto events = segment_events(s, ear.rain_threshold, ear.quiet_hours);
    for (std::size_t e = 0; e < events.size(); ++e) {
      const EarTrace tr = ear_trace(s, events[e], ear.alpha, ear.mode);
      for (Index k = 0; k < tr.ear.size(); ++k) {
        const Index h = events[e].start_idx + k;
        os << s.station_id() << ',' << e << ',' << events[e].start_idx << ',' << events[e].end_idx << ','
           << h << ',' << format_timestamp(s.time_at(h)) << ',' << num(s[h]) << ','
           << num(tr.antecedent_index) << ',' << num(tr.ear[k]) << '\n';
        ++rows;
      }
    }
  }
  write_resolved(ctx, {{"summary", {{"rows", rows}}}});
}

void run_build_dataset(const Context& ctx) {
  const auto windows = load_windows(ctx);
  const Split split = split_of(ctx, windows);
  std::vector<std::string> side(windows.size(), "train");
  for (auto i : split.test_idx) side[i] = "test";

  const FeatureSpec spec = feature_spec(ctx.cfg);
  const LabelingConfig lab = labeling_config(ctx.cfg);
  Json manifest;
  manifest["feature_spec"] = to_json(spec);
  manifest["feature_names"] = spec.feature_names();
  manifest["lead_time_h"] = lab.lead_time_h;
  Json list = Json::array();
  std::size_t pos = 0;
  Index hours = 0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    Json e;
    e["id"] = w.id;
    e["station_id"] = w.station_id();
    e["kind"] = std::string(to_string(w.kind));
    e["start"] = format_timestamp(w.rain.start());
    e["end"] = format_timestamp(w.rain.time_at(w.length() - 1));
    e["hours"] = w.length();
    e["main_event_start"] = w.main_event_start;
    e["debris_flow_idx"] = w.debris_flow_idx ? Json(*w.debris_flow_idx) : Json(nullptr);
    e["split"] = side[i];
    list.push_back(e);
    pos += w.kind == WindowKind::kPositive;
    hours += w.length();
  }
  manifest["windows"] = list;
  write_json(ctx.out / "dataset" / "windows.json", manifest);

  const ExampleSet set = build_examples(windows, spec, lab);
  if (ctx.features_csv) {
    auto os = open_out(ctx.out / "dataset" / "features.csv");
    os << "window_id,hour,label";
    for (Index f = 0; f < set.features.cols(); ++f) os << ",f" << f;
    os << '\n';
    for (const auto& span : set.spans) {
      for (Index r = span.begin; r < span.end; ++r) {
        os << set.window_ids[span.window] << ',' << span.first_hour + (r - span.begin) << ','
           << set.labels[r];
        for (Index f = 0; f < set.features.cols(); ++f) os << ',' << num(set.features(r, f));
        os << '\n';
      }
    }
  }
  const Json summary = {{"windows", windows.size()},
                        {"positive_windows", pos},
                        {"negative_windows", windows.size() - pos},
                        {"mean_window_hours", windows.empty() ? 0.0 : double(hours) / double(windows.size())},
                        {"examples", set.rows()},
                        {"positive_examples", set.positives()},
                        {"train_windows", split.train.size()},
                        {"test_windows", split.test.size()}};
  spdlog::info("build-dataset: {} positive / {} negative windows, {} examples", pos,
               windows.size() - pos, set.rows());
  write_resolved(ctx, {{"summary", summary}});
}

void run_train(const Context& ctx) {
  const auto windows = load_windows(ctx);
  const Split split = split_of(ctx, windows);
  const FeatureSpec spec = feature_spec(ctx.cfg);
  const LabelingConfig lab = labeling_config(ctx.cfg);
  const std::uint64_t seed = seed_of(ctx.cfg);

  ModelSpec ms = model_spec(ctx.cfg);
  Json extra = Json::object();
  if (ctx.cfg.at("grid").at("enabled").get<bool>()) {
    const GridSpec grid = grid_spec(ctx.cfg);
    const int k = ctx.cfg.at("grid").at("folds").get<int>();
    spdlog::info("grid search: {} cells x {} folds", grid.cells().size(), k);
    const GridSearchResult r = grid_search_cv(split.train, spec, grid, k, seed, lab, ctx.threads());
    ms = r.best.spec;
    auto os = open_out(ctx.out / "model" / "grid_cells.csv");
    os << "cell,mean_auprc,std_error\n";
    for (const auto& c : r.cells) {
      os << c.spec.describe() << ',' << num(c.mean_auprc) << ',' << num(c.std_error) << '\n';
    }
    extra["grid_best"] = {{"cell", r.best.spec.describe()}, {"mean_auprc", r.best.mean_auprc}};
  }
  const ExampleSet train = build_examples(split.train, spec, lab);
  spdlog::info("train: {} on {} rows ({} positive)", ms.describe(), train.rows(), train.positives());
  ModelDocument doc{train_model(train.features, train.labels, ms, seed, ctx.threads()), spec, lab, seed};
  save_model(model_path(ctx), doc);
  extra["model"] = ms.describe();
  extra["train_rows"] = train.rows();
  write_resolved(ctx, extra);
}

void run_cv(const Context& ctx) {
  const auto windows = load_windows(ctx);
  const LabelingConfig lab = labeling_config(ctx.cfg);
  const std::uint64_t seed = seed_of(ctx.cfg);
  const int k = ctx.cfg.at("cv").at("folds").get<int>();
  const bool grid = ctx.cfg.at("grid").at("enabled").get<bool>();
  const ModelSpec ms = model_spec(ctx.cfg);

  auto folds_os = open_out(ctx.out / "cv" / "cv_folds.csv");
  folds_os << "model,hours,fold,auprc\n";
  auto summary_os = open_out(ctx.out / "cv" / "cv_summary.csv");
  summary_os << "model,hours,mean_auprc,std_error,params\n";
  for (const auto& h : ctx.cfg.at("cv").at("hours")) {
    Json c = ctx.cfg;
    c["features"]["hourly_hours"] = h.get<int>();
    const FeatureSpec spec = feature_spec(c);
    GridCellScore score;
    if (grid) {
      const GridSearchResult r = grid_search_cv(windows, spec, grid_spec(ctx.cfg), k, seed, lab,
                                                ctx.threads());
      score = r.best;
      auto os = open_out(ctx.out / "cv" / ("grid_cells_h" + std::to_string(h.get<int>()) + ".csv"));
      os << "cell,mean_auprc,std_error\n";
      for (const auto& cell : r.cells) {
        os << cell.spec.describe() << ',' << num(cell.mean_auprc) << ',' << num(cell.std_error) << '\n';
      }
    } else {
      score = cross_validate(windows, spec, ms, k, seed, lab, ctx.threads());
    }
    for (std::size_t f = 0; f < score.fold_auprc.size(); ++f) {
      folds_os << to_string(ms.kind) << ',' << h.get<int>() << ',' << f << ','
               << num(score.fold_auprc[f]) << '\n';
    }
    summary_os << to_string(ms.kind) << ',' << h.get<int>() << ',' << num(score.mean_auprc) << ','
               << num(score.std_error) << ',' << score.spec.describe() << '\n';
    spdlog::info("cv H={}: mean AUPRC {:.4f} (se {:.4f})", h.get<int>(), score.mean_auprc,
                 score.std_error);
  }
  write_resolved(ctx);
}

void run_eval(const Context& ctx) {
  const ModelDocument doc = load_model_doc(ctx);
  if (doc.seed != seed_of(ctx.cfg)) {
    spdlog::warn("model was trained with seed {} but the split uses seed {}", doc.seed,
                 seed_of(ctx.cfg));
  }
  const auto windows = load_windows(ctx);
  const Split split = split_of(ctx, windows);
  const ExampleSet test = build_examples(split.test, doc.features, doc.labeling);
  const Vector scores = predict_proba(doc.model, test.features);
  const fs::path dir = tagged(ctx, "eval");

  const Curve roc = roc_curve(scores, test.labels);
  const Curve pr = pr_curve(scores, test.labels);
  const double threshold = ctx.cfg.at("eval").at("threshold").get<double>();
  const ConfusionCounts at = confusion(test.labels, classify(scores, threshold));
  double training_weight = 1.0;
  std::visit([&](const auto& m) {
    if constexpr (requires { m.training_weight; }) training_weight = m.training_weight;
    else training_weight = m.params.training_weight;
  }, doc.model);

  Json metrics;
  metrics["model_kind"] = model_kind(doc.model);
  metrics["AUPRC"] = auc(pr);
  metrics["AUROC"] = auroc(scores, test.labels);
  metrics["auprc_method"] = auc_method(CurveKind::kPr);
  metrics["auroc_method"] = auc_method(CurveKind::kRoc);
  metrics["test_windows"] = split.test.size();
  metrics["test_rows"] = test.rows();
  metrics["test_positive_rows"] = test.positives();
  metrics["training_weight"] = training_weight;
  metrics["threshold"] = threshold;
  metrics["at_threshold"] = point_json(at);
  // Features and labels come from the model document, not the command line.
  Json resolved = ctx.cfg;
  resolved["features"]["hourly_hours"] = doc.features.hourly_hours;
  resolved["features"]["daily_days"] = doc.features.daily_days;
  resolved["features"]["daily_weighted"] = doc.features.daily_weighted;
  resolved["features"]["include_ear"] = doc.features.include_ear;
  resolved["features"]["padding"] =
      doc.features.padding == PaddingMode::kZeroPad ? "zero_pad" : "skip_incomplete";
  resolved["labeling"]["lead_time_h"] = doc.labeling.lead_time_h;
  metrics["resolved_config"] = resolved;
  write_json(dir / "metrics.json", metrics);

  {
    auto os = open_out(dir / "curves.csv");
    os << "kind,threshold,x,y\n";
    write_curve(os, "", roc);
    write_curve(os, "", pr);
  }
  {
    auto os = open_out(dir / "tradeoff.csv");
    os << "threshold,precision,recall,specificity,fpr,fnr,false_omission_rate,fdr\n";
    for (const auto& p : roc.points) {
      const PointMetrics m = point_metrics(p.counts);
      os << num(p.threshold) << ',' << opt(m.precision) << ',' << opt(m.recall) << ','
         << opt(m.specificity) << ',' << opt(m.fpr) << ',' << opt(m.fnr) << ','
         << opt(m.false_omission_rate) << ',' << opt(m.fdr) << '\n';
    }
  }
  {
    const PointMetrics m = point_metrics(at);
    auto os = open_out(dir / "point.csv");
    os << "tag,training_weight,threshold,precision,recall,specificity,fnr,fdr,false_omission_rate,"
          "tp,fp,tn,fn\n";
    os << (ctx.tag.empty() ? "default" : ctx.tag) << ',' << num(training_weight) << ',' << num(threshold)
       << ',' << opt(m.precision) << ',' << opt(m.recall) << ',' << opt(m.specificity) << ','
       << opt(m.fnr) << ',' << opt(m.fdr) << ',' << opt(m.false_omission_rate) << ',' << at.tp << ','
       << at.fp << ',' << at.tn << ',' << at.fn << '\n';
  }
  write_scores(dir / "scores.csv", test, scores);
  spdlog::info("eval: AUPRC {:.4f}, AUROC {:.4f} on {} test rows", metrics["AUPRC"].get<double>(),
               metrics["AUROC"].get<double>(), test.rows());
  write_resolved(ctx, {{"summary", {{"AUPRC", metrics["AUPRC"]}, {"AUROC", metrics["AUROC"]}}}});
}

void run_sweep_baselines(const Context& ctx) {
  if (ctx.subset != "test" && ctx.subset != "all") {
    throw InputError("--set must be test or all, got '" + ctx.subset + "'");
  }
  const auto windows = load_windows(ctx);
  const ThresholdTable table = load_thresholds(ctx);
  const Split split = split_of(ctx, windows);
  const auto& chosen = ctx.subset == "all" ? windows : split.test;
  const FeatureSpec spec = feature_spec(ctx.cfg);
  const LabelingConfig lab = labeling_config(ctx.cfg);
  const AlertPolicy policy{ctx.cfg.at("baselines").at("latch").get<bool>(), kQuietHours};

  const ExampleSet set = build_examples(chosen, spec, lab);
  const Vector ear = stacked_ear_scores(chosen, spec, policy);
  const Vector ratio = stacked_ear_scores(chosen, spec, policy, &table);
  const auto hm_grid = hm_threshold_grid(ear.maxCoeff(), ctx.cfg.at("baselines").at("hm_steps").get<int>());
  const auto etm_grid = etm_scale_grid(ratio.maxCoeff(), ctx.cfg.at("baselines").at("etm_scale_step").get<double>());
  const Curve hm_pr = pr_curve_at(ear, set.labels, hm_grid);
  const Curve hm_roc = roc_curve_at(ear, set.labels, hm_grid);
  const Curve etm_pr = pr_curve_at(ratio, set.labels, etm_grid);
  const Curve etm_roc = roc_curve_at(ratio, set.labels, etm_grid);

  const fs::path dir = ctx.out / "baselines";
  write_sweep(dir / "hm_sweep.csv", hm_grid, ear, set.labels);
  write_sweep(dir / "etm_sweep.csv", etm_grid, ratio, set.labels);
  {
    auto os = open_out(dir / "curves.csv");
    os << "model,kind,threshold,x,y\n";
    write_curve(os, "HM,", hm_pr);
    write_curve(os, "HM,", hm_roc);
    write_curve(os, "ETM,", etm_pr);
    write_curve(os, "ETM,", etm_roc);
  }
  write_scores(dir / "hm_scores.csv", set, ear);
  write_scores(dir / "etm_scores.csv", set, ratio);

  Json marked = Json::array();
  for (double t : hm_marked_thresholds()) {
    ConfusionCounts c;
    for (Index i = 0; i < ear.size(); ++i) {
      const bool p = ear[i] >= t;
      if (set.labels[i]) (p ? c.tp : c.fn)++;
      else (p ? c.fp : c.tn)++;
    }
    Json e = point_json(c);
    e["threshold_mm"] = t;
    marked.push_back(e);
  }
  ConfusionCounts official;
  for (Index i = 0; i < ratio.size(); ++i) {
    const bool p = ratio[i] >= 1.0;
    if (set.labels[i]) (p ? official.tp : official.fn)++;
    else (p ? official.fp : official.tn)++;
  }
  const Json summary = {{"subset", ctx.subset},
                        {"rows", set.rows()},
                        {"positive_rows", set.positives()},
                        {"HM_AUPRC", auc(hm_pr)},
                        {"HM_AUROC", auc(hm_roc)},
                        {"ETM_AUPRC", auc(etm_pr)},
                        {"ETM_AUROC", auc(etm_roc)},
                        {"ETM_official", point_json(official)},
                        {"HM_marked_thresholds", marked},
                        {"latched_alerts", policy.latch}};
  write_json(dir / "summary.json", summary);
  spdlog::info("sweep-baselines: HM AUPRC {:.4f}, ETM AUPRC {:.4f}", auc(hm_pr), auc(etm_pr));
  write_resolved(ctx, {{"summary", summary}});
}

namespace {

std::vector<std::pair<std::string, fs::path>> score_inputs(const Context& ctx,
                                                           bool default_baselines) {
  std::vector<std::pair<std::string, fs::path>> out;
  for (const auto& s : ctx.scores) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) out.emplace_back(fs::path(s).stem().string(), ctx.resolve(s));
    else out.emplace_back(s.substr(0, eq), ctx.resolve(s.substr(eq + 1)));
  }
  if (out.empty()) {
    out.emplace_back("model", ctx.path_of("scores"));
    if (default_baselines) {
      for (const auto& [name, file] : {std::pair{"HM", "hm_scores.csv"}, std::pair{"ETM", "etm_scores.csv"}}) {
        const fs::path p = ctx.out / "baselines" / file;
        if (fs::exists(p)) out.emplace_back(name, p);
      }
    }
  }
  return out;
}

}  // namespace

void run_bootstrap_ci(const Context& ctx) {
  const auto inputs = score_inputs(ctx, false);
  const BootstrapOptions opts = bootstrap_options(ctx.cfg);
  if (opts.replicates < 100) spdlog::warn("only {} bootstrap replicates; CIs will be coarse", opts.replicates);
  Json results = Json::array();
  for (const auto& [name, path] : inputs) {
    const ScoreTable t = read_scores(path);
    const RowGroups groups = row_groups(t.spans);
    for (auto stat : {BootstrapStatistic::kAuprc, BootstrapStatistic::kAuroc}) {
      const BootstrapCI ci = block_bootstrap_ci(t.scores, t.labels, groups, stat, opts);
      results.push_back({{"input", name},
                         {"statistic", ci.statistic},
                         {"point", ci.point},
                         {"level", ci.level},
                         {"lower", ci.lower},
                         {"upper", ci.upper},
                         {"block_hours", ci.block_hours},
                         {"replicates", ci.replicates},
                         {"skipped_replicates", ci.skipped_replicates},
                         {"low_replicate_warning", ci.low_replicate_warning},
                         {"seed", ci.seed},
                         {"method", ci.method}});
      spdlog::info("{} {} {:.4f} ({:.0f}% CI {:.4f}, {:.4f})", name, ci.statistic, ci.point,
                   100 * ci.level, ci.lower, ci.upper);
    }
  }
  write_json(tagged(ctx, "bootstrap") / "ci.json", results);
  write_resolved(ctx);
}

void run_operating_points(const Context& ctx) {
  const auto inputs = score_inputs(ctx, true);
  const auto& op = ctx.cfg.at("operating_points");
  const auto recall_targets = op.at("recall_targets").get<std::vector<double>>();
  const auto precision_targets = op.at("precision_targets").get<std::vector<double>>();
  auto os = open_out(tagged(ctx, "operating_points") / "operating_points.csv");
  os << "model,target_metric,target,status,threshold,precision,recall,specificity,tp,fp,tn,fn\n";
  std::size_t infeasible = 0;
  for (const auto& [name, path] : inputs) {
    const ScoreTable t = read_scores(path);
    const Curve pr = pr_curve(t.scores, t.labels);
    for (auto metric : {TargetMetric::kRecall, TargetMetric::kPrecision}) {
      const auto& targets = metric == TargetMetric::kRecall ? recall_targets : precision_targets;
      for (const auto& p : operating_points(pr, targets, metric)) {
        os << name << ',' << (metric == TargetMetric::kRecall ? "recall" : "precision") << ','
           << num(p.target) << ',';
        if (!p.feasible) {
          os << "infeasible,,,,,,,,\n";
          ++infeasible;
          continue;
        }
        os << "ok," << num(p.threshold) << ',' << opt(p.precision) << ',' << opt(p.recall) << ','
           << opt(p.specificity) << ',' << p.counts.tp << ',' << p.counts.fp << ',' << p.counts.tn
           << ',' << p.counts.fn << '\n';
      }
    }
  }
  spdlog::info("operating-points: {} inputs, {} infeasible targets", inputs.size(), infeasible);
  write_resolved(ctx, {{"summary", {{"inputs", inputs.size()}, {"infeasible_targets", infeasible}}}});
}

void run_event_capture(const Context& ctx) {
  const auto inputs = score_inputs(ctx, false);
  const int lead = labeling_config(ctx.cfg).lead_time_h;
  const auto taus = capture_thresholds(ctx.cfg.at("event_capture").at("step").get<double>());
  auto os = open_out(tagged(ctx, "event_capture") / "capture.csv");
  os << "model,threshold,captured,missed\n";
  for (const auto& [name, path] : inputs) {
    const ScoreTable t = read_scores(path);
    for (const auto& row : event_capture(t.spans, t.scores, taus, lead)) {
      os << name << ',' << num(row.threshold) << ',' << row.captured << ',' << row.missed << '\n';
    }
  }
  write_resolved(ctx);
}

void run_explain(const Context& ctx) {
  const ModelDocument doc = load_model_doc(ctx);
  const auto* forest = std::get_if<ForestModel>(&doc.model);
  if (!forest) throw InputError("explain needs a random forest model (kind rf), got " + model_kind(doc.model));
  const auto windows = load_windows(ctx);
  const Split split = split_of(ctx, windows);
  const std::uint64_t seed = seed_of(ctx.cfg);
  const auto& ex = ctx.cfg.at("explain");
  const ExampleSet train = build_examples(split.train, doc.features, doc.labeling);
  const ExampleSet test = build_examples(split.test, doc.features, doc.labeling);
  const FeatureMatrix background = sample_background(train.features, ex.at("background").get<int>(), seed);

  // Explained rows: a seeded sample of test rows, in row order.
  const Index want = std::min<Index>(ex.at("rows").get<int>(), test.rows());
  std::vector<Index> rows(static_cast<std::size_t>(test.rows()));
  std::iota(rows.begin(), rows.end(), Index{0});
  Rng rng = make_rng(seed, 0xe7);
  std::shuffle(rows.begin(), rows.end(), rng);
  rows.resize(static_cast<std::size_t>(want));
  std::sort(rows.begin(), rows.end());

  std::vector<std::string> row_id(static_cast<std::size_t>(test.rows()));
  for (const auto& span : test.spans) {
    for (Index r = span.begin; r < span.end; ++r) {
      row_id[static_cast<std::size_t>(r)] =
          test.window_ids[span.window] + ":" + std::to_string(span.first_hour + (r - span.begin));
    }
  }
  FeatureMatrix explained(want, test.features.cols());
  for (Index k = 0; k < want; ++k) explained.row(k) = test.features.row(rows[static_cast<std::size_t>(k)]);

  std::vector<ShapAttribution> attr(static_cast<std::size_t>(want));
  parallel_for(attr.size(), ctx.threads(), [&](std::size_t k) {
    attr[k] = tree_shap(*forest, explained.row(static_cast<Index>(k)).transpose(), background);
  });
  const auto names = doc.features.feature_names();
  double worst = 0.0;
  {
    auto os = open_out(ctx.out / "explain" / "shap.csv");
    os << "row_id,feature_name,feature_value,shap_value\n";
    for (std::size_t k = 0; k < attr.size(); ++k) {
      worst = std::max(worst, std::abs(attr[k].phi.sum() + attr[k].base - attr[k].score));
      for (Index f = 0; f < explained.cols(); ++f) {
        os << row_id[static_cast<std::size_t>(rows[k])] << ',' << names[static_cast<std::size_t>(f)] << ','
           << num(explained(static_cast<Index>(k), f)) << ',' << num(attr[k].phi[f]) << '\n';
      }
    }
  }
  ImportanceOptions io;
  io.method = ex.at("method").get<std::string>() == "permutation" ? ImportanceMethod::kPermutation
                                                                  : ImportanceMethod::kMeanAbsShap;
  io.seed = seed;
  io.permutations = ex.at("permutations").get<int>();
  io.threads = ctx.threads();
  std::vector<FeatureImportance> ranking;
  if (io.method == ImportanceMethod::kMeanAbsShap) {
    Vector mean_abs = Vector::Zero(explained.cols());
    for (const auto& a : attr) mean_abs += a.phi.cwiseAbs();
    mean_abs /= static_cast<double>(std::max<std::size_t>(attr.size(), 1));
    for (Index f = 0; f < mean_abs.size(); ++f) ranking.push_back({f, names[static_cast<std::size_t>(f)], mean_abs[f]});
    std::stable_sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  } else {
    ranking = importance_ranking(*forest, test.features, test.labels, background, names, io);
  }
  {
    auto os = open_out(ctx.out / "explain" / "importance.csv");
    os << "rank,feature,score\n";
    for (std::size_t r = 0; r < ranking.size(); ++r) {
      os << r + 1 << ',' << ranking[r].name << ',' << num(ranking[r].score) << '\n';
    }
  }
  const Json summary = {{"explained_rows", want},
                        {"background_rows", background.rows()},
                        {"background_seed", seed},
                        {"importance_method", ex.at("method")},
                        {"max_local_accuracy_error", worst},
                        {"base_value", attr.empty() ? 0.0 : attr.front().base}};
  write_json(ctx.out / "explain" / "summary.json", summary);
  spdlog::info("explain: {} rows, top feature {}", want, ranking.empty() ? "-" : ranking.front().name);
  write_resolved(ctx, {{"summary", summary}});
}

}  // namespace debris_ews::cli
