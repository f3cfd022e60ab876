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

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace debris_ews::cli {

namespace {

// Keys whose value may be null in addition to the default's type.
const std::set<std::string> kNullable = {"/seed", "/model/rf/max_depth", "/model/gbt/max_depth",
                                         "/grid/max_depth"};

std::string type_name(const Json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  return "object";
}

bool compatible(const Json& value, const Json& def, const std::string& ptr) {
  if (value.is_null()) return def.is_null() || kNullable.count(ptr) > 0;
  if (def.is_null()) return value.is_number_unsigned() || value.is_number_integer();  // seed
  if (def.is_number_integer()) return value.is_number_integer();
  if (def.is_number()) return value.is_number();
  return type_name(value) == type_name(def);
}

void check(const Json& user, const Json& def, const std::string& ptr,
           std::vector<std::string>& errors) {
  if (def.is_object()) {
    if (!user.is_object()) {
      errors.push_back(ptr + ": expected object, got " + type_name(user));
      return;
    }
    for (const auto& [key, value] : user.items()) {
      const std::string child = ptr + "/" + key;
      if (!def.contains(key)) {
        errors.push_back(child + ": unknown field");
        continue;
      }
      check(value, def.at(key), child, errors);
    }
    return;
  }
  if (def.is_array()) {
    if (!user.is_array()) {
      errors.push_back(ptr + ": expected array, got " + type_name(user));
      return;
    }
    if (def.empty()) return;
    // Element type follows the first non-null default element.
    Json proto = def.front();
    for (const auto& d : def) {
      if (!d.is_null()) {
        proto = d;
        break;
      }
    }
    for (std::size_t i = 0; i < user.size(); ++i) {
      const auto& v = user[i];
      if (v.is_null() ? kNullable.count(ptr) == 0 : !compatible(v, proto, ptr)) {
        errors.push_back(ptr + "/" + std::to_string(i) + ": expected " + type_name(proto) +
                         ", got " + type_name(v));
      }
    }
    return;
  }
  if (!compatible(user, def, ptr)) {
    errors.push_back(ptr + ": expected " + (def.is_null() ? std::string("unsigned integer") : type_name(def)) +
                     ", got " + type_name(user));
  }
}

void merge(Json& base, const Json& over) {
  for (const auto& [key, value] : over.items()) {
    if (value.is_object() && base.contains(key) && base[key].is_object()) {
      merge(base[key], value);
    } else {
      base[key] = value;
    }
  }
}

std::optional<int> depth(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<int>();
}

}  // namespace

Json default_config() {
  const SynthConfig s;
  Json j;
  j["seed"] = nullptr;
  j["threads"] = 1;
  j["paths"] = {{"rainfall", "data/rainfall.csv"},
                {"events", "data/events.csv"},
                {"thresholds", "data/thresholds.csv"},
                {"model", "model/model.json"},
                {"scores", "eval/scores.csv"}};
  j["rainfall"] = {{"impute_missing", false}};
  j["synth"] = {{"n_stations", s.n_stations},
                {"weeks", s.weeks},
                {"start", s.start},
                {"storm_rate_per_week", s.storm_rate_per_week},
                {"duration_shape", s.duration_shape},
                {"duration_scale", s.duration_scale},
                {"intensity_shape", s.intensity_shape},
                {"intensity_scale", s.intensity_scale},
                {"autocorrelation", s.autocorrelation},
                {"noise_sd", s.noise_sd},
                {"drizzle_rate", s.drizzle_rate},
                {"soil_decay", s.soil_decay},
                {"beta", s.beta},
                {"theta", s.theta},
                {"gamma", s.gamma},
                {"refractory_hours", s.refractory_hours},
                {"threshold_center", s.threshold_center},
                {"threshold_spread", s.threshold_spread}};
  j["ear"] = {{"alpha", kEarAlpha}, {"mode", "calendar_day"}};
  j["windows"] = {{"antecedent_hours", 168}, {"tail_hours", 24}, {"min_wet_run", 2}};
  j["features"] = {{"hourly_hours", 48},
                   {"daily_days", 0},
                   {"daily_weighted", false},
                   {"include_ear", false},
                   {"padding", "zero_pad"}};
  j["labeling"] = {{"lead_time_h", 12}};
  j["split"] = {{"test_fraction", 0.15}};
  j["model"] = {
      {"kind", "rf"},
      {"training_weight", 1.0},
      {"rf", {{"n_trees", 40}, {"max_depth", 15}, {"min_samples_leaf", 1}, {"max_features", -1},
              {"bootstrap", true}}},
      {"gbt", {{"n_rounds", 100}, {"max_depth", 6}, {"min_child_weight", 1.0},
               {"learning_rate", 0.1}, {"lambda", 1.0}}},
      {"lr", {{"penalty", "none"}, {"coefficient", 0.0}, {"max_iterations", 10000},
              {"gradient_tolerance", 1e-6}}}};
  j["grid"] = {{"enabled", false},
               {"folds", 10},
               {"n_trees", {10, 40, 70, 100}},
               {"max_depth", {nullptr, 1, 2, 6, 15, 39, 100}},
               {"min_samples_leaf", {1, 2, 4}},
               {"learning_rate", {0.001, 0.01, 0.1, 1.0}},
               {"l2_coefficient", {0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0}}};
  j["cv"] = {{"folds", 10}, {"hours", {6, 12, 24, 48, 96, 168}}};
  j["eval"] = {{"threshold", 0.5}};
  j["baselines"] = {{"hm_steps", 1000}, {"etm_scale_step", 0.001}, {"latch", false}};
  j["bootstrap"] = {{"block_hours", 6}, {"replicates", 10000}, {"level", 0.95}};
  j["operating_points"] = {{"recall_targets", {0.5, 0.6, 0.7, 0.8, 0.9, 1.0}},
                           {"precision_targets", {0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5}}};
  j["event_capture"] = {{"step", 0.01}};
  j["explain"] = {{"rows", 100}, {"background", 512}, {"method", "mean_abs_shap"},
                  {"permutations", 10}};
  return j;
}

std::vector<std::string> schema_errors(const Json& user, const Json& defaults) {
  std::vector<std::string> errors;
  check(user, defaults, "", errors);
  return errors;
}

Json load_config(const std::filesystem::path& path) {
  Json cfg = default_config();
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  Json user;
  try {
    user = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  const auto errors = schema_errors(user, cfg);
  if (!errors.empty()) {
    std::string msg = "config " + path.string() + " violates the schema:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw InputError(msg);
  }
  merge(cfg, user);
  return cfg;
}

void validate_config(const Json& cfg) {
  std::vector<std::string> bad;
  auto need = [&](bool ok, const std::string& field, const std::string& rule) {
    if (!ok) bad.push_back(field + ": " + rule);
  };
  need(!cfg.at("seed").is_null(), "/seed", "a seed is required (config field or --seed)");
  need(cfg.at("threads").get<int>() >= 1, "/threads", "must be >= 1");
  const auto& f = cfg.at("features");
  const int H = f.at("hourly_hours").get<int>();
  const int D = f.at("daily_days").get<int>();
  need(H >= 0 && H <= 168, "/features/hourly_hours", "must lie in [0, 168]");
  need(D >= 0 && D <= 7, "/features/daily_days", "must lie in [0, 7]");
  need(H + D + (f.at("include_ear").get<bool>() ? 1 : 0) > 0, "/features", "needs at least one feature");
  const auto pad = f.at("padding").get<std::string>();
  need(pad == "zero_pad" || pad == "skip_incomplete", "/features/padding",
       "must be zero_pad or skip_incomplete");
  const auto mode = cfg.at("ear").at("mode").get<std::string>();
  need(mode == "calendar_day" || mode == "rolling_24h", "/ear/mode", "must be calendar_day or rolling_24h");
  const double alpha = cfg.at("ear").at("alpha").get<double>();
  need(alpha > 0.0 && alpha <= 1.0, "/ear/alpha", "must lie in (0, 1]");
  need(cfg.at("labeling").at("lead_time_h").get<int>() >= 1, "/labeling/lead_time_h", "must be >= 1");
  const double tf = cfg.at("split").at("test_fraction").get<double>();
  need(tf > 0.0 && tf < 1.0, "/split/test_fraction", "must lie in (0, 1)");
  const auto kind = cfg.at("model").at("kind").get<std::string>();
  need(kind == "rf" || kind == "lr" || kind == "gbt", "/model/kind", "must be rf, lr or gbt");
  const double tw = cfg.at("model").at("training_weight").get<double>();
  need(tw > 0.0 && std::isfinite(tw), "/model/training_weight", "must be > 0");
  need(cfg.at("model").at("rf").at("n_trees").get<int>() >= 1, "/model/rf/n_trees", "must be >= 1");
  need(cfg.at("model").at("rf").at("min_samples_leaf").get<int>() >= 1, "/model/rf/min_samples_leaf",
       "must be >= 1");
  need(cfg.at("model").at("gbt").at("n_rounds").get<int>() >= 0, "/model/gbt/n_rounds", "must be >= 0");
  need(cfg.at("model").at("gbt").at("learning_rate").get<double>() >= 0.0, "/model/gbt/learning_rate",
       "must be >= 0");
  const auto pen = cfg.at("model").at("lr").at("penalty").get<std::string>();
  need(pen == "none" || pen == "l2", "/model/lr/penalty", "must be none or l2");
  need(cfg.at("grid").at("folds").get<int>() >= 2, "/grid/folds", "must be >= 2");
  need(cfg.at("cv").at("folds").get<int>() >= 2, "/cv/folds", "must be >= 2");
  need(!cfg.at("cv").at("hours").empty(), "/cv/hours", "must not be empty");
  const double thr = cfg.at("eval").at("threshold").get<double>();
  need(thr >= 0.0 && thr <= 1.0, "/eval/threshold", "must lie in [0, 1]");
  need(cfg.at("baselines").at("hm_steps").get<int>() >= 1, "/baselines/hm_steps", "must be >= 1");
  need(cfg.at("baselines").at("etm_scale_step").get<double>() > 0.0, "/baselines/etm_scale_step",
       "must be > 0");
  need(cfg.at("bootstrap").at("block_hours").get<int>() >= 1, "/bootstrap/block_hours", "must be >= 1");
  need(cfg.at("bootstrap").at("replicates").get<int>() >= 1, "/bootstrap/replicates", "must be >= 1");
  const double level = cfg.at("bootstrap").at("level").get<double>();
  need(level > 0.0 && level < 1.0, "/bootstrap/level", "must lie in (0, 1)");
  for (const char* key : {"recall_targets", "precision_targets"}) {
    for (const auto& t : cfg.at("operating_points").at(key)) {
      const double v = t.get<double>();
      need(v > 0.0 && v <= 1.0, std::string("/operating_points/") + key, "targets must lie in (0, 1]");
    }
  }
  need(cfg.at("event_capture").at("step").get<double>() > 0.0, "/event_capture/step", "must be > 0");
  need(cfg.at("explain").at("rows").get<int>() >= 1, "/explain/rows", "must be >= 1");
  need(cfg.at("explain").at("background").get<int>() >= 1, "/explain/background", "must be >= 1");
  const auto method = cfg.at("explain").at("method").get<std::string>();
  need(method == "mean_abs_shap" || method == "permutation", "/explain/method",
       "must be mean_abs_shap or permutation");
  try {
    synth_config(cfg).validate();
  } catch (const InputError& e) {
    bad.push_back(std::string("/synth: ") + e.what());
  }
  if (!bad.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw InputError(msg);
  }
}

std::uint64_t seed_of(const Json& cfg) { return cfg.at("seed").get<std::uint64_t>(); }

SynthConfig synth_config(const Json& cfg) {
  const auto& j = cfg.at("synth");
  SynthConfig s;
  s.n_stations = j.at("n_stations").get<int>();
  s.weeks = j.at("weeks").get<int>();
  s.start = j.at("start").get<std::string>();
  s.storm_rate_per_week = j.at("storm_rate_per_week").get<double>();
  s.duration_shape = j.at("duration_shape").get<double>();
  s.duration_scale = j.at("duration_scale").get<double>();
  s.intensity_shape = j.at("intensity_shape").get<double>();
  s.intensity_scale = j.at("intensity_scale").get<double>();
  s.autocorrelation = j.at("autocorrelation").get<double>();
  s.noise_sd = j.at("noise_sd").get<double>();
  s.drizzle_rate = j.at("drizzle_rate").get<double>();
  s.soil_decay = j.at("soil_decay").get<double>();
  s.beta = j.at("beta").get<double>();
  s.theta = j.at("theta").get<double>();
  s.gamma = j.at("gamma").get<double>();
  s.refractory_hours = j.at("refractory_hours").get<int>();
  s.threshold_center = j.at("threshold_center").get<double>();
  s.threshold_spread = j.at("threshold_spread").get<double>();
  if (!cfg.at("seed").is_null()) s.seed = seed_of(cfg);
  return s;
}

EarOptions ear_options(const Json& cfg) {
  EarOptions e;
  e.alpha = cfg.at("ear").at("alpha").get<double>();
  e.mode = parse_daily_window_mode(cfg.at("ear").at("mode").get<std::string>());
  return e;
}

WindowConfig window_config(const Json& cfg) {
  const auto& j = cfg.at("windows");
  WindowConfig w;
  w.antecedent_hours = j.at("antecedent_hours").get<int>();
  w.tail_hours = j.at("tail_hours").get<int>();
  w.min_wet_run = j.at("min_wet_run").get<int>();
  return w;
}

FeatureSpec feature_spec(const Json& cfg) {
  const auto& j = cfg.at("features");
  FeatureSpec f;
  f.hourly_hours = j.at("hourly_hours").get<int>();
  f.daily_days = j.at("daily_days").get<int>();
  f.daily_weighted = j.at("daily_weighted").get<bool>();
  f.include_ear = j.at("include_ear").get<bool>();
  f.padding = j.at("padding").get<std::string>() == "zero_pad" ? PaddingMode::kZeroPad
                                                               : PaddingMode::kSkipIncomplete;
  f.ear = ear_options(cfg);
  f.validate();
  return f;
}

LabelingConfig labeling_config(const Json& cfg) {
  return {cfg.at("labeling").at("lead_time_h").get<int>()};
}

ModelSpec model_spec(const Json& cfg) {
  const auto& m = cfg.at("model");
  ModelSpec s;
  s.kind = parse_model_kind(m.at("kind").get<std::string>());
  s.training_weight = m.at("training_weight").get<double>();
  const auto& rf = m.at("rf");
  s.forest.n_trees = rf.at("n_trees").get<int>();
  s.forest.tree.max_depth = depth(rf.at("max_depth"));
  s.forest.tree.min_samples_leaf = rf.at("min_samples_leaf").get<int>();
  s.forest.tree.max_features = rf.at("max_features").get<int>();
  s.forest.bootstrap = rf.at("bootstrap").get<bool>();
  const auto& g = m.at("gbt");
  s.gbt.n_rounds = g.at("n_rounds").get<int>();
  s.gbt.max_depth = depth(g.at("max_depth"));
  s.gbt.min_child_weight = g.at("min_child_weight").get<double>();
  s.gbt.learning_rate = g.at("learning_rate").get<double>();
  s.gbt.lambda = g.at("lambda").get<double>();
  const auto& lr = m.at("lr");
  s.logistic.penalty = lr.at("penalty").get<std::string>() == "l2" ? Penalty::kL2 : Penalty::kNone;
  s.logistic.coefficient = lr.at("coefficient").get<double>();
  s.logistic.max_iterations = lr.at("max_iterations").get<int>();
  s.logistic.gradient_tolerance = lr.at("gradient_tolerance").get<double>();
  return s;
}

GridSpec grid_spec(const Json& cfg) {
  const auto& g = cfg.at("grid");
  GridSpec s;
  s.kind = parse_model_kind(cfg.at("model").at("kind").get<std::string>());
  s.training_weight = cfg.at("model").at("training_weight").get<double>();
  s.n_trees = g.at("n_trees").get<std::vector<int>>();
  s.max_depth.clear();
  for (const auto& d : g.at("max_depth")) s.max_depth.push_back(depth(d));
  s.min_samples_leaf = g.at("min_samples_leaf").get<std::vector<int>>();
  s.learning_rate = g.at("learning_rate").get<std::vector<double>>();
  s.l2_coefficient = g.at("l2_coefficient").get<std::vector<double>>();
  return s;
}

BootstrapOptions bootstrap_options(const Json& cfg) {
  const auto& b = cfg.at("bootstrap");
  BootstrapOptions o;
  o.block_hours = b.at("block_hours").get<int>();
  o.replicates = b.at("replicates").get<int>();
  o.level = b.at("level").get<double>();
  o.seed = seed_of(cfg);
  o.threads = cfg.at("threads").get<int>();
  return o;
}

}  // namespace debris_ews::cli
