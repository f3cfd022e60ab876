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

#include "debris_ews/model_io.hpp"

#include <fstream>

namespace debris_ews {

using json = nlohmann::ordered_json;

namespace {

json depth_to_json(const std::optional<int>& d) { return d ? json(*d) : json(nullptr); }

std::optional<int> depth_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<int>();
}

template <typename T>
json vec(const std::vector<T>& v) {
  return json(v);
}

json forest_to_json(const ForestModel& m) {
  json trees = json::array();
  for (const auto& t : m.trees) trees.push_back(to_json(t));
  return {
      {"hyperparameters",
       {{"n_trees", m.params.n_trees},
        {"max_depth", depth_to_json(m.params.tree.max_depth)},
        {"min_samples_leaf", m.params.tree.min_samples_leaf},
        {"max_features", m.max_features},
        {"bootstrap", m.params.bootstrap},
        {"training_weight", m.training_weight}}},
      {"seed", m.seed},
      {"n_features", m.n_features},
      {"tree_seeds", m.tree_seeds},
      {"trees", trees},
  };
}

ForestModel forest_from_json(const json& j) {
  ForestModel m;
  const json& hp = j.at("hyperparameters");
  m.params.n_trees = hp.at("n_trees").get<int>();
  m.params.tree.max_depth = depth_from_json(hp.at("max_depth"));
  m.params.tree.min_samples_leaf = hp.at("min_samples_leaf").get<int>();
  m.max_features = hp.at("max_features").get<int>();
  m.params.tree.max_features = m.max_features;
  m.params.bootstrap = hp.at("bootstrap").get<bool>();
  m.training_weight = hp.at("training_weight").get<double>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.n_features = j.at("n_features").get<Index>();
  m.tree_seeds = j.at("tree_seeds").get<std::vector<std::uint64_t>>();
  for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
  if (m.trees.empty()) throw InputError("forest model has no trees");
  return m;
}

json linear_to_json(const LinearModel& m) {
  return {
      {"hyperparameters",
       {{"penalty", m.penalty == Penalty::kL2 ? "l2" : "none"},
        {"coefficient", m.coefficient},
        {"training_weight", m.training_weight}}},
      {"weights", std::vector<double>(m.weights.data(), m.weights.data() + m.weights.size())},
      {"bias", m.bias},
      {"iterations", m.iterations},
      {"converged", m.converged},
  };
}

LinearModel linear_from_json(const json& j) {
  LinearModel m;
  const json& hp = j.at("hyperparameters");
  const auto penalty = hp.at("penalty").get<std::string>();
  if (penalty != "l2" && penalty != "none") throw InputError("unknown penalty '" + penalty + "'");
  m.penalty = penalty == "l2" ? Penalty::kL2 : Penalty::kNone;
  m.coefficient = hp.at("coefficient").get<double>();
  m.training_weight = hp.at("training_weight").get<double>();
  const auto w = j.at("weights").get<std::vector<double>>();
  m.weights = Eigen::Map<const Vector>(w.data(), static_cast<Index>(w.size()));
  m.bias = j.at("bias").get<double>();
  m.iterations = j.at("iterations").get<int>();
  m.converged = j.at("converged").get<bool>();
  return m;
}

json gbt_to_json(const GbtModel& m) {
  json trees = json::array();
  for (const auto& t : m.trees) trees.push_back(to_json(t));
  return {
      {"hyperparameters",
       {{"n_rounds", m.params.n_rounds},
        {"max_depth", depth_to_json(m.params.max_depth)},
        {"min_child_weight", m.params.min_child_weight},
        {"learning_rate", m.params.learning_rate},
        {"lambda", m.params.lambda},
        {"training_weight", m.params.training_weight}}},
      {"initial_log_odds", m.initial_log_odds},
      {"n_features", m.n_features},
      {"trees", trees},
  };
}

GbtModel gbt_from_json(const json& j) {
  GbtModel m;
  const json& hp = j.at("hyperparameters");
  m.params.n_rounds = hp.at("n_rounds").get<int>();
  m.params.max_depth = depth_from_json(hp.at("max_depth"));
  m.params.min_child_weight = hp.at("min_child_weight").get<double>();
  m.params.learning_rate = hp.at("learning_rate").get<double>();
  m.params.lambda = hp.at("lambda").get<double>();
  m.params.training_weight = hp.at("training_weight").get<double>();
  m.initial_log_odds = j.at("initial_log_odds").get<double>();
  m.n_features = j.at("n_features").get<Index>();
  for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
  return m;
}

}  // namespace

Vector predict_proba(const AnyModel& model, const FeatureMatrix& X) {
  return std::visit([&](const auto& m) { return m.predict_proba(X); }, model);
}

std::string model_kind(const AnyModel& model) {
  switch (model.index()) {
    case 0: return "rf";
    case 1: return "lr";
    default: return "gbt";
  }
}

Eigen::VectorXi classify(const Vector& scores, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InputError("alert threshold must lie in [0, 1]");
  }
  return (scores.array() >= threshold).cast<int>();
}

json to_json(const DecisionTree& t) {
  return {
      {"feature", vec(t.feature)}, {"threshold", vec(t.threshold)}, {"left", vec(t.left)},
      {"right", vec(t.right)},     {"value", vec(t.value)},         {"weight", vec(t.weight)},
      {"count", vec(t.count)},
  };
}

DecisionTree tree_from_json(const json& j) {
  DecisionTree t;
  t.feature = j.at("feature").get<std::vector<int>>();
  t.threshold = j.at("threshold").get<std::vector<double>>();
  t.left = j.at("left").get<std::vector<int>>();
  t.right = j.at("right").get<std::vector<int>>();
  t.value = j.at("value").get<std::vector<double>>();
  t.weight = j.at("weight").get<std::vector<double>>();
  t.count = j.at("count").get<std::vector<std::int64_t>>();
  const std::size_t n = t.feature.size();
  if (n == 0 || t.threshold.size() != n || t.left.size() != n || t.right.size() != n ||
      t.value.size() != n || t.weight.size() != n || t.count.size() != n) {
    throw InputError("tree node arrays are empty or differ in length");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (t.feature[k] >= 0) {
      const auto l = static_cast<std::size_t>(t.left[k]);
      const auto r = static_cast<std::size_t>(t.right[k]);
      if (t.left[k] <= static_cast<int>(k) || t.right[k] <= static_cast<int>(k) || l >= n ||
          r >= n) {
        throw InputError("tree node " + std::to_string(k) + " has invalid children");
      }
    }
  }
  return t;
}

json to_json(const FeatureSpec& spec) {
  return {
      {"hourly_hours", spec.hourly_hours},
      {"daily_days", spec.daily_days},
      {"daily_weighted", spec.daily_weighted},
      {"include_ear", spec.include_ear},
      {"padding", spec.padding == PaddingMode::kZeroPad ? "zero_pad" : "skip_incomplete"},
      {"alpha", spec.ear.alpha},
      {"daily_window_mode", std::string(to_string(spec.ear.mode))},
      {"rain_threshold_mm", spec.ear.rain_threshold},
      {"quiet_hours", spec.ear.quiet_hours},
  };
}

FeatureSpec feature_spec_from_json(const json& j) {
  FeatureSpec s;
  s.hourly_hours = j.at("hourly_hours").get<int>();
  s.daily_days = j.at("daily_days").get<int>();
  s.daily_weighted = j.at("daily_weighted").get<bool>();
  s.include_ear = j.at("include_ear").get<bool>();
  const auto pad = j.at("padding").get<std::string>();
  if (pad != "zero_pad" && pad != "skip_incomplete") {
    throw InputError("unknown padding mode '" + pad + "'");
  }
  s.padding = pad == "zero_pad" ? PaddingMode::kZeroPad : PaddingMode::kSkipIncomplete;
  s.ear.alpha = j.at("alpha").get<double>();
  s.ear.mode = parse_daily_window_mode(j.at("daily_window_mode").get<std::string>());
  s.ear.rain_threshold = j.at("rain_threshold_mm").get<double>();
  s.ear.quiet_hours = j.at("quiet_hours").get<int>();
  s.validate();
  return s;
}

json to_json(const ModelDocument& doc) {
  json body = std::visit(
      [](const auto& m) -> json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ForestModel>) return forest_to_json(m);
        else if constexpr (std::is_same_v<M, LinearModel>) return linear_to_json(m);
        else return gbt_to_json(m);
      },
      doc.model);
  return {
      {"format", kModelFormat},
      {"version", kModelFormatVersion},
      {"kind", model_kind(doc.model)},
      {"seed", doc.seed},
      {"feature_spec", to_json(doc.features)},
      {"lead_time_h", doc.labeling.lead_time_h},
      {"model", body},
  };
}

ModelDocument model_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw InputError("not a debris-ews model document");
    }
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw InputError("unsupported model format version " + std::to_string(version));
    }
    ModelDocument doc{ForestModel{}, feature_spec_from_json(j.at("feature_spec")),
                      LabelingConfig{j.at("lead_time_h").get<int>()},
                      j.at("seed").get<std::uint64_t>()};
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "rf") doc.model = forest_from_json(j.at("model"));
    else if (kind == "lr") doc.model = linear_from_json(j.at("model"));
    else if (kind == "gbt") doc.model = gbt_from_json(j.at("model"));
    else throw InputError("unknown model kind '" + kind + "'");
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const ModelDocument& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model to '" + path.string() + "'");
  out << to_json(doc).dump() << '\n';
}

ModelDocument load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

}  // namespace debris_ews
