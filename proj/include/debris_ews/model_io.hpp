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
#include <filesystem>
#include <string>
#include <variant>

#include "json.hpp"

#include "debris_ews/dataset.hpp"
#include "debris_ews/forest.hpp"
#include "debris_ews/gbt.hpp"
#include "debris_ews/logistic.hpp"

namespace debris_ews {

using AnyModel = std::variant<ForestModel, LinearModel, GbtModel>;

// P_predict in [0, 1] for every row.
Vector predict_proba(const AnyModel& model, const FeatureMatrix& X);
std::string model_kind(const AnyModel& model);

// Positive iff score >= threshold. Threshold must lie in [0, 1].
Eigen::VectorXi classify(const Vector& scores, double threshold);

inline constexpr const char* kModelFormat = "debris-ews-model";
inline constexpr int kModelFormatVersion = 1;

// A trained model together with everything needed to rebuild its inputs.
struct ModelDocument {
  AnyModel model;
  FeatureSpec features;
  LabelingConfig labeling;
  std::uint64_t seed = 0;
};

nlohmann::ordered_json to_json(const ModelDocument& doc);
ModelDocument model_from_json(const nlohmann::ordered_json& j);
void save_model(const std::filesystem::path& path, const ModelDocument& doc);
ModelDocument load_model(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const FeatureSpec& spec);
FeatureSpec feature_spec_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const DecisionTree& tree);
DecisionTree tree_from_json(const nlohmann::ordered_json& j);

}  // namespace debris_ews
