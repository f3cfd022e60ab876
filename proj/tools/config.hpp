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
#include <vector>

#include "json.hpp"

#include "debris_ews/bootstrap.hpp"
#include "debris_ews/dataset.hpp"
#include "debris_ews/explain.hpp"
#include "debris_ews/grid_search.hpp"
#include "debris_ews/synth.hpp"

namespace debris_ews::cli {

using Json = nlohmann::ordered_json;

// Every recognised key with its default value. A user config may set any
// subset; unknown keys and type mismatches are rejected.
Json default_config();

// Checks `user` against the shape of the defaults and returns one message per
// offending field (empty when valid).
std::vector<std::string> schema_errors(const Json& user, const Json& defaults);

// Defaults overlaid with the file at `path` (when non-empty). Throws
// InputError listing every offending field.
Json load_config(const std::filesystem::path& path);

// Range checks on a merged config; throws InputError listing every problem.
void validate_config(const Json& cfg);

std::uint64_t seed_of(const Json& cfg);

SynthConfig synth_config(const Json& cfg);
WindowConfig window_config(const Json& cfg);
FeatureSpec feature_spec(const Json& cfg);
LabelingConfig labeling_config(const Json& cfg);
ModelSpec model_spec(const Json& cfg);
GridSpec grid_spec(const Json& cfg);
BootstrapOptions bootstrap_options(const Json& cfg);
EarOptions ear_options(const Json& cfg);

}  // namespace debris_ews::cli
