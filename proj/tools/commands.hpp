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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace debris_ews::cli {

// Everything a subcommand needs: the merged, validated config, the working
// directory that relative paths resolve against, and per-command flags.
struct Context {
  Json cfg;
  std::filesystem::path out = ".";
  std::string command;

  // Command-specific flags (unset means "use the config").
  std::string model_path;
  std::string tag;
  std::vector<std::string> scores;  // name=path pairs or plain paths
  std::string subset = "test";      // sweep-baselines: test | all
  bool features_csv = true;

  std::filesystem::path resolve(const std::string& relative) const;
  std::filesystem::path path_of(const std::string& key) const;  // cfg /paths/<key>
  int threads() const;
};

void run_synth(const Context& ctx);
void run_segment(const Context& ctx);
void run_ear(const Context& ctx);
void run_build_dataset(const Context& ctx);
void run_train(const Context& ctx);
void run_cv(const Context& ctx);
void run_eval(const Context& ctx);
void run_sweep_baselines(const Context& ctx);
void run_bootstrap_ci(const Context& ctx);
void run_operating_points(const Context& ctx);
void run_event_capture(const Context& ctx);
void run_explain(const Context& ctx);

// <out>/<command>.resolved.json: the full config that ran plus the
// command-specific flags. No timestamps, so reruns are byte-identical.
void write_resolved(const Context& ctx, const Json& extra = Json::object());

}  // namespace debris_ews::cli
