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

#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using namespace debris_ews;
using namespace debris_ews::cli;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("debris-ews");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("DEBRIS_EWS_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::info);
}

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::optional<int> threads;
  // Overrides that land in the config.
  std::optional<std::string> model;
  std::optional<int> hours;
  std::optional<double> tw;
  std::optional<int> reps;
  std::optional<int> folds;
  std::optional<double> threshold;
  std::vector<int> cv_hours;
  bool grid = false;
};

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Rainfall-based debris-flow early warning: EAR baselines, tree ensembles, evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  Context ctx;
  app.add_option("--config", f.config, "JSON run configuration");
  app.add_option("--seed", f.seed, "random seed (required here or in the config)");
  app.add_option("--out", f.out, "working directory; relative paths resolve against it");
  app.add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);

  const std::map<std::string, std::function<void(const Context&)>> runners = {
      {"synth", run_synth},
      {"segment", run_segment},
      {"ear", run_ear},
      {"build-dataset", run_build_dataset},
      {"train", run_train},
      {"cv", run_cv},
      {"eval", run_eval},
      {"sweep-baselines", run_sweep_baselines},
      {"bootstrap-ci", run_bootstrap_ci},
      {"operating-points", run_operating_points},
      {"event-capture", run_event_capture},
      {"explain", run_explain},
  };
  std::map<std::string, CLI::App*> subs;
  subs["synth"] = app.add_subcommand("synth", "generate the synthetic rainfall / debris-flow corpus");
  subs["segment"] = app.add_subcommand("segment", "main rainfall events per station");
  subs["ear"] = app.add_subcommand("ear", "EAR trace of every main event");
  subs["build-dataset"] = app.add_subcommand("build-dataset", "windows, labels, features and split");
  subs["train"] = app.add_subcommand("train", "train a model on the training windows");
  subs["cv"] = app.add_subcommand("cv", "window-grouped k-fold CV over hourly input lengths");
  subs["eval"] = app.add_subcommand("eval", "score the test windows: metrics, curves, trade-offs");
  subs["sweep-baselines"] = app.add_subcommand("sweep-baselines", "ETM and HM threshold sweeps");
  subs["bootstrap-ci"] = app.add_subcommand("bootstrap-ci", "block-bootstrap CIs of AUPRC and AUROC");
  subs["operating-points"] = app.add_subcommand("operating-points", "thresholds meeting recall/precision targets");
  subs["event-capture"] = app.add_subcommand("event-capture", "captured debris flows per alert threshold");
  subs["explain"] = app.add_subcommand("explain", "SHAP attributions and feature ranking");

  for (const char* name : {"build-dataset", "train", "cv", "explain"}) {
    subs[name]->add_option("--hours", f.hours, "hourly input length H")->check(CLI::Range(0, 168));
  }
  for (const char* name : {"train", "cv"}) {
    subs[name]->add_option("--model", f.model, "rf, lr or gbt");
    subs[name]->add_option("--tw", f.tw, "training weight on positive examples");
    subs[name]->add_flag("--grid", f.grid, "grid-search hyperparameters by cross-validation");
  }
  subs["cv"]->add_option("--folds", f.folds, "number of folds")->check(CLI::Range(2, 1000));
  subs["cv"]->add_option("--hours-list", f.cv_hours, "hourly input lengths to compare");
  for (const char* name : {"train", "eval", "explain"}) {
    subs[name]->add_option("--model-path", ctx.model_path, "model JSON (default from config)");
  }
  for (const char* name : {"eval", "bootstrap-ci", "operating-points", "event-capture"}) {
    subs[name]->add_option("--tag", ctx.tag, "subdirectory name for this run's outputs");
  }
  subs["eval"]->add_option("--threshold", f.threshold, "P_threshold for the point metrics");
  for (const char* name : {"bootstrap-ci", "operating-points", "event-capture"}) {
    subs[name]->add_option("--scores", ctx.scores, "scores CSV, optionally name=path (repeatable)");
  }
  subs["bootstrap-ci"]->add_option("--reps", f.reps, "bootstrap replicates")->check(CLI::PositiveNumber);
  subs["sweep-baselines"]->add_option("--set", ctx.subset, "test or all");
  bool no_features = false;
  subs["build-dataset"]->add_flag("--no-features-csv", no_features, "skip the feature matrix export");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) ctx.command = name;
    }
    ctx.out = f.out;
    ctx.features_csv = !no_features;
    ctx.cfg = load_config(f.config);
    if (f.seed) ctx.cfg["seed"] = *f.seed;
    if (f.threads) ctx.cfg["threads"] = *f.threads;
    if (f.model) ctx.cfg["model"]["kind"] = *f.model;
    if (f.hours) ctx.cfg["features"]["hourly_hours"] = *f.hours;
    if (f.tw) ctx.cfg["model"]["training_weight"] = *f.tw;
    if (f.reps) ctx.cfg["bootstrap"]["replicates"] = *f.reps;
    if (f.folds) ctx.cfg["cv"]["folds"] = *f.folds;
    if (f.threshold) ctx.cfg["eval"]["threshold"] = *f.threshold;
    if (!f.cv_hours.empty()) ctx.cfg["cv"]["hours"] = f.cv_hours;
    if (f.grid) ctx.cfg["grid"]["enabled"] = true;
    validate_config(ctx.cfg);
    std::filesystem::create_directories(ctx.out);
    runners.at(ctx.command)(ctx);
    return 0;
  } catch (const InputError& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return 2;
  }
}
