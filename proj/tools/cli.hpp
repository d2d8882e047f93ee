// Copyright 2026 The SSPSC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sspsc/data_model.hpp"
#include "sspsc/eval.hpp"
#include "sspsc/synth.hpp"
#include "sspsc/trainer.hpp"

namespace sspsc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Everything a train, eval or sweep run needs. Serialized as JSON.
struct RunConfig {
  Hyperparams hp;
  std::string source;
  std::string target;
  std::string model;
  std::string trace;
  std::string report;
  int folds = 10;
  std::optional<std::size_t> label_budget;
  bool normalize = false;
  std::string sweep_param;  // "c1", "c2" or "c3"
  std::vector<double> grid;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig parse_config(const std::string& text);
std::string format_config(const RunConfig& c);

nlohmann::json trace_to_json(const TrainingTrace& trace);
nlohmann::json report_to_json(const CvReport& report, const RunConfig& config);

struct SweepRow {
  double value = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  Hyperparams hp;
};

std::string format_sweep(const std::string& param, const std::vector<SweepRow>& rows);

/// Writes source.csv, target.csv (first n3 rows labeled) and target_full.csv
/// (every row labeled) into out_dir.
void cmd_synth(const SynthConfig& config, const std::string& out_dir);
TrainingTrace cmd_train(const RunConfig& config);
void cmd_predict(const std::string& model_path, const std::string& input_csv, const std::string& out_csv);
CvReport cmd_eval(const RunConfig& config);
std::vector<SweepRow> cmd_sweep(const RunConfig& config);

/// Full command-line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sspsc::cli
