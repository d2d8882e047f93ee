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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sspsc/data_model.hpp"
#include "sspsc/normalize.hpp"

namespace sspsc {

/// Tabular data as stored on disk: header "label,f0,...,f{m-1}", one row per
/// point, label an integer or empty (unlabeled). Labeled rows come first.
struct CsvData {
  Matrix features;
  std::vector<int> labels;  // labels of the leading labeled rows
};

/// Throws ValidationError with the 1-based line number on malformed input.
CsvData parse_csv(std::string_view text, const std::string& origin = "<input>");
CsvData read_csv(const std::filesystem::path& path);
/// labels.size() may be less than features.rows(); the rest are written unlabeled.
std::string format_csv(const Matrix& features, const std::vector<int>& labels);

/// printf-style %.17g; round-trips exactly.
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames it over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

inline constexpr int kModelFormatVersion = 1;

/// A trained model plus everything needed to apply and reproduce it.
struct SavedModel {
  ModelState state;
  Hyperparams hp;
  std::optional<Normalizer> normalizer;
};

/// Line-oriented text format: "sspsc-model", a format_version line, one line
/// per hyperparameter, a dims line "m r n1", the optional normalization
/// vectors, then theta (r rows) and the w, phi, varphi, u, v, pi vectors. All
/// reals at 17 significant digits.
std::string serialize_model(const SavedModel& model);
SavedModel parse_model(std::string_view text);

SavedModel load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const SavedModel& model);

}  // namespace sspsc
