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
#include "sspsc/io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "sspsc/errors.hpp"

namespace sspsc {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<long long> to_integer(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// Reads the model format one "key values..." line at a time.
class ModelReader {
 public:
  explicit ModelReader(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      const std::string_view line = trim(text.substr(start, end - start));
      if (!line.empty()) lines_.push_back(line);
      start = end + 1;
    }
  }

  std::vector<std::string_view> expect(std::string_view key) {
    if (next_ >= lines_.size()) fail("unexpected end of model file, expected '" + std::string(key) + "'");
    std::vector<std::string_view> tokens;
    for (std::string_view tok : split(lines_[next_], ' ')) {
      if (!tok.empty()) tokens.push_back(tok);
    }
    if (tokens.empty() || tokens.front() != key) {
      fail("expected '" + std::string(key) + "' at model line " + std::to_string(next_ + 1));
    }
    ++next_;
    tokens.erase(tokens.begin());
    return tokens;
  }

  double real(std::string_view key) {
    const auto tokens = expect(key);
    if (tokens.size() != 1) fail("'" + std::string(key) + "' takes one value");
    return parse_real(tokens[0], key);
  }

  long long integer(std::string_view key) {
    const auto tokens = expect(key);
    const auto v = tokens.size() == 1 ? to_integer(tokens[0]) : std::nullopt;
    if (!v) fail("'" + std::string(key) + "' takes one integer");
    return *v;
  }

  std::string word(std::string_view key) {
    const auto tokens = expect(key);
    if (tokens.size() != 1) fail("'" + std::string(key) + "' takes one value");
    return std::string(tokens[0]);
  }

  Vector vector(std::string_view key, Index size) {
    const auto tokens = expect(key);
    if (static_cast<Index>(tokens.size()) != size) {
      fail("'" + std::string(key) + "' needs " + std::to_string(size) + " values");
    }
    Vector v(size);
    for (Index i = 0; i < size; ++i) v(i) = parse_real(tokens[i], key);
    return v;
  }

  void finish() {
    expect("end");
    if (next_ != lines_.size()) fail("trailing content after 'end' in model file");
  }

  [[noreturn]] static void fail(const std::string& msg) { throw ValidationError(msg); }

 private:
  static double parse_real(std::string_view tok, std::string_view key) {
    const auto v = to_double(tok);
    if (!v) fail("bad number '" + std::string(tok) + "' for '" + std::string(key) + "'");
    return *v;
  }

  std::vector<std::string_view> lines_;
  std::size_t next_ = 0;
};

void append_vector(std::string& out, std::string_view key, const Vector& v) {
  out += key;
  for (Index i = 0; i < v.size(); ++i) {
    out += ' ';
    out += format_double(v(i));
  }
  out += '\n';
}

}  // namespace

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

CsvData parse_csv(std::string_view text, const std::string& origin) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  auto fail = [&](std::size_t line, const std::string& msg) -> void {
    throw ValidationError(origin + ":" + std::to_string(line) + ": " + msg);
  };
  if (lines.empty()) fail(1, "missing header");

  std::string_view header = lines[0];
  if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
  const auto columns = split(header, ',');
  if (trim(columns[0]) != "label") fail(1, "first column must be 'label'");
  const Index m = static_cast<Index>(columns.size()) - 1;
  if (m < 1) fail(1, "no feature columns");
  for (Index c = 0; c < m; ++c) {
    if (trim(columns[c + 1]) != "f" + std::to_string(c)) {
      fail(1, "feature column " + std::to_string(c + 1) + " must be named 'f" + std::to_string(c) + "'");
    }
  }

  CsvData data;
  const Index n = static_cast<Index>(lines.size()) - 1;
  data.features.resize(n, m);
  bool seen_unlabeled = false;
  for (Index r = 0; r < n; ++r) {
    const std::size_t line_no = static_cast<std::size_t>(r) + 2;
    const auto cells = split(lines[r + 1], ',');
    if (static_cast<Index>(cells.size()) != m + 1) {
      fail(line_no, "expected " + std::to_string(m + 1) + " fields, found " + std::to_string(cells.size()));
    }
    const std::string_view label = trim(cells[0]);
    if (label.empty()) {
      seen_unlabeled = true;
    } else {
      if (seen_unlabeled) fail(line_no, "labeled row after an unlabeled row; labeled rows must come first");
      const auto y = to_integer(label);
      if (!y || *y < -2147483647 || *y > 2147483647) fail(line_no, "label '" + std::string(label) + "' is not an integer");
      data.labels.push_back(static_cast<int>(*y));
    }
    for (Index c = 0; c < m; ++c) {
      const auto v = to_double(cells[c + 1]);
      if (!v) fail(line_no, "non-numeric feature '" + std::string(trim(cells[c + 1])) + "' in column f" + std::to_string(c));
      if (!std::isfinite(*v)) fail(line_no, "non-finite feature in column f" + std::to_string(c));
      data.features(r, c) = *v;
    }
  }
  return data;
}

CsvData read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path), path.string()); }

std::string format_csv(const Matrix& features, const std::vector<int>& labels) {
  std::string out = "label";
  for (Index c = 0; c < features.cols(); ++c) out += ",f" + std::to_string(c);
  out += '\n';
  for (Index r = 0; r < features.rows(); ++r) {
    if (r < static_cast<Index>(labels.size())) out += std::to_string(labels[r]);
    for (Index c = 0; c < features.cols(); ++c) {
      out += ',';
      out += format_double(features(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw ValidationError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ValidationError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string serialize_model(const SavedModel& model) {
  const ModelState& s = model.state;
  const Hyperparams& hp = model.hp;
  std::string out = "sspsc-model\n";
  out += fmt::format("format_version {}\n", kModelFormatVersion);
  out += fmt::format("loss {}\n", to_string(s.loss));
  out += "c1 " + format_double(hp.c1) + "\n";
  out += "c2 " + format_double(hp.c2) + "\n";
  out += "c3 " + format_double(hp.c3) + "\n";
  out += fmt::format("subspace_dim {}\n", s.theta.rows());
  out += fmt::format("neighbors {}\n", hp.neighbors);
  out += "delta " + format_double(hp.delta) + "\n";
  out += "step " + format_double(hp.step) + "\n";
  out += fmt::format("max_outer_iters {}\n", hp.max_outer_iters);
  out += fmt::format("max_inner_iters {}\n", hp.max_inner_iters);
  out += "tol " + format_double(hp.tol) + "\n";
  out += fmt::format("seed {}\n", hp.seed);
  out += fmt::format("theta_selection {}\n",
                     hp.theta_selection == ThetaSelection::kSmallest ? "smallest" : "largest");
  out += fmt::format("freeze_weights {}\n", hp.freeze_weights ? 1 : 0);
  out += fmt::format("shared_classifier {}\n", hp.shared_classifier ? 1 : 0);
  out += fmt::format("dims {} {} {}\n", s.theta.cols(), s.theta.rows(), s.pi.size());
  out += fmt::format("normalize {}\n", model.normalizer ? 1 : 0);
  if (model.normalizer) {
    append_vector(out, "normalize_mean", model.normalizer->mean);
    append_vector(out, "normalize_scale", model.normalizer->scale);
  }
  out += "theta\n";
  for (Index r = 0; r < s.theta.rows(); ++r) append_vector(out, "row", s.theta.row(r).transpose());
  append_vector(out, "w", s.w);
  append_vector(out, "phi", s.phi);
  append_vector(out, "varphi", s.varphi);
  append_vector(out, "u", s.u);
  append_vector(out, "v", s.v);
  append_vector(out, "pi", s.pi);
  out += "end\n";
  return out;
}

SavedModel parse_model(std::string_view text) {
  ModelReader in(text);
  in.expect("sspsc-model");
  const long long version = in.integer("format_version");
  if (version != kModelFormatVersion) {
    throw ValidationError("unsupported model format_version " + std::to_string(version));
  }
  SavedModel model;
  Hyperparams& hp = model.hp;
  hp.loss = parse_loss_kind(in.word("loss"));
  hp.c1 = in.real("c1");
  hp.c2 = in.real("c2");
  hp.c3 = in.real("c3");
  hp.subspace_dim = static_cast<int>(in.integer("subspace_dim"));
  hp.neighbors = static_cast<int>(in.integer("neighbors"));
  hp.delta = in.real("delta");
  hp.step = in.real("step");
  hp.max_outer_iters = static_cast<int>(in.integer("max_outer_iters"));
  hp.max_inner_iters = static_cast<int>(in.integer("max_inner_iters"));
  hp.tol = in.real("tol");
  const long long seed = in.integer("seed");
  if (seed < 0) throw ValidationError("seed must be nonnegative");
  hp.seed = static_cast<std::uint64_t>(seed);
  const std::string selection = in.word("theta_selection");
  if (selection == "smallest") {
    hp.theta_selection = ThetaSelection::kSmallest;
  } else if (selection == "largest") {
    hp.theta_selection = ThetaSelection::kLargest;
  } else {
    throw ValidationError("unknown theta_selection '" + selection + "'");
  }
  hp.freeze_weights = in.integer("freeze_weights") != 0;
  hp.shared_classifier = in.integer("shared_classifier") != 0;

  const auto dims = in.expect("dims");
  std::optional<long long> m, r, n1;
  if (dims.size() == 3) {
    m = to_integer(dims[0]);
    r = to_integer(dims[1]);
    n1 = to_integer(dims[2]);
  }
  if (!m || !r || !n1 || *m < 1 || *r < 1 || *n1 < 1 || *r != *hp.subspace_dim) {
    throw ValidationError("bad 'dims' line in model file");
  }
  if (in.integer("normalize") != 0) {
    Normalizer norm;
    norm.mean = in.vector("normalize_mean", *m);
    norm.scale = in.vector("normalize_scale", *m);
    if ((norm.scale.array() <= 0.0).any()) throw ValidationError("normalization scale must be positive");
    model.normalizer = std::move(norm);
  }
  ModelState& s = model.state;
  s.loss = hp.loss;
  in.expect("theta");
  s.theta.resize(*r, *m);
  for (long long row = 0; row < *r; ++row) s.theta.row(row) = in.vector("row", *m).transpose();
  s.w = in.vector("w", *r);
  s.phi = in.vector("phi", *m);
  s.varphi = in.vector("varphi", *m);
  s.u = in.vector("u", *m);
  s.v = in.vector("v", *m);
  s.pi = in.vector("pi", *n1);
  in.finish();
  validate_hyperparams(hp);
  check_model_state(s, hp.delta);
  return model;
}

SavedModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

void save_model(const std::filesystem::path& path, const SavedModel& model) {
  write_file_atomic(path, serialize_model(model));
}

}  // namespace sspsc
