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
#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <set>

#include "sspsc/classifier.hpp"
#include "sspsc/errors.hpp"
#include "sspsc/io.hpp"
#include "sspsc/normalize.hpp"

namespace sspsc::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kConfigKeys = {
    "c1",        "c2",           "c3",          "subspace_dim", "neighbors",       "delta",
    "step",      "loss",         "max_iters",   "max_inner_iters", "tol",          "seed",
    "theta_selection", "freeze_weights", "shared_classifier", "source", "target",  "model",
    "trace",     "report",       "folds",       "label_budget", "normalize",       "sweep_param",
    "grid"};

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config field '") + key + "' has the wrong type");
  }
}

DatasetPair load_pair(const RunConfig& c) {
  if (c.source.empty() || c.target.empty()) throw ValidationError("source and target CSV paths are required");
  const CsvData s = read_csv(c.source);
  const CsvData t = read_csv(c.target);
  return DatasetPair{s.features, s.labels, t.features, t.labels};
}

LabeledSet load_set(const std::string& path) {
  const CsvData d = read_csv(path);
  return LabeledSet{d.features, d.labels};
}

CvOptions cv_options(const RunConfig& c) {
  CvOptions opts;
  opts.folds = c.folds;
  opts.seed = c.hp.seed;
  opts.label_budget = c.label_budget;
  opts.normalize = c.normalize;
  return opts;
}

double& sweep_target(Hyperparams& hp, const std::string& param) {
  if (param == "c1") return hp.c1;
  if (param == "c2") return hp.c2;
  if (param == "c3") return hp.c3;
  throw ValidationError("sweep parameter must be one of c1, c2, c3, got '" + param + "'");
}

}  // namespace

void to_json(json& j, const RunConfig& c) {
  const Hyperparams& hp = c.hp;
  j = json{{"c1", hp.c1},
           {"c2", hp.c2},
           {"c3", hp.c3},
           {"neighbors", hp.neighbors},
           {"delta", hp.delta},
           {"step", hp.step},
           {"loss", std::string(to_string(hp.loss))},
           {"max_iters", hp.max_outer_iters},
           {"max_inner_iters", hp.max_inner_iters},
           {"tol", hp.tol},
           {"seed", hp.seed},
           {"theta_selection", hp.theta_selection == ThetaSelection::kSmallest ? "smallest" : "largest"},
           {"freeze_weights", hp.freeze_weights},
           {"shared_classifier", hp.shared_classifier},
           {"source", c.source},
           {"target", c.target},
           {"model", c.model},
           {"trace", c.trace},
           {"report", c.report},
           {"folds", c.folds},
           {"normalize", c.normalize},
           {"sweep_param", c.sweep_param},
           {"grid", c.grid}};
  j["subspace_dim"] = hp.subspace_dim ? json(*hp.subspace_dim) : json(nullptr);
  j["label_budget"] = c.label_budget ? json(*c.label_budget) : json(nullptr);
}

void from_json(const json& j, RunConfig& c) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& item : j.items()) {
    if (!kConfigKeys.count(item.key())) throw ValidationError("unknown config field '" + item.key() + "'");
  }
  Hyperparams& hp = c.hp;
  read_field(j, "c1", hp.c1);
  read_field(j, "c2", hp.c2);
  read_field(j, "c3", hp.c3);
  if (j.contains("subspace_dim") && !j.at("subspace_dim").is_null()) {
    int r = 0;
    read_field(j, "subspace_dim", r);
    hp.subspace_dim = r;
  }
  read_field(j, "neighbors", hp.neighbors);
  read_field(j, "delta", hp.delta);
  read_field(j, "step", hp.step);
  if (j.contains("loss")) {
    std::string loss;
    read_field(j, "loss", loss);
    hp.loss = parse_loss_kind(loss);
  }
  read_field(j, "max_iters", hp.max_outer_iters);
  read_field(j, "max_inner_iters", hp.max_inner_iters);
  read_field(j, "tol", hp.tol);
  read_field(j, "seed", hp.seed);
  if (j.contains("theta_selection")) {
    std::string sel;
    read_field(j, "theta_selection", sel);
    if (sel == "smallest") {
      hp.theta_selection = ThetaSelection::kSmallest;
    } else if (sel == "largest") {
      hp.theta_selection = ThetaSelection::kLargest;
    } else {
      throw ValidationError("theta_selection must be 'smallest' or 'largest'");
    }
  }
  read_field(j, "freeze_weights", hp.freeze_weights);
  read_field(j, "shared_classifier", hp.shared_classifier);
  read_field(j, "source", c.source);
  read_field(j, "target", c.target);
  read_field(j, "model", c.model);
  read_field(j, "trace", c.trace);
  read_field(j, "report", c.report);
  read_field(j, "folds", c.folds);
  if (j.contains("label_budget") && !j.at("label_budget").is_null()) {
    std::size_t budget = 0;
    read_field(j, "label_budget", budget);
    c.label_budget = budget;
  }
  read_field(j, "normalize", c.normalize);
  read_field(j, "sweep_param", c.sweep_param);
  read_field(j, "grid", c.grid);
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  return j.get<RunConfig>();
}

std::string format_config(const RunConfig& c) { return json(c).dump(2) + "\n"; }

json trace_to_json(const TrainingTrace& trace) {
  json iterations = json::array();
  for (const IterationRecord& r : trace.iterations) {
    iterations.push_back({{"iteration", r.iteration},
                          {"objective", r.objective},
                          {"objective_after_subspace", r.objective_after_subspace},
                          {"objective_after_classifier", r.objective_after_classifier},
                          {"matching", r.matching},
                          {"q_value", r.q_value},
                          {"classifier_steps", r.classifier_steps},
                          {"qp_steps", r.qp_steps},
                          {"pi_min", r.pi_min},
                          {"pi_max", r.pi_max},
                          {"orthonormality_error", r.diagnostics.orthonormality_error},
                          {"pi_sum_error", r.diagnostics.pi_sum_error}});
  }
  return {{"initial_objective", trace.initial_objective},
          {"iterations_run", trace.iterations_run()},
          {"stop_reason", std::string(to_string(trace.stop_reason))},
          {"iterations", iterations}};
}

json report_to_json(const CvReport& report, const RunConfig& config) {
  json folds = json::array();
  for (std::size_t f = 0; f < report.plan.size(); ++f) {
    folds.push_back({{"accuracy", report.fold_accuracy[f]},
                     {"seconds", report.fold_seconds[f]},
                     {"test", report.plan[f].test},
                     {"labeled", report.plan[f].labeled}});
  }
  return {{"mean", report.mean},
          {"stddev", report.stddev},
          {"seed", report.seed},
          {"strategy", report.strategy},
          {"folds", folds},
          {"config", json(config)}};
}

std::string format_sweep(const std::string& param, const std::vector<SweepRow>& rows) {
  std::string out = "param,value,mean,stddev,c1,c2,c3\n";
  for (const SweepRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", param, format_double(r.value), format_double(r.mean),
                       format_double(r.stddev), format_double(r.hp.c1), format_double(r.hp.c2),
                       format_double(r.hp.c3));
  }
  return out;
}

void cmd_synth(const SynthConfig& config, const std::string& out_dir) {
  const SynthData data = generate_synthetic(config);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ValidationError("cannot create " + out_dir + ": " + ec.message());
  const std::filesystem::path dir(out_dir);
  std::vector<int> prefix(data.target.labels.begin(), data.target.labels.begin() + data.n3);
  write_file_atomic(dir / "source.csv", format_csv(data.source.features, data.source.labels));
  write_file_atomic(dir / "target.csv", format_csv(data.target.features, prefix));
  write_file_atomic(dir / "target_full.csv", format_csv(data.target.features, data.target.labels));
}

TrainingTrace cmd_train(const RunConfig& config) {
  if (config.model.empty()) throw ValidationError("a model output path is required");
  DatasetPair pair = load_pair(config);
  SavedModel saved;
  if (config.normalize) {
    const Normalizer norm = Normalizer::fit(pair.source_features, pair.target_features);
    pair.source_features = norm.apply(pair.source_features);
    pair.target_features = norm.apply(pair.target_features);
    saved.normalizer = norm;
  }
  FitResult result = fit(pair, config.hp);
  saved.state = std::move(result.model);
  saved.hp = config.hp;
  saved.hp.subspace_dim = static_cast<int>(saved.state.theta.rows());
  const std::string trace_path = config.trace.empty() ? config.model + ".trace.json" : config.trace;
  save_model(config.model, saved);
  write_file_atomic(trace_path, trace_to_json(result.trace).dump(2) + "\n");
  return result.trace;
}

void cmd_predict(const std::string& model_path, const std::string& input_csv, const std::string& out_csv) {
  const SavedModel model = load_model(model_path);
  const CsvData input = read_csv(input_csv);
  const Matrix x = model.normalizer ? model.normalizer->apply(input.features) : input.features;
  std::string out = "score,label\n";
  for (Index r = 0; r < x.rows(); ++r) {
    const Prediction p = predict_target(model.state.varphi, x.row(r).transpose());
    out += fmt::format("{},{}\n", format_double(p.score), p.label);
  }
  write_file_atomic(out_csv, out);
}

CvReport cmd_eval(const RunConfig& config) {
  if (config.source.empty() || config.target.empty()) throw ValidationError("source and target CSV paths are required");
  const CvReport report = run_cv(load_set(config.source), load_set(config.target), config.hp, cv_options(config));
  if (!config.report.empty()) write_file_atomic(config.report, report_to_json(report, config).dump(2) + "\n");
  return report;
}

std::vector<SweepRow> cmd_sweep(const RunConfig& config) {
  if (config.grid.empty()) throw ValidationError("sweep grid is empty");
  Hyperparams probe = config.hp;
  sweep_target(probe, config.sweep_param);
  const LabeledSet source = load_set(config.source);
  const LabeledSet target = load_set(config.target);
  std::vector<SweepRow> rows;
  for (double value : config.grid) {
    SweepRow row;
    row.value = value;
    row.hp = config.hp;
    sweep_target(row.hp, config.sweep_param) = value;
    const CvReport report = run_cv(source, target, row.hp, cv_options(config));
    row.mean = report.mean;
    row.stddev = report.stddev;
    rows.push_back(row);
  }
  if (!config.report.empty()) write_file_atomic(config.report, format_sweep(config.sweep_param, rows));
  return rows;
}

namespace {

struct HyperparamFlags {
  std::vector<CLI::Option*> options;
  std::optional<double> c1, c2, c3, delta, step, tol;
  std::optional<int> subspace_dim, neighbors, max_iters, max_inner_iters, folds;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> loss;
  std::optional<std::size_t> label_budget;
  bool normalize = false;

  void attach(CLI::App* app, bool with_cv) {
    options.push_back(app->add_option("--c1", c1, "adaptation regularizer weight"));
    options.push_back(app->add_option("--c2", c2, "neighborhood reconstruction weight"));
    options.push_back(app->add_option("--c3", c3, "distribution matching weight"));
    options.push_back(app->add_option("--subspace-dim", subspace_dim, "subspace dimension r"));
    options.push_back(app->add_option("--neighbors", neighbors, "neighbor count k"));
    options.push_back(app->add_option("--delta", delta, "upper bound on source weights"));
    options.push_back(app->add_option("--step", step, "descent step"));
    options.push_back(app->add_option("--loss", loss, "hinge, logistic or exponential")
                          ->check(CLI::IsMember({"hinge", "logistic", "exponential"})));
    options.push_back(app->add_option("--max-iters", max_iters, "outer iteration limit"));
    options.push_back(app->add_option("--max-inner-iters", max_inner_iters, "classifier descent steps per iteration"));
    options.push_back(app->add_option("--tol", tol, "relative objective change for convergence"));
    options.push_back(app->add_option("--seed", seed, "random seed"));
    options.push_back(app->add_flag("--normalize", normalize, "z-score features"));
    if (with_cv) {
      options.push_back(app->add_option("--folds", folds, "cross-validation folds"));
      options.push_back(app->add_option("--label-budget", label_budget, "labeled target points per training fold"));
    }
  }

  bool any_given() const {
    for (const CLI::Option* o : options) {
      if (o->count() > 0) return true;
    }
    return false;
  }

  void apply(RunConfig& c) const {
    if (c1) c.hp.c1 = *c1;
    if (c2) c.hp.c2 = *c2;
    if (c3) c.hp.c3 = *c3;
    if (subspace_dim) c.hp.subspace_dim = *subspace_dim;
    if (neighbors) c.hp.neighbors = *neighbors;
    if (delta) c.hp.delta = *delta;
    if (step) c.hp.step = *step;
    if (loss) c.hp.loss = parse_loss_kind(*loss);
    if (max_iters) c.hp.max_outer_iters = *max_iters;
    if (max_inner_iters) c.hp.max_inner_iters = *max_inner_iters;
    if (tol) c.hp.tol = *tol;
    if (seed) c.hp.seed = *seed;
    if (folds) c.folds = *folds;
    if (label_budget) c.label_budget = *label_budget;
    if (normalize) c.normalize = true;
  }
};

struct PathFlags {
  std::optional<std::string> source, target, model, trace, report;
};

RunConfig resolve(const std::string& config_path, const HyperparamFlags& flags, const PathFlags& paths) {
  RunConfig c;
  if (!config_path.empty()) {
    if (flags.any_given()) {
      throw ValidationError("give either --config or hyperparameter flags, not both");
    }
    c = parse_config(read_file(config_path));
  }
  flags.apply(c);
  if (paths.source) c.source = *paths.source;
  if (paths.target) c.target = *paths.target;
  if (paths.model) c.model = *paths.model;
  if (paths.trace) c.trace = *paths.trace;
  if (paths.report) c.report = *paths.report;
  validate_hyperparams(c.hp);
  return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shared subspace transfer learning with partially shared classifiers", "sspsc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sspsc 1.0.0");

  SynthConfig synth;
  std::string synth_dir;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic source/target pair");
  synth_cmd->add_option("--seed", synth.seed, "generator seed")->capture_default_str();
  synth_cmd->add_option("--n1", synth.n1, "source points")->capture_default_str();
  synth_cmd->add_option("--n2", synth.n2, "target points")->capture_default_str();
  synth_cmd->add_option("--n3", synth.n3, "labeled target points")->capture_default_str();
  synth_cmd->add_option("--m", synth.m, "feature dimension")->capture_default_str();
  synth_cmd->add_option("--shift", synth.shift, "target translation")->capture_default_str();
  synth_cmd->add_option("--rot-deg", synth.rot_deg, "target rotation in degrees")->capture_default_str();
  synth_cmd->add_option("--out-dir", synth_dir, "output directory")->required();

  std::string train_config;
  HyperparamFlags train_flags;
  PathFlags train_paths;
  CLI::App* train_cmd = app.add_subcommand("train", "fit a model and write it with its training trace");
  train_cmd->add_option("--config", train_config, "JSON run configuration");
  train_cmd->add_option("--source", train_paths.source, "source CSV");
  train_cmd->add_option("--target", train_paths.target, "target CSV, labeled rows first");
  train_cmd->add_option("--model", train_paths.model, "model output path");
  train_cmd->add_option("--trace", train_paths.trace, "trace output path (default <model>.trace.json)");
  train_flags.attach(train_cmd, false);

  std::string predict_model, predict_input, predict_out;
  CLI::App* predict_cmd = app.add_subcommand("predict", "score target rows with a trained model");
  predict_cmd->add_option("--model", predict_model, "model file")->required();
  predict_cmd->add_option("--input", predict_input, "input CSV")->required();
  predict_cmd->add_option("--out", predict_out, "predictions CSV")->required();

  std::string eval_config;
  HyperparamFlags eval_flags;
  PathFlags eval_paths;
  CLI::App* eval_cmd = app.add_subcommand("eval", "cross-validate on a fully labeled target set");
  eval_cmd->add_option("--config", eval_config, "JSON run configuration");
  eval_cmd->add_option("--source", eval_paths.source, "source CSV");
  eval_cmd->add_option("--target", eval_paths.target, "fully labeled target CSV");
  eval_cmd->add_option("--report", eval_paths.report, "JSON report output path");
  eval_flags.attach(eval_cmd, true);

  std::string sweep_config, sweep_param;
  std::vector<double> sweep_grid;
  HyperparamFlags sweep_flags;
  PathFlags sweep_paths;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "cross-validate over a grid of one term weight");
  sweep_cmd->add_option("--config", sweep_config, "JSON run configuration");
  sweep_cmd->add_option("--source", sweep_paths.source, "source CSV");
  sweep_cmd->add_option("--target", sweep_paths.target, "fully labeled target CSV");
  sweep_cmd->add_option("--report", sweep_paths.report, "CSV report output path");
  sweep_cmd->add_option("--param", sweep_param, "c1, c2 or c3");
  sweep_cmd->add_option("--grid", sweep_grid, "comma-separated values")->delimiter(',');
  sweep_flags.attach(sweep_cmd, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "sspsc 1.0.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) {
      cmd_synth(synth, synth_dir);
      out << "wrote " << synth_dir << "/source.csv, target.csv, target_full.csv\n";
    } else if (train_cmd->parsed()) {
      const RunConfig c = resolve(train_config, train_flags, train_paths);
      const TrainingTrace trace = cmd_train(c);
      out << fmt::format("trained in {} iterations ({}), objective {}\n", trace.iterations_run(),
                         to_string(trace.stop_reason),
                         format_double(trace.iterations.empty() ? trace.initial_objective
                                                                : trace.iterations.back().objective));
    } else if (predict_cmd->parsed()) {
      cmd_predict(predict_model, predict_input, predict_out);
      out << "wrote " << predict_out << "\n";
    } else if (eval_cmd->parsed()) {
      const RunConfig c = resolve(eval_config, eval_flags, eval_paths);
      const CvReport report = cmd_eval(c);
      out << fmt::format("accuracy {:.4f} +/- {:.4f} over {} folds\n", report.mean, report.stddev,
                         report.fold_accuracy.size());
    } else if (sweep_cmd->parsed()) {
      RunConfig c = resolve(sweep_config, sweep_flags, sweep_paths);
      if (!sweep_param.empty()) c.sweep_param = sweep_param;
      if (sweep_cmd->count("--grid") > 0) c.grid = sweep_grid;
      const std::vector<SweepRow> rows = cmd_sweep(c);
      if (c.report.empty()) out << format_sweep(c.sweep_param, rows);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace sspsc::cli
