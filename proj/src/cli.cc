/*
 * Copyright 2026 The vaelime Authors.
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

#include "vaelime/cli.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "vaelime/blackbox.h"
#include "vaelime/dataio.h"
#include "vaelime/errors.h"
#include "vaelime/serialize.h"
#include "vaelime/surrogate.h"
#include "vaelime/vae.h"

namespace vaelime {

using nlohmann::json;

namespace {

// One CLI option that can also be supplied through --config. Keys in the
// config file are the flag names without leading dashes.
struct Binding {
  std::string key;
  CLI::Option* option = nullptr;
  std::function<void(const json&)> assign;
  std::function<json()> value;
};

class Options {
 public:
  explicit Options(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_,
                     "JSON file of option values; flags take precedence");
  }

  template <typename T>
  CLI::Option* Add(const std::string& key, T& var, const std::string& help) {
    auto* opt = app_->add_option("--" + key, var, help)->capture_default_str();
    bindings_.push_back({key, opt, [&var](const json& j) { var = j.get<T>(); },
                         [&var] { return json(var); }});
    return opt;
  }

  CLI::Option* Flag(const std::string& key, bool& var, const std::string& help) {
    auto* opt = app_->add_flag("--" + key, var, help);
    bindings_.push_back({key, opt, [&var](const json& j) { var = j.get<bool>(); },
                         [&var] { return json(var); }});
    return opt;
  }

  // Fills options absent from the command line from --config and returns
  // the fully resolved configuration.
  json Resolve() const {
    if (!config_path_.empty()) {
      const json config = ReadJsonFile(config_path_);
      if (!config.is_object()) {
        throw ConfigError("config '" + config_path_ + "' must be a JSON object");
      }
      for (const auto& [key, value] : config.items()) {
        const auto it = std::find_if(bindings_.begin(), bindings_.end(),
                                     [&](const Binding& b) { return b.key == key; });
        if (it == bindings_.end()) {
          throw ConfigError("unknown config key '" + key + "' for " +
                            app_->get_name());
        }
        if (it->option->count() > 0) continue;
        try {
          it->assign(value);
        } catch (const json::exception& e) {
          throw ConfigError("config key '" + key + "': " + e.what());
        }
      }
    }
    json resolved = json::object();
    for (const auto& b : bindings_) resolved[b.key] = b.value();
    return resolved;
  }

 private:
  CLI::App* app_;
  std::string config_path_;
  std::vector<Binding> bindings_;
};

void RequireFile(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError(what + " path is required");
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw ConfigError(what + " file '" + path + "' does not exist");
  }
}

void RequireWritable(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError(what + " path is required");
  const auto parent = std::filesystem::absolute(path).parent_path();
  std::error_code ec;
  if (!std::filesystem::is_directory(parent, ec)) {
    throw ConfigError(what + " directory '" + parent.string() +
                      "' does not exist");
  }
}

json Provenance(const json& config, std::uint64_t seed) {
  return {{"tool_version", kToolVersion}, {"config", config}, {"seed", seed}};
}

std::string ReplaceExtension(const std::string& path, const std::string& ext) {
  return std::filesystem::path(path).replace_extension(ext).string();
}

std::string Num(double v) {
  return std::isfinite(v) ? FormatDouble(v) : std::string("nan");
}

double Median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

json JsonNumber(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------- gen-data

struct GenDataArgs {
  std::string out;
  std::uint64_t seed = 0;
  std::size_t rows = 5000;
  std::size_t features = 12;
  std::size_t rank = 3;
  double rho = 0.9;
  double noise_std = 0.1;
  double target_noise_std = 0.05;
  std::uint64_t mixing_seed = 7;
  bool linear_target = false;
};

void RegisterGenData(Options& o, GenDataArgs& a) {
  o.Add("out", a.out, "output CSV path");
  o.Add("seed", a.seed, "random seed");
  o.Add("rows", a.rows, "number of observations T");
  o.Add("features", a.features, "number of features d");
  o.Add("rank", a.rank, "latent factor rank k");
  o.Add("rho", a.rho, "AR(1) coefficient of the factors, in [0, 1)");
  o.Add("noise-std", a.noise_std, "feature noise std");
  o.Add("target-noise-std", a.target_noise_std, "target noise std");
  o.Add("mixing-seed", a.mixing_seed, "seed of the factor mixing matrix");
  o.Flag("linear-target", a.linear_target,
         "drop the nonlinear terms from the target function");
}

int CmdGenData(const GenDataArgs& a, const json& config, std::ostream& out) {
  RequireWritable(a.out, "output");
  SynthConfig sc;
  sc.n_rows = a.rows;
  sc.n_features = a.features;
  sc.latent_rank = a.rank;
  sc.ar_coefficient = a.rho;
  sc.noise_std = a.noise_std;
  sc.target_noise_std = a.target_noise_std;
  sc.mixing_seed = a.mixing_seed;
  if (a.linear_target) {
    if (a.features < 5) throw ConfigError("the target needs at least 5 features");
    sc.target = LinearAnalyticSpec(a.features);
  }
  sc.Validate();
  const Dataset ds = Generate(sc, a.seed);
  WriteCsv(ds, a.out);
  const std::string meta = a.out + ".meta.json";
  WriteJsonFile({{"provenance", Provenance(config, a.seed)},
                 {"rows", ds.size()},
                 {"features", ds.feature_names()}},
                meta);
  out << "wrote " << ds.size() << " rows to " << a.out << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- train-vae

struct TrainVaeArgs {
  std::string data;
  std::string out;
  std::string history;
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  std::size_t hidden = 16;
  std::size_t latent_dim = 0;
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  double kl_weight = 0.1;
  double learning_rate = 1e-3;
};

void RegisterTrainVae(Options& o, TrainVaeArgs& a) {
  o.Add("data", a.data, "input CSV");
  o.Add("out", a.out, "output model JSON");
  o.Add("history", a.history, "loss history CSV (default <out>.history.csv)");
  o.Add("seed", a.seed, "random seed");
  o.Add("train-fraction", a.train_fraction,
        "leading fraction of rows used for training");
  o.Add("hidden", a.hidden, "hidden layer width");
  o.Add("latent-dim", a.latent_dim, "latent dimension (0: max(2, ceil(d/4)))");
  o.Add("epochs", a.epochs, "training epochs");
  o.Add("batch-size", a.batch_size, "mini-batch size");
  o.Add("kl-weight", a.kl_weight, "weight of the KL term");
  o.Add("learning-rate", a.learning_rate, "optimizer learning rate");
}

int CmdTrainVae(const TrainVaeArgs& a, const json& config, std::ostream& out) {
  RequireFile(a.data, "data");
  RequireWritable(a.out, "output");
  const std::string history =
      a.history.empty() ? ReplaceExtension(a.out, ".history.csv") : a.history;
  RequireWritable(history, "history");
  const Dataset data = LoadCsv(a.data);
  const Dataset train = Split(data, a.train_fraction, a.seed).first;
  VaeTrainConfig vc;
  vc.hidden_width = a.hidden;
  vc.latent_dim = a.latent_dim;
  vc.epochs = a.epochs;
  vc.batch_size = a.batch_size;
  vc.kl_weight = a.kl_weight;
  vc.learning_rate = a.learning_rate;
  vc.seed = a.seed;
  const VaeModel model = TrainVae(train, vc);

  json doc = VaeToJson(model);
  doc["provenance"] = Provenance(config, a.seed);
  WriteJsonFile(doc, a.out);

  std::ofstream hist(history, std::ios::binary | std::ios::trunc);
  hist << "epoch,total,recon,kl\n";
  for (std::size_t e = 0; e < model.history.size(); ++e) {
    const auto& h = model.history[e];
    hist << e + 1 << ',' << Num(h.total) << ',' << Num(h.recon) << ','
         << Num(h.kl) << '\n';
  }
  if (!hist) throw Error("failed writing '" + history + "'");
  out << "trained VAE (latent_dim " << model.latent_dim << ") on "
      << train.size() << " rows; final loss " << model.history.back().total
      << "\n";
  return kExitOk;
}

// ---------------------------------------------------------- train-blackbox

struct TrainBlackBoxArgs {
  std::string data;
  std::string out;
  std::string metrics;
  std::string target = kTargetColumn;
  std::string kind = "mlp";
  bool linear = false;
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  std::size_t hidden1 = 32;
  std::size_t hidden2 = 16;
  std::size_t epochs = 150;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
};

void RegisterTrainBlackBox(Options& o, TrainBlackBoxArgs& a) {
  o.Add("data", a.data, "input CSV");
  o.Add("out", a.out, "output model JSON");
  o.Add("metrics", a.metrics, "holdout metrics JSON (default <out>.metrics.json)");
  o.Add("target", a.target, "target column name");
  o.Add("kind", a.kind, "mlp or analytic")
      ->check(CLI::IsMember({"mlp", "analytic"}));
  o.Flag("linear", a.linear, "analytic kind: keep only the linear terms");
  o.Add("seed", a.seed, "random seed");
  o.Add("train-fraction", a.train_fraction,
        "leading fraction of rows used for training");
  o.Add("hidden1", a.hidden1, "first hidden layer width");
  o.Add("hidden2", a.hidden2, "second hidden layer width");
  o.Add("epochs", a.epochs, "training epochs");
  o.Add("batch-size", a.batch_size, "mini-batch size");
  o.Add("learning-rate", a.learning_rate, "optimizer learning rate");
}

int CmdTrainBlackBox(const TrainBlackBoxArgs& a, const json& config,
                     std::ostream& out) {
  RequireFile(a.data, "data");
  RequireWritable(a.out, "output");
  const std::string metrics_path =
      a.metrics.empty() ? ReplaceExtension(a.out, ".metrics.json") : a.metrics;
  RequireWritable(metrics_path, "metrics");
  if (a.kind != "mlp" && a.kind != "analytic") {
    throw ConfigError("kind must be mlp or analytic");
  }
  const Dataset data = LoadCsv(a.data, a.target);
  if (a.kind == "mlp" && !data.target()) {
    throw ConfigError("target column '" + a.target + "' not found in '" +
                      a.data + "'");
  }
  const auto [train, test] = Split(data, a.train_fraction, a.seed);

  json metrics = {{"provenance", Provenance(config, a.seed)}, {"kind", a.kind}};
  std::optional<BlackBox> model;
  if (a.kind == "analytic") {
    model.emplace(a.linear ? LinearAnalyticSpec(data.dim())
                           : DefaultAnalyticSpec(data.dim()));
  } else {
    MlpTrainConfig mc;
    mc.hidden1 = a.hidden1;
    mc.hidden2 = a.hidden2;
    mc.epochs = a.epochs;
    mc.batch_size = a.batch_size;
    mc.learning_rate = a.learning_rate;
    const MlpTrainResult r = TrainMlpRegressor(train, mc, a.seed);
    model.emplace(r.model);
    metrics["holdout_mse"] = r.holdout_mse;
    metrics["holdout_r2"] = r.holdout_r2;
    metrics["holdout_target_variance"] = r.holdout_target_variance;
    metrics["final_train_loss"] = r.loss_history.back();
  }
  if (data.target() && test.size() > 0) {
    double sse = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      const double e = model->Predict(test.rows().row(i)) - (*test.target())[i];
      sse += e * e;
    }
    metrics["test_mse"] = sse / static_cast<double>(test.size());
    metrics["test_rows"] = test.size();
  }

  json doc = BlackBoxToJson(*model);
  doc["provenance"] = Provenance(config, a.seed);
  WriteJsonFile(doc, a.out);
  WriteJsonFile(metrics, metrics_path);
  out << "wrote " << a.kind << " black box to " << a.out << "\n";
  return kExitOk;
}

// ----------------------------------------------------- explain / benchmark

struct ExplainArgs {
  std::string method = "vae-lime";
  std::string vae;
  std::string blackbox;
  std::string data;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t row = 0;
  std::size_t n = kDefaultSamples;
  double sigma_scale = kDefaultSigmaScale;
  double kappa = 0.0;
  double lambda = kDefaultRidge;
  std::size_t top_k = kDefaultTopK;
  double train_fraction = 0.8;
  std::size_t threads = 1;
};

void RegisterSharedExplain(Options& o, ExplainArgs& a) {
  o.Add("vae", a.vae, "trained VAE model JSON (required for vae-lime)");
  o.Add("blackbox", a.blackbox, "black-box model JSON");
  o.Add("data", a.data, "CSV holding the instances to explain");
  o.Add("seed", a.seed, "base seed; instance i uses seed + i");
  o.Add("n", a.n, "perturbation samples per explanation");
  o.Add("sigma-scale", a.sigma_scale,
        "latent sampling std as a multiple of the training latent spread");
  o.Add("kappa", a.kappa, "LIME kernel width (0: 0.75 sqrt(d))");
  o.Add("lambda", a.lambda, "surrogate ridge penalty");
  o.Add("train-fraction", a.train_fraction,
        "leading fraction of rows whose stats scale LIME perturbations");
  o.Add("threads", a.threads, "worker threads");
}

void RegisterExplain(Options& o, ExplainArgs& a) {
  RegisterSharedExplain(o, a);
  o.Add("method", a.method, "vae-lime or lime")
      ->check(CLI::IsMember({"vae-lime", "lime"}));
  o.Add("out", a.out, "output explanation JSON (default: stdout)");
  o.Add("row", a.row, "row index in --data to explain");
  o.Add("top-k", a.top_k, "number of ranked features reported");
}

// Everything an explanation run needs, loaded and validated up front.
struct Workspace {
  Dataset data;
  Dataset train;
  Dataset test;
  BlackBox blackbox;
  std::optional<VaeModel> vae;
  Vector stds;
};

Workspace LoadWorkspace(const ExplainArgs& a, bool need_vae) {
  RequireFile(a.data, "data");
  RequireFile(a.blackbox, "black-box");
  if (need_vae) RequireFile(a.vae, "VAE");
  if (a.n < 1) throw ConfigError("--n must be >= 1");
  if (!(a.sigma_scale > 0.0)) throw ConfigError("--sigma-scale must be > 0");
  if (!(a.lambda >= 0.0)) throw ConfigError("--lambda must be >= 0");
  if (a.kappa < 0.0) throw ConfigError("--kappa must be >= 0");
  Dataset data = LoadCsv(a.data);
  auto [train, test] = Split(data, a.train_fraction, a.seed);
  BlackBox blackbox = BlackBoxFromJson(ReadJsonFile(a.blackbox));
  if (blackbox.input_dim() != data.dim()) {
    throw ConfigError("black box expects " + std::to_string(blackbox.input_dim()) +
                      " features, data has " + std::to_string(data.dim()));
  }
  std::optional<VaeModel> vae;
  if (need_vae) {
    vae = VaeFromJson(ReadJsonFile(a.vae));
    if (vae->input_dim != data.dim()) {
      throw ConfigError("VAE expects " + std::to_string(vae->input_dim) +
                        " features, data has " + std::to_string(data.dim()));
    }
  }
  Vector stds = Standardization::Fit(train.means(), train.stds()).stds;
  return {std::move(data), std::move(train), std::move(test), std::move(blackbox),
          std::move(vae), std::move(stds)};
}

ExplainConfig MakeExplainConfig(const ExplainArgs& a, std::size_t instance_id) {
  ExplainConfig ec;
  ec.n_samples = a.n;
  ec.sigma_scale = a.sigma_scale;
  ec.kernel_width = a.kappa;
  ec.ridge_lambda = a.lambda;
  ec.seed = a.seed + instance_id;
  ec.threads = a.threads;
  return ec;
}

json ExplanationToJson(const ExplainResult& r,
                       const std::vector<std::string>& names) {
  const auto& ex = r.explanation;
  json top = json::array();
  for (const auto& f : ex.top_k) {
    top.push_back({{"feature", f.name}, {"index", f.index},
                   {"coefficient", f.coefficient}});
  }
  json coefficients = json::object();
  json standardized = json::object();
  for (std::size_t j = 0; j < names.size(); ++j) {
    coefficients[names[j]] = ex.surrogate.coefficients[j];
    standardized[names[j]] = ex.standardized_coefficients[j];
  }
  return {
      {"method", MethodName(ex.method)},
      {"instance_id", ex.instance_id},
      {"feature_names", names},
      {"top_k", top},
      {"intercept", ex.surrogate.intercept},
      {"coefficients", coefficients},
      {"standardized_coefficients", standardized},
      {"fit_lambda", ex.surrogate.fit_lambda},
      {"condition_hint", ex.surrogate.condition_hint},
      {"fidelity",
       {{"local_mse", ex.fidelity.local_mse},
        {"r2", ex.fidelity.r2},
        {"abs_error_at_x", ex.fidelity.abs_error_at_x}}},
      {"weights_summary",
       {{"min", ex.weights_summary.min},
        {"mean", ex.weights_summary.mean},
        {"max", ex.weights_summary.max}}},
      {"scatter", {{"weights", r.samples.weights},
                   {"predictions", r.samples.outputs}}},
  };
}

int CmdExplain(const ExplainArgs& a, const json& config, std::ostream& out) {
  const Method method = ParseMethod(a.method);
  if (method == Method::kVaeLime && a.vae.empty()) {
    throw ConfigError("--method vae-lime requires --vae");
  }
  if (!a.out.empty()) RequireWritable(a.out, "output");
  const Workspace ws = LoadWorkspace(a, method == Method::kVaeLime);
  if (a.row >= ws.data.size()) {
    throw ConfigError("--row " + std::to_string(a.row) + " is out of range (" +
                      std::to_string(ws.data.size()) + " rows)");
  }
  if (a.top_k < 1) throw ConfigError("--top-k must be >= 1");
  const auto x = ws.data.rows().row(a.row);
  const ExplainResult r = ExplainInstance(
      method, ws.vae ? &*ws.vae : nullptr, ws.blackbox, x, ws.stds,
      ws.data.feature_names(), MakeExplainConfig(a, a.row), a.row, a.top_k);
  json doc = ExplanationToJson(r, ws.data.feature_names());
  doc["blackbox_prediction"] = ws.blackbox.Predict(x);
  doc["provenance"] = Provenance(config, a.seed);
  if (a.out.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    WriteJsonFile(doc, a.out);
  }
  return kExitOk;
}

struct BenchmarkArgs {
  ExplainArgs explain;
  std::string summary;
  std::size_t instances = 50;
  std::string select = "chronological";
  bool timing = false;
};

void RegisterBenchmark(Options& o, BenchmarkArgs& a) {
  RegisterSharedExplain(o, a.explain);
  o.Add("out", a.explain.out, "output benchmark CSV");
  o.Add("summary", a.summary, "summary JSON (default <out>.summary.json)");
  o.Add("instances", a.instances, "number of held-out instances");
  o.Add("select", a.select, "chronological or random instance selection")
      ->check(CLI::IsMember({"chronological", "random"}));
  o.Flag("timing", a.timing,
         "record wall_ms per row (otherwise 0, keeping the CSV reproducible)");
}

struct BenchmarkRow {
  std::size_t instance_id = 0;
  Method method = Method::kVaeLime;
  FidelityReport fidelity;
  double wall_ms = 0.0;
  bool failed = false;
  std::string error;
};

std::vector<std::size_t> SelectInstances(const Workspace& ws,
                                         const BenchmarkArgs& a) {
  const std::size_t offset = ws.train.size();
  const std::size_t available = ws.test.size();
  if (a.instances < 1) throw ConfigError("--instances must be >= 1");
  if (a.instances > available) {
    throw ConfigError("--instances " + std::to_string(a.instances) +
                      " exceeds the " + std::to_string(available) +
                      " held-out rows");
  }
  std::vector<std::size_t> picks(available);
  std::iota(picks.begin(), picks.end(), 0);
  if (a.select == "random") {
    std::mt19937_64 rng(a.explain.seed);
    std::shuffle(picks.begin(), picks.end(), rng);
  } else if (a.select != "chronological") {
    throw ConfigError("--select must be chronological or random");
  }
  picks.resize(a.instances);
  std::sort(picks.begin(), picks.end());
  for (auto& p : picks) p += offset;
  return picks;
}

int CmdBenchmark(const BenchmarkArgs& a, const json& config, std::ostream& out) {
  RequireWritable(a.explain.out, "output");
  const std::string summary_path =
      a.summary.empty() ? ReplaceExtension(a.explain.out, ".summary.json")
                        : a.summary;
  RequireWritable(summary_path, "summary");
  const Workspace ws = LoadWorkspace(a.explain, true);
  const std::vector<std::size_t> ids = SelectInstances(ws, a);

  // Instances run concurrently; the black-box queries inside stay serial.
  ExplainArgs inner = a.explain;
  inner.threads = 1;
  std::vector<BenchmarkRow> rows(2 * ids.size());
  auto run_instance = [&](std::size_t k) {
    const std::size_t id = ids[k];
    const auto x = ws.data.rows().row(id);
    for (int m = 0; m < 2; ++m) {
      BenchmarkRow& row = rows[2 * k + m];
      row.instance_id = id;
      row.method = m == 0 ? Method::kLime : Method::kVaeLime;
      const auto start = std::chrono::steady_clock::now();
      try {
        row.fidelity = ExplainInstance(row.method, &*ws.vae, ws.blackbox, x,
                                       ws.stds, ws.data.feature_names(),
                                       MakeExplainConfig(inner, id), id)
                           .explanation.fidelity;
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
      const std::chrono::duration<double, std::milli> elapsed =
          std::chrono::steady_clock::now() - start;
      row.wall_ms = a.timing ? elapsed.count() : 0.0;
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(a.explain.threads, 1, ids.size());
  if (workers == 1) {
    for (std::size_t k = 0; k < ids.size(); ++k) run_instance(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < ids.size();) run_instance(k);
      });
    }
    for (auto& t : pool) t.join();
  }
  std::sort(rows.begin(), rows.end(), [](const BenchmarkRow& l, const BenchmarkRow& r) {
    if (l.instance_id != r.instance_id) return l.instance_id < r.instance_id;
    return MethodName(l.method) < MethodName(r.method);
  });

  std::ofstream csv(a.explain.out, std::ios::binary | std::ios::trunc);
  csv << "instance_id,method,local_mse,r2,abs_error_at_x,wall_ms\n";
  std::size_t failures = 0;
  for (const auto& r : rows) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    csv << r.instance_id << ',' << MethodName(r.method) << ','
        << Num(r.failed ? nan : r.fidelity.local_mse) << ','
        << Num(r.failed ? nan : r.fidelity.r2) << ','
        << Num(r.failed ? nan : r.fidelity.abs_error_at_x) << ','
        << Num(r.wall_ms) << '\n';
    failures += r.failed;
  }
  csv.flush();
  if (!csv) throw Error("failed writing '" + a.explain.out + "'");

  json methods = json::object();
  for (Method m : {Method::kLime, Method::kVaeLime}) {
    std::vector<double> mse, r2, abs_err, ms;
    for (const auto& r : rows) {
      if (r.method != m || r.failed) continue;
      mse.push_back(r.fidelity.local_mse);
      r2.push_back(r.fidelity.r2);
      abs_err.push_back(r.fidelity.abs_error_at_x);
      ms.push_back(r.wall_ms);
    }
    auto stat = [](const std::vector<double>& v) {
      return json{{"mean", JsonNumber(Mean(v))}, {"median", JsonNumber(Median(v))}};
    };
    methods[MethodName(m)] = {{"completed", mse.size()},
                              {"local_mse", stat(mse)},
                              {"r2", stat(r2)},
                              {"abs_error_at_x", stat(abs_err)},
                              {"wall_ms", stat(ms)}};
  }
  std::size_t compared = 0, mse_wins = 0, r2_wins = 0, abs_wins = 0;
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    const auto& lime = rows[i];
    const auto& vae = rows[i + 1];
    if (lime.failed || vae.failed) continue;
    ++compared;
    mse_wins += vae.fidelity.local_mse < lime.fidelity.local_mse;
    r2_wins += vae.fidelity.r2 > lime.fidelity.r2;
    abs_wins += vae.fidelity.abs_error_at_x < lime.fidelity.abs_error_at_x;
  }
  auto fraction = [&](std::size_t wins) {
    return compared ? static_cast<double>(wins) / static_cast<double>(compared)
                    : 0.0;
  };
  json summary = {{"provenance", Provenance(config, a.explain.seed)},
                  {"instances", ids.size()},
                  {"instance_ids", ids},
                  {"failures", failures},
                  {"methods", methods},
                  {"vae_lime_mse_win_fraction", fraction(mse_wins)},
                  {"vae_lime_r2_win_fraction", fraction(r2_wins)},
                  {"vae_lime_abs_error_win_fraction", fraction(abs_wins)}};
  if (failures) {
    json errs = json::array();
    for (const auto& r : rows) {
      if (r.failed) {
        errs.push_back({{"instance_id", r.instance_id},
                        {"method", MethodName(r.method)},
                        {"error", r.error}});
      }
    }
    summary["errors"] = errs;
  }
  WriteJsonFile(summary, summary_path);
  out << "benchmarked " << ids.size() << " instances; VAE-LIME lower local MSE on "
      << mse_wins << "/" << compared << "\n";
  return failures ? kExitCompute : kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Local explanations of black-box regressors with VAE-LIME and LIME",
               "vaelime"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-data", "generate a synthetic correlated dataset");
  auto* tv = app.add_subcommand("train-vae", "train the perturbation VAE");
  auto* tb = app.add_subcommand("train-blackbox", "train or emit the black box");
  auto* ex = app.add_subcommand("explain", "explain one instance");
  auto* bm = app.add_subcommand("benchmark", "compare VAE-LIME and LIME fidelity");

  GenDataArgs gen_args;
  TrainVaeArgs vae_args;
  TrainBlackBoxArgs bb_args;
  ExplainArgs ex_args;
  BenchmarkArgs bm_args;
  Options gen_opts(gen), tv_opts(tv), tb_opts(tb), ex_opts(ex), bm_opts(bm);
  RegisterGenData(gen_opts, gen_args);
  RegisterTrainVae(tv_opts, vae_args);
  RegisterTrainBlackBox(tb_opts, bb_args);
  RegisterExplain(ex_opts, ex_args);
  RegisterBenchmark(bm_opts, bm_args);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return CmdGenData(gen_args, gen_opts.Resolve(), out);
    if (tv->parsed()) return CmdTrainVae(vae_args, tv_opts.Resolve(), out);
    if (tb->parsed()) return CmdTrainBlackBox(bb_args, tb_opts.Resolve(), out);
    if (ex->parsed()) return CmdExplain(ex_args, ex_opts.Resolve(), out);
    if (bm->parsed()) return CmdBenchmark(bm_args, bm_opts.Resolve(), out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCompute;
  }
  return kExitUsage;
}

}  // namespace vaelime
