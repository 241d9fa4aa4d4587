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

#include "vaelime/serialize.h"

#include <fstream>
#include <sstream>

#include "vaelime/errors.h"

namespace vaelime {

using nlohmann::json;

namespace {

json LayerToJson(const DenseLayer& layer) {
  return {{"rows", layer.weights.rows()},
          {"cols", layer.weights.cols()},
          {"weights", std::vector<double>(layer.weights.data().begin(),
                                          layer.weights.data().end())},
          {"bias", layer.bias},
          {"activation",
           layer.activation == Activation::kTanh ? "tanh" : "identity"}};
}

DenseLayer LayerFromJson(const json& j) {
  DenseLayer layer;
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  layer.weights = Matrix(rows, cols, j.at("weights").get<std::vector<double>>());
  layer.bias = j.at("bias").get<Vector>();
  layer.activation = j.at("activation").get<std::string>() == "tanh"
                         ? Activation::kTanh
                         : Activation::kIdentity;
  return layer;
}

json LayersToJson(const DenseNet& net) {
  json layers = json::array();
  for (const auto& l : net.layers()) layers.push_back(LayerToJson(l));
  return layers;
}

json StandardizationToJson(const Standardization& s) {
  return {{"means", s.means}, {"stds", s.stds}};
}

Standardization StandardizationFromJson(const json& j) {
  return {j.at("means").get<Vector>(), j.at("stds").get<Vector>()};
}

void Require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("model schema: " + what);
}

bool IsNumberArray(const json& j, std::size_t size) {
  if (!j.is_array() || j.size() != size) return false;
  for (const auto& v : j) {
    if (!v.is_number()) return false;
  }
  return true;
}

// Wraps json library exceptions so malformed files map to ConfigError.
template <typename Fn>
auto Guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model schema: ") + e.what());
  }
}

}  // namespace

void ValidateModelJson(const json& j) {
  Require(j.is_object(), "document is not an object");
  Require(j.contains("schema_version") && j["schema_version"].is_number_integer(),
          "missing integer schema_version");
  Require(j["schema_version"].get<int>() == kModelSchemaVersion,
          "unsupported schema_version");
  Require(j.contains("kind") && j["kind"].is_string(), "missing kind");
  const auto kind = j["kind"].get<std::string>();
  Require(kind == "vae" || kind == "mlp" || kind == "analytic",
          "kind must be vae, mlp or analytic");
  Require(j.contains("input_dim") && j["input_dim"].is_number_unsigned(),
          "missing input_dim");
  const auto d = j["input_dim"].get<std::size_t>();
  Require(j.contains("layers") && j["layers"].is_array(), "missing layers");

  if (kind == "analytic") {
    Require(j.contains("analytic") && j["analytic"].is_object(),
            "analytic model needs an analytic object");
    Require(IsNumberArray(j["analytic"].value("c", json()), 3),
            "analytic.c must hold 3 numbers");
    Require(d >= 5 && IsNumberArray(j["analytic"].value("linear", json()), d - 4),
            "analytic.linear must hold input_dim - 4 numbers");
    return;
  }

  Require(j.contains("standardization") && j["standardization"].is_object(),
          "missing standardization");
  Require(IsNumberArray(j["standardization"].value("means", json()), d),
          "standardization.means must hold input_dim numbers");
  Require(IsNumberArray(j["standardization"].value("stds", json()), d),
          "standardization.stds must hold input_dim numbers");
  for (const auto& s : j["standardization"]["stds"]) {
    Require(s.get<double>() > 0.0, "standardization.stds must be > 0");
  }
  const auto& layers = j["layers"];
  Require(!layers.empty(), "layers must not be empty");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const std::string where = "layers[" + std::to_string(i) + "]";
    Require(l.is_object() && l.contains("rows") && l.contains("cols") &&
                l["rows"].is_number_unsigned() && l["cols"].is_number_unsigned(),
            where + " needs rows and cols");
    const auto rows = l["rows"].get<std::size_t>();
    const auto cols = l["cols"].get<std::size_t>();
    Require(IsNumberArray(l.value("weights", json()), rows * cols),
            where + ".weights must hold rows * cols numbers");
    Require(IsNumberArray(l.value("bias", json()), rows),
            where + ".bias must hold rows numbers");
    Require(l.contains("activation") &&
                (l["activation"] == "tanh" || l["activation"] == "identity"),
            where + ".activation must be tanh or identity");
  }
  if (kind == "vae") {
    Require(j.contains("latent_dim") && j["latent_dim"].is_number_unsigned(),
            "vae needs latent_dim");
    Require(j.contains("encoder_layers") &&
                j["encoder_layers"].is_number_unsigned() &&
                j["encoder_layers"].get<std::size_t>() < layers.size() &&
                j["encoder_layers"].get<std::size_t>() > 0,
            "vae needs encoder_layers in [1, layers)");
    Require(IsNumberArray(j.value("latent_spread", json()),
                          j["latent_dim"].get<std::size_t>()),
            "vae needs latent_spread of length latent_dim");
  } else {
    Require(j.contains("target") && j["target"].is_object() &&
                j["target"].value("mean", json()).is_number() &&
                j["target"].value("std", json()).is_number(),
            "mlp needs target {mean, std}");
  }
}

json VaeToJson(const VaeModel& model) {
  json layers = LayersToJson(model.encoder);
  for (auto& l : LayersToJson(model.decoder)) layers.push_back(std::move(l));
  return {{"schema_version", kModelSchemaVersion},
          {"kind", "vae"},
          {"input_dim", model.input_dim},
          {"latent_dim", model.latent_dim},
          {"standardization", StandardizationToJson(model.standardization)},
          {"encoder_layers", model.encoder.layers().size()},
          {"latent_spread", model.latent_spread},
          {"layers", std::move(layers)}};
}

VaeModel VaeFromJson(const json& j) {
  ValidateModelJson(j);
  Require(j["kind"] == "vae", "expected a vae model, found " +
                                  j["kind"].get<std::string>());
  return Guarded([&] {
    VaeModel model;
    model.input_dim = j["input_dim"].get<std::size_t>();
    model.latent_dim = j["latent_dim"].get<std::size_t>();
    model.standardization = StandardizationFromJson(j["standardization"]);
    model.latent_spread = j["latent_spread"].get<Vector>();
    const auto n_enc = j["encoder_layers"].get<std::size_t>();
    std::vector<DenseLayer> enc;
    std::vector<DenseLayer> dec;
    const auto& layers = j["layers"];
    for (std::size_t i = 0; i < layers.size(); ++i) {
      (i < n_enc ? enc : dec).push_back(LayerFromJson(layers[i]));
    }
    try {
      model.encoder = DenseNet(std::move(enc));
      model.decoder = DenseNet(std::move(dec));
      model.Validate();
    } catch (const DimensionMismatch& e) {
      throw ConfigError(std::string("model schema: ") + e.what());
    }
    return model;
  });
}

json BlackBoxToJson(const BlackBox& blackbox) {
  if (blackbox.kind() == BlackBoxKind::kAnalytic) {
    const auto& spec = blackbox.analytic();
    return {{"schema_version", kModelSchemaVersion},
            {"kind", "analytic"},
            {"input_dim", spec.input_dim()},
            {"analytic",
             {{"c", {spec.c1, spec.c2, spec.c3}}, {"linear", spec.linear}}},
            {"layers", json::array()}};
  }
  const auto& m = blackbox.mlp();
  return {{"schema_version", kModelSchemaVersion},
          {"kind", "mlp"},
          {"input_dim", m.input.dim()},
          {"standardization", StandardizationToJson(m.input)},
          {"target", {{"mean", m.target_mean}, {"std", m.target_std}}},
          {"layers", LayersToJson(m.net)}};
}

BlackBox BlackBoxFromJson(const json& j) {
  ValidateModelJson(j);
  const auto kind = j["kind"].get<std::string>();
  Require(kind != "vae", "expected a black-box model, found a vae");
  return Guarded([&] {
    if (kind == "analytic") {
      AnalyticSpec spec;
      const auto c = j["analytic"]["c"].get<std::vector<double>>();
      spec.c1 = c[0];
      spec.c2 = c[1];
      spec.c3 = c[2];
      spec.linear = j["analytic"]["linear"].get<Vector>();
      return BlackBox(std::move(spec));
    }
    MlpRegressor m;
    m.input = StandardizationFromJson(j["standardization"]);
    m.target_mean = j["target"]["mean"].get<double>();
    m.target_std = j["target"]["std"].get<double>();
    std::vector<DenseLayer> layers;
    for (const auto& l : j["layers"]) layers.push_back(LayerFromJson(l));
    try {
      m.net = DenseNet(std::move(layers));
      return BlackBox(std::move(m));
    } catch (const DimensionMismatch& e) {
      throw ConfigError(std::string("model schema: ") + e.what());
    }
  });
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void WriteJsonFile(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace vaelime
