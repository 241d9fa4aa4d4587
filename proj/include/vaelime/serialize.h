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

#ifndef VAELIME_SERIALIZE_H_
#define VAELIME_SERIALIZE_H_

#include <string>

#include "json.hpp"
#include "vaelime/blackbox.h"
#include "vaelime/vae.h"

namespace vaelime {

inline constexpr int kModelSchemaVersion = 1;

// Model files share one layout:
//   {schema_version, kind, input_dim, latent_dim?, standardization{means,
//    stds}, layers[{rows, cols, weights (row-major), bias, activation}]}
// VAE files list encoder layers first and record their count in
// "encoder_layers", plus the per-dimension "latent_spread". MLP files carry
// "target" {mean, std}; analytic files carry "analytic" {c, linear} and an
// empty layer list. An optional "provenance" object is ignored on load.
nlohmann::json VaeToJson(const VaeModel& model);
VaeModel VaeFromJson(const nlohmann::json& json);

nlohmann::json BlackBoxToJson(const BlackBox& blackbox);
BlackBox BlackBoxFromJson(const nlohmann::json& json);

// Structural check of a model document; throws ConfigError naming the first
// offending field.
void ValidateModelJson(const nlohmann::json& json);

nlohmann::json ReadJsonFile(const std::string& path);
// Pretty-printed with a trailing newline.
void WriteJsonFile(const nlohmann::json& json, const std::string& path);

}  // namespace vaelime

#endif  // VAELIME_SERIALIZE_H_
