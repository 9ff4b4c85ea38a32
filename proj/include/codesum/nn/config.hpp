// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace codesum::nn {

enum class CellType { GRU, LSTM };

std::string to_string(CellType cell);
CellType parse_cell(const std::string& text);

/// Model and optimiser hyper-parameters.
struct ModelConfig {
  int embed_dim = 256;
  int hidden_dim = 512;
  CellType cell = CellType::GRU;
  double dropout = 0.2;
  std::optional<int> n_apis = 3;  // nullopt selects every matched API
  double lr = 0.1;
  int batch_size = 32;
  int max_epochs = 100;
  int patience = 7;
  std::uint64_t seed = 1;
  bool use_api_context = true;
  double clip_norm = 0.0;  // 0 disables clipping
  double init_range = 0.08;  // uniform init half-width
  int src_vocab = 8000;
  int tgt_vocab = 4000;

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

nlohmann::json to_json(const ModelConfig& config);
ModelConfig config_from_json(const nlohmann::json& obj);

}  // namespace codesum::nn
