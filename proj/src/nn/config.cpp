// SPDX-License-Identifier: Apache-2.0
#include "codesum/nn/config.hpp"

#include <cmath>

#include "codesum/errors.hpp"

namespace codesum::nn {

std::string to_string(CellType cell) { return cell == CellType::GRU ? "GRU" : "LSTM"; }

CellType parse_cell(const std::string& text) {
  if (text == "GRU" || text == "gru") return CellType::GRU;
  if (text == "LSTM" || text == "lstm") return CellType::LSTM;
  throw ValidationError("unknown cell type: " + text);
}

void ModelConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("invalid model config: ") + what);
  };
  need(embed_dim >= 1, "embed_dim must be >= 1");
  need(hidden_dim >= 1, "hidden_dim must be >= 1");
  need(std::isfinite(dropout) && dropout >= 0.0 && dropout < 1.0, "dropout must be in [0, 1)");
  need(!n_apis || *n_apis >= 0, "n_apis must be >= 0");
  need(std::isfinite(lr) && lr > 0.0, "lr must be positive");
  need(batch_size >= 1, "batch_size must be >= 1");
  need(max_epochs >= 1, "max_epochs must be >= 1");
  need(patience >= 1, "patience must be >= 1");
  need(std::isfinite(clip_norm) && clip_norm >= 0.0, "clip_norm must be >= 0");
  need(std::isfinite(init_range) && init_range > 0.0, "init_range must be positive");
  need(src_vocab >= 5, "src_vocab must be >= 5");
  need(tgt_vocab >= 5, "tgt_vocab must be >= 5");
}

nlohmann::json to_json(const ModelConfig& c) {
  nlohmann::json j;
  j["embed_dim"] = c.embed_dim;
  j["hidden_dim"] = c.hidden_dim;
  j["cell"] = to_string(c.cell);
  j["dropout"] = c.dropout;
  if (c.n_apis) {
    j["n_apis"] = *c.n_apis;
  } else {
    j["n_apis"] = "all";
  }
  j["lr"] = c.lr;
  j["batch_size"] = c.batch_size;
  j["max_epochs"] = c.max_epochs;
  j["patience"] = c.patience;
  j["seed"] = c.seed;
  j["use_api_context"] = c.use_api_context;
  j["clip_norm"] = c.clip_norm;
  j["init_range"] = c.init_range;
  j["src_vocab"] = c.src_vocab;
  j["tgt_vocab"] = c.tgt_vocab;
  return j;
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.embed_dim = j.at("embed_dim").get<int>();
    c.hidden_dim = j.at("hidden_dim").get<int>();
    c.cell = parse_cell(j.at("cell").get<std::string>());
    c.dropout = j.at("dropout").get<double>();
    const auto& n = j.at("n_apis");
    if (n.is_string()) {
      if (n.get<std::string>() != "all") throw ValidationError("n_apis must be an integer or \"all\"");
      c.n_apis.reset();
    } else {
      c.n_apis = n.get<int>();
    }
    c.lr = j.at("lr").get<double>();
    c.batch_size = j.at("batch_size").get<int>();
    c.max_epochs = j.at("max_epochs").get<int>();
    c.patience = j.at("patience").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.use_api_context = j.at("use_api_context").get<bool>();
    c.clip_norm = j.at("clip_norm").get<double>();
    c.init_range = j.value("init_range", c.init_range);
    c.src_vocab = j.at("src_vocab").get<int>();
    c.tgt_vocab = j.at("tgt_vocab").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace codesum::nn
