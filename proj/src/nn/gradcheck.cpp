// SPDX-License-Identifier: Apache-2.0
#include "codesum/nn/gradcheck.hpp"

#include <algorithm>

#include "codesum/errors.hpp"

namespace codesum::nn {

std::vector<std::string> GradcheckReport::failed_tensors() const {
  std::vector<std::string> out;
  for (const TensorCheck& t : tensors) {
    if (!t.passed) out.push_back(t.name);
  }
  return out;
}

nlohmann::json to_json(const GradcheckReport& r) {
  nlohmann::json tensors = nlohmann::json::array();
  for (const TensorCheck& t : r.tensors) {
    tensors.push_back({{"name", t.name}, {"rel_error", t.rel_error}, {"passed", t.passed}});
  }
  return {{"passed", r.passed}, {"max_rel_error", r.max_rel_error}, {"tensors", tensors}};
}

ModelConfig gradcheck_config(CellType cell) {
  ModelConfig c;
  c.embed_dim = 4;
  c.hidden_dim = 8;
  c.cell = cell;
  c.dropout = 0.0;
  c.n_apis = 2;
  c.src_vocab = 12;
  c.tgt_vocab = 12;
  c.seed = 5;
  return c;
}

std::vector<text::PreparedExample> gradcheck_examples(const ModelConfig& config, std::uint64_t seed,
                                                      std::size_t count) {
  util::Rng rng(seed);
  const auto src = static_cast<std::uint64_t>(config.src_vocab - 4);
  const auto tgt = static_cast<std::uint64_t>(config.tgt_vocab - 4);
  auto seq = [&](std::uint64_t vocab, std::size_t len) {
    IdSeq ids;
    for (std::size_t k = 0; k < len; ++k) ids.push_back(static_cast<text::TokenId>(4 + rng.below(vocab)));
    return ids;
  };
  std::vector<text::PreparedExample> out;
  for (std::size_t i = 0; i < count; ++i) {
    text::PreparedExample ex;
    ex.id = "gc" + std::to_string(i);
    ex.code_ids = seq(src, 2 + rng.below(3));
    ex.ast_ids = seq(src, 2 + rng.below(3));
    for (int a = 0; a < 2; ++a) {
      ex.desc_channels.push_back(seq(src, 1 + rng.below(4)));
      ex.def_channels.push_back(seq(src, 1 + rng.below(4)));
    }
    ex.target_ids = seq(tgt, 1 + rng.below(2));
    ex.target_ids.insert(ex.target_ids.begin(), text::Vocabulary::kBos);
    ex.target_ids.push_back(text::Vocabulary::kEos);
    out.push_back(std::move(ex));
  }
  return out;
}

namespace {

double total_loss(Model& model, const std::vector<text::PreparedExample>& examples) {
  double total = 0.0;
  for (const auto& ex : examples) {
    Graph g(model, false);
    total += model.example_loss(g, ex).total.value()(0, 0);
  }
  return total;
}

}  // namespace

GradcheckReport gradcheck(Model& model, const std::vector<text::PreparedExample>& examples,
                          const GradcheckOptions& options) {
  model.zero_grad();
  for (const auto& ex : examples) {
    Graph g(model, true);
    g.tape().backward(model.example_loss(g, ex).total);
  }
  if (options.corrupt) options.corrupt(model);

  GradcheckReport report;
  const double h = options.step;
  for (Parameter& p : model.parameters()) {
    Matrix numeric(p.value.rows(), p.value.cols());
    for (Eigen::Index k = 0; k < p.value.size(); ++k) {
      const double saved = p.value(k);
      p.value(k) = saved + h;
      const double up = total_loss(model, examples);
      p.value(k) = saved - h;
      const double down = total_loss(model, examples);
      p.value(k) = saved;
      numeric(k) = (up - down) / (2.0 * h);
    }
    const double scale = std::max(p.grad.norm(), numeric.norm());
    TensorCheck t;
    t.name = p.name;
    t.rel_error = scale < 1e-12 ? 0.0 : (p.grad - numeric).norm() / scale;
    t.passed = t.rel_error <= options.tolerance;
    report.max_rel_error = std::max(report.max_rel_error, t.rel_error);
    report.passed = report.passed && t.passed;
    report.tensors.push_back(std::move(t));
  }
  return report;
}

GradcheckReport gradcheck(const ModelConfig& config, const GradcheckOptions& options) {
  if (config.hidden_dim > 8 || config.embed_dim > 4 || config.src_vocab > 12 || config.tgt_vocab > 12) {
    throw ValidationError("gradcheck needs hidden <= 8, embed <= 4 and vocabularies <= 12");
  }
  ModelConfig c = config;
  c.dropout = 0.0;
  Model model(c);
  model.init_params(c.seed, options.init_range);
  return gradcheck(model, gradcheck_examples(c, options.seed), options);
}

}  // namespace codesum::nn
