// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "codesum/nn/model.hpp"
#include "json.hpp"

namespace codesum::nn {

struct TensorCheck {
  std::string name;
  double rel_error = 0.0;  // |a - n| / max(|a|, |n|), Frobenius norms
  bool passed = true;
};

struct GradcheckReport {
  std::vector<TensorCheck> tensors;
  double max_rel_error = 0.0;
  bool passed = true;

  std::vector<std::string> failed_tensors() const;
};

nlohmann::json to_json(const GradcheckReport& report);

struct GradcheckOptions {
  double step = 1e-4;
  double tolerance = 1e-3;
  std::uint64_t seed = 11;
  /// Wider than the training init so attention gradients sit well above
  /// finite-difference round-off.
  double init_range = 0.8;
  /// Test hook: runs on the model after analytic gradients are computed.
  std::function<void(Model&)> corrupt;
};

/// Tiny configuration: hidden 8, embed 4, vocabularies of 12, no dropout.
ModelConfig gradcheck_config(CellType cell);

/// Random examples with sequences of at most 4 ids and two API channels.
std::vector<text::PreparedExample> gradcheck_examples(const ModelConfig& config, std::uint64_t seed,
                                                      std::size_t count = 2);

/// Compares analytic gradients of the summed loss with central differences.
GradcheckReport gradcheck(Model& model, const std::vector<text::PreparedExample>& examples,
                          const GradcheckOptions& options = {});

/// Builds and initializes a model for a tiny `config` and checks it.
/// Throws ValidationError when `config` exceeds the tiny limits.
GradcheckReport gradcheck(const ModelConfig& config, const GradcheckOptions& options = {});

}  // namespace codesum::nn
