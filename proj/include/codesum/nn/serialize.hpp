// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "codesum/nn/model.hpp"

namespace codesum::nn {

/// Binary layout: "CSUMPARM", u32 version, u32 length + config JSON,
/// u32 tensor count, then per tensor u32 length + name, u32 rows, u32 cols,
/// then every tensor's values as little-endian float32 in table order.
inline constexpr std::uint32_t kParamFormatVersion = 1;

void save_model(const Model& model, const std::string& path);

/// Rebuilds the model from the embedded config; throws ValidationError when
/// the tensor table disagrees with it and IoError on unreadable files.
Model load_model(const std::string& path);

}  // namespace codesum::nn
