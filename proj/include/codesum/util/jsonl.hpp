// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace codesum::util {

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

/// Calls `on_object` for every non-blank line parsed as a JSON object.
/// Parse failures and exceptions thrown by the callback are collected per line.
/// Throws IoError when the file cannot be opened.
std::vector<LineError> read_jsonl(const std::string& path,
                                  const std::function<void(const nlohmann::json&)>& on_object);

/// Reads a JSON-lines file strictly: any malformed line throws ValidationError.
std::vector<nlohmann::json> read_jsonl_strict(const std::string& path);

/// Writes one compact object per line. Throws IoError on failure.
void write_jsonl(const std::string& path, const std::vector<nlohmann::json>& objects);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace codesum::util
