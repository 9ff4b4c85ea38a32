// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "codesum/nn/config.hpp"
#include "codesum/text/prepare.hpp"

namespace codesum::pipeline {

/// Everything a pipeline run depends on. Read from a `key = value` file and
/// overridden from the command line; every key has a default.
///
/// model.src_vocab / model.tgt_vocab act as vocabulary size limits here; the
/// trained model uses the sizes of the vocabularies actually built.
struct RunConfig {
  nn::ModelConfig model;
  std::string corpus = "data/desk_corpus.jsonl";
  std::string catalog = "data/catalog.jsonl";
  std::string work_dir = "work";
  std::size_t max_code_tokens = 256;
  std::size_t max_comment_tokens = 64;
  std::size_t max_ast_tokens = 512;
  std::size_t max_desc_tokens = 32;
  std::size_t max_def_tokens = 16;
  std::size_t min_freq = 1;
  std::vector<std::optional<int>> sweep = {2, 3, 4, std::nullopt};
  std::size_t code_bin = 20;
  std::size_t comment_bin = 3;
  std::size_t max_decode_len = 64;

  text::ChannelCaps caps() const;

  /// Sets one key; throws ValidationError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Canonical `key = value` lines in a fixed key order.
  std::vector<std::pair<std::string, std::string>> items() const;
  std::string get(const std::string& key) const;

  /// Range checks across all keys.
  void validate() const;
};

/// Every recognised key, in canonical order.
const std::vector<std::string>& config_keys();

/// Parses `key = value` lines; blank lines and `#` comments are ignored.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text, const std::string& origin = "<config>");
void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin);

std::string format_n_apis(const std::optional<int>& n);
std::optional<int> parse_n_apis(const std::string& text);

}  // namespace codesum::pipeline
