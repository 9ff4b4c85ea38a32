// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "codesum/corpus.hpp"
#include "codesum/ranker.hpp"
#include "codesum/text/vocab.hpp"

namespace codesum::text {

using IdSeq = std::vector<TokenId>;

struct ChannelCaps {
  std::size_t code = 256;
  std::size_t ast = 512;
  std::size_t description = 32;
  std::size_t definition = 16;
  std::size_t comment = 64;  // before BOS/EOS framing
};

/// Id-encoded model input for one method.
struct PreparedExample {
  std::string id;
  corpus::Split split = corpus::Split::Train;
  IdSeq code_ids;
  IdSeq ast_ids;
  std::vector<IdSeq> desc_channels;  // rank order, one per selected API
  std::vector<IdSeq> def_channels;
  IdSeq target_ids;  // BOS ... EOS

  bool operator==(const PreparedExample&) const = default;
};

/// Token-level view of one method, before vocabulary lookup.
struct ExampleTokens {
  std::vector<std::string> code;
  std::vector<std::string> ast;
  std::vector<std::vector<std::string>> descriptions;
  std::vector<std::vector<std::string>> definitions;
  std::vector<std::string> comment;
};

/// Sub-tokenizes and truncates every channel. `sbt` is the raw sbt_flatten output.
ExampleTokens tokenize_example(const corpus::CorpusRecord& record, const std::vector<std::string>& sbt,
                               const ranker::RankedApiSet& selected, const ChannelCaps& caps);

PreparedExample encode_example(const corpus::CorpusRecord& record, const std::vector<std::string>& sbt,
                               const ranker::RankedApiSet& selected, const Vocabulary& source_vocab,
                               const Vocabulary& target_vocab, const ChannelCaps& caps);

PreparedExample encode_tokens(const std::string& id, corpus::Split split, const ExampleTokens& tokens,
                              const Vocabulary& source_vocab, const Vocabulary& target_vocab);

nlohmann::json to_json(const PreparedExample& ex);
PreparedExample prepared_from_json(const nlohmann::json& obj);

void write_prepared(const std::vector<PreparedExample>& examples, const std::string& path);
std::vector<PreparedExample> read_prepared(const std::string& path);

}  // namespace codesum::text
