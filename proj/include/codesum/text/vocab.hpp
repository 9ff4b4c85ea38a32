// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace codesum::text {

using TokenId = std::int32_t;

/// Token <-> id bijection with four fixed specials.
class Vocabulary {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kBos = 1;
  static constexpr TokenId kEos = 2;
  static constexpr TokenId kUnk = 3;
  static constexpr std::size_t kNumSpecials = 4;
  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kBosToken = "<s>";
  static constexpr std::string_view kEosToken = "</s>";
  static constexpr std::string_view kUnkToken = "<unk>";

  /// Specials only.
  Vocabulary();

  /// Ranks tokens by (frequency desc, first occurrence asc), drops those
  /// below `min_freq` and keeps at most `max_size - 4` of them.
  static Vocabulary build(const std::vector<std::vector<std::string>>& streams, std::size_t max_size,
                          std::size_t min_freq = 1);

  /// One non-special token per line; line k holds id k + 4.
  static Vocabulary load(const std::string& path);
  void save(const std::string& path) const;

  std::size_t size() const { return id_to_token_.size(); }
  TokenId id(std::string_view token) const;  // kUnk when absent
  const std::string& token(TokenId id) const;
  bool contains(std::string_view token) const;

  std::vector<TokenId> encode(const std::vector<std::string>& tokens) const;
  /// Drops PAD/BOS/EOS; stops at the first EOS.
  std::vector<std::string> decode(const std::vector<TokenId>& ids) const;

  bool operator==(const Vocabulary& other) const { return id_to_token_ == other.id_to_token_; }

 private:
  void add(std::string token);

  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
};

}  // namespace codesum::text
