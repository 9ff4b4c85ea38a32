// SPDX-License-Identifier: Apache-2.0
#include "codesum/text/vocab.hpp"

#include <algorithm>
#include <fstream>

#include "codesum/errors.hpp"

namespace codesum::text {

Vocabulary::Vocabulary() {
  add(std::string(kPadToken));
  add(std::string(kBosToken));
  add(std::string(kEosToken));
  add(std::string(kUnkToken));
}

void Vocabulary::add(std::string token) {
  const auto id = static_cast<TokenId>(id_to_token_.size());
  token_to_id_.emplace(token, id);
  id_to_token_.push_back(std::move(token));
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& streams,
                             std::size_t max_size, std::size_t min_freq) {
  struct Stat {
    std::size_t count = 0;
    std::size_t first_seen = 0;
  };
  std::unordered_map<std::string, Stat> stats;
  std::size_t position = 0;
  for (const auto& stream : streams) {
    for (const auto& tok : stream) {
      auto [it, inserted] = stats.try_emplace(tok);
      if (inserted) it->second.first_seen = position;
      ++it->second.count;
      ++position;
    }
  }
  Vocabulary v;
  std::vector<std::pair<std::string, Stat>> ranked;
  for (auto& [tok, st] : stats) {
    if (st.count < min_freq || v.contains(tok)) continue;
    ranked.emplace_back(tok, st);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    return a.second.first_seen < b.second.first_seen;
  });
  const std::size_t room = max_size > kNumSpecials ? max_size - kNumSpecials : 0;
  if (ranked.size() > room) ranked.resize(room);
  for (auto& [tok, st] : ranked) v.add(tok);
  return v;
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary " + path);
  Vocabulary v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || v.contains(line)) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": empty or duplicate token");
    }
    v.add(line);
  }
  return v;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write vocabulary " + path);
  for (std::size_t i = kNumSpecials; i < id_to_token_.size(); ++i) out << id_to_token_[i] << '\n';
  if (!out) throw IoError("write failed for " + path);
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw ValidationError("token id out of range: " + std::to_string(id));
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_id_.count(std::string(token)) != 0;
}

std::vector<TokenId> Vocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id(t));
  return ids;
}

std::vector<std::string> Vocabulary::decode(const std::vector<TokenId>& ids) const {
  std::vector<std::string> out;
  for (TokenId id : ids) {
    if (id == kEos) break;
    if (id == kPad || id == kBos) continue;
    out.push_back(token(id));
  }
  return out;
}

}  // namespace codesum::text
