// SPDX-License-Identifier: Apache-2.0
#include "codesum/text/prepare.hpp"

#include "codesum/catalog.hpp"
#include "codesum/errors.hpp"
#include "codesum/java/sbt.hpp"
#include "codesum/text/subtoken.hpp"

namespace codesum::text {
namespace {

void cap(std::vector<std::string>& tokens, std::size_t limit) {
  if (tokens.size() > limit) tokens.resize(limit);
}

IdSeq ids_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw ValidationError("expected an id array");
  IdSeq out;
  for (const auto& v : arr) out.push_back(v.get<TokenId>());
  return out;
}

}  // namespace

ExampleTokens tokenize_example(const corpus::CorpusRecord& record, const std::vector<std::string>& sbt,
                               const ranker::RankedApiSet& selected, const ChannelCaps& caps) {
  ExampleTokens t;
  t.code = subtoken_split(record.code);
  cap(t.code, caps.code);
  t.ast = java::sbt_model_tokens(sbt);
  cap(t.ast, caps.ast);
  for (std::size_t i = 0; i < selected.n_selected && i < selected.ranked.size(); ++i) {
    const auto& entry = selected.ranked[i].entry;
    auto desc = catalog::render_description(entry);
    cap(desc, caps.description);
    auto def = catalog::render_definition(entry);
    cap(def, caps.definition);
    t.descriptions.push_back(std::move(desc));
    t.definitions.push_back(std::move(def));
  }
  t.comment = subtoken_split(record.comment);
  cap(t.comment, caps.comment);
  return t;
}

PreparedExample encode_tokens(const std::string& id, corpus::Split split, const ExampleTokens& tokens,
                              const Vocabulary& source_vocab, const Vocabulary& target_vocab) {
  PreparedExample ex;
  ex.id = id;
  ex.split = split;
  ex.code_ids = source_vocab.encode(tokens.code);
  ex.ast_ids = source_vocab.encode(tokens.ast);
  for (const auto& d : tokens.descriptions) ex.desc_channels.push_back(source_vocab.encode(d));
  for (const auto& d : tokens.definitions) ex.def_channels.push_back(source_vocab.encode(d));
  ex.target_ids.push_back(Vocabulary::kBos);
  for (TokenId t : target_vocab.encode(tokens.comment)) ex.target_ids.push_back(t);
  ex.target_ids.push_back(Vocabulary::kEos);
  return ex;
}

PreparedExample encode_example(const corpus::CorpusRecord& record, const std::vector<std::string>& sbt,
                               const ranker::RankedApiSet& selected, const Vocabulary& source_vocab,
                               const Vocabulary& target_vocab, const ChannelCaps& caps) {
  const auto tokens = tokenize_example(record, sbt, selected, caps);
  return encode_tokens(record.id, record.split.value_or(corpus::Split::Train), tokens, source_vocab,
                       target_vocab);
}

nlohmann::json to_json(const PreparedExample& ex) {
  return {{"id", ex.id},
          {"split", std::string(corpus::to_string(ex.split))},
          {"code", ex.code_ids},
          {"ast", ex.ast_ids},
          {"desc", ex.desc_channels},
          {"def", ex.def_channels},
          {"target", ex.target_ids}};
}

PreparedExample prepared_from_json(const nlohmann::json& obj) {
  PreparedExample ex;
  ex.id = obj.at("id").get<std::string>();
  auto split = corpus::parse_split(obj.at("split").get<std::string>());
  if (!split) throw ValidationError("bad split in prepared example " + ex.id);
  ex.split = *split;
  ex.code_ids = ids_from_json(obj.at("code"));
  ex.ast_ids = ids_from_json(obj.at("ast"));
  for (const auto& ch : obj.at("desc")) ex.desc_channels.push_back(ids_from_json(ch));
  for (const auto& ch : obj.at("def")) ex.def_channels.push_back(ids_from_json(ch));
  ex.target_ids = ids_from_json(obj.at("target"));
  return ex;
}

void write_prepared(const std::vector<PreparedExample>& examples, const std::string& path) {
  std::vector<nlohmann::json> lines;
  lines.reserve(examples.size());
  for (const auto& ex : examples) lines.push_back(to_json(ex));
  util::write_jsonl(path, lines);
}

std::vector<PreparedExample> read_prepared(const std::string& path) {
  std::vector<PreparedExample> out;
  for (const auto& obj : util::read_jsonl_strict(path)) out.push_back(prepared_from_json(obj));
  return out;
}

}  // namespace codesum::text
