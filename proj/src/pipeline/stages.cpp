// SPDX-License-Identifier: Apache-2.0
#include "codesum/pipeline/stages.hpp"

#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include "codesum/errors.hpp"
#include "codesum/java/parser.hpp"
#include "codesum/java/sbt.hpp"
#include "codesum/nn/serialize.hpp"
#include "codesum/nn/train.hpp"
#include "codesum/text/subtoken.hpp"
#include "codesum/util/hash.hpp"
#include "codesum/util/jsonl.hpp"

namespace codesum::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

Paths Paths::in(const std::string& dir) {
  Paths p;
  p.dir = dir;
  auto f = [&](const char* name) { return (fs::path(dir) / name).string(); };
  p.extract = f("extract.jsonl");
  p.corpus_stats = f("corpus_stats.json");
  p.rank = f("rank.jsonl");
  p.vocab_src = f("vocab.src.txt");
  p.vocab_tgt = f("vocab.tgt.txt");
  p.prepared = f("prepared.jsonl");
  p.model = f("model.bin");
  p.history = f("history.json");
  p.decoded = f("decoded.jsonl");
  p.scores = f("scores.json");
  return p;
}

std::string Paths::stamp(const std::string& stage) const { return (fs::path(dir) / (stage + ".stamp")).string(); }

void require_file(const std::string& path) {
  if (!fs::is_regular_file(path)) throw IoError("missing input: " + path);
}

// ---- sidecar records --------------------------------------------------------

json to_json(const ExtractedMethod& m) {
  json params = json::array();
  for (const auto& p : m.signature.params) params.push_back({{"type", p.type}, {"name", p.name}});
  json calls = json::array();
  for (const auto& c : m.calls) {
    json jc = {{"name", c.simple_name}, {"arity", c.arg_count}, {"order_index", c.order_index}};
    jc["receiver"] = c.receiver_text ? json(*c.receiver_text) : json(nullptr);
    calls.push_back(std::move(jc));
  }
  json j = corpus::record_to_json(m.record);
  j["sbt"] = m.sbt;
  j["signature"] = {{"name", m.signature.name}, {"params", params}};
  j["calls"] = calls;
  return j;
}

ExtractedMethod extracted_from_json(const json& j) {
  ExtractedMethod m;
  m.record = corpus::record_from_json(j);
  if (!m.record.split) throw ValidationError("extracted record without split: " + m.record.id);
  m.sbt = j.at("sbt").get<std::vector<std::string>>();
  const json& sig = j.at("signature");
  m.signature.name = sig.at("name").get<std::string>();
  for (const auto& p : sig.at("params")) {
    m.signature.params.push_back({p.at("type").get<std::string>(), p.at("name").get<std::string>()});
  }
  for (const auto& c : j.at("calls")) {
    java::ApiCallSite site;
    site.simple_name = c.at("name").get<std::string>();
    site.arg_count = c.at("arity").get<std::size_t>();
    site.order_index = c.at("order_index").get<std::size_t>();
    if (!c.at("receiver").is_null()) site.receiver_text = c.at("receiver").get<std::string>();
    m.calls.push_back(std::move(site));
  }
  return m;
}

std::vector<ExtractedMethod> read_extracted(const std::string& path) {
  require_file(path);
  std::vector<ExtractedMethod> out;
  for (const json& j : util::read_jsonl_strict(path)) out.push_back(extracted_from_json(j));
  return out;
}

json to_json(const RankedRecord& r) {
  json ranked = json::array();
  for (std::size_t i = 0; i < r.set.ranked.size(); ++i) {
    const auto& a = r.set.ranked[i];
    json e = catalog::entry_to_json(a.entry);
    e["score"] = a.score;
    e["order_index"] = a.order_index;
    if (i < r.tiers.size()) e["tier"] = std::string(catalog::to_string(r.tiers[i]));
    ranked.push_back(std::move(e));
  }
  return {{"id", r.id}, {"ranked", ranked}, {"n_selected", r.set.n_selected}, {"unmatched", r.set.unmatched_count}};
}

RankedRecord ranked_from_json(const json& j) {
  RankedRecord r;
  r.id = j.at("id").get<std::string>();
  for (const auto& e : j.at("ranked")) {
    ranker::RankedApi a;
    a.entry = catalog::entry_from_json(e);
    a.score = e.at("score").get<int>();
    a.order_index = e.at("order_index").get<std::size_t>();
    r.set.ranked.push_back(std::move(a));
    const std::string tier = e.value("tier", "exact");
    r.tiers.push_back(tier == "name_only" ? catalog::MatchTier::NameOnly : catalog::MatchTier::Exact);
  }
  r.set.n_selected = j.at("n_selected").get<std::size_t>();
  r.set.unmatched_count = j.at("unmatched").get<std::size_t>();
  return r;
}

std::vector<RankedRecord> read_ranked(const std::string& path) {
  require_file(path);
  std::vector<RankedRecord> out;
  for (const json& j : util::read_jsonl_strict(path)) out.push_back(ranked_from_json(j));
  return out;
}

json to_json(const DecodedRecord& d) {
  return {{"id", d.id}, {"hypothesis", d.hypothesis}, {"reference", d.reference}};
}

DecodedRecord decoded_from_json(const json& j) {
  DecodedRecord d;
  d.id = j.at("id").get<std::string>();
  d.hypothesis = j.at("hypothesis").get<metrics::Tokens>();
  d.reference = j.at("reference").get<metrics::Tokens>();
  return d;
}

std::vector<DecodedRecord> read_decoded(const std::string& path) {
  require_file(path);
  std::vector<DecodedRecord> out;
  for (const json& j : util::read_jsonl_strict(path)) out.push_back(decoded_from_json(j));
  return out;
}

// ---- stamps -----------------------------------------------------------------

namespace {

class Stamp {
 public:
  Stamp(const Paths& paths, std::string stage) : path_(paths.stamp(stage)) { hash_.update(stage); }

  Stamp& key(const RunConfig& c, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      hash_.update(k);
      hash_.update(c.get(k));
    }
    return *this;
  }
  Stamp& input(const std::string& path) {
    require_file(path);
    hash_.update(path);
    hash_.update(util::hash_file(path));
    return *this;
  }
  bool current(std::initializer_list<std::string> outputs) const {
    for (const auto& o : outputs) {
      if (!fs::is_regular_file(o)) return false;
    }
    if (!fs::is_regular_file(path_)) return false;
    return util::read_text_file(path_) == hash_.hex() + "\n";
  }
  void write() const { util::write_text_file(path_, hash_.hex() + "\n"); }

 private:
  std::string path_;
  util::Fnv1a hash_;
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

StageOutcome up_to_date(const std::string& stage, std::ostream& log) {
  log << stage << ": up to date\n";
  return {true, stage + ": up to date"};
}

std::vector<text::PreparedExample> split_of(const std::vector<text::PreparedExample>& all, corpus::Split s) {
  std::vector<text::PreparedExample> out;
  for (const auto& ex : all) {
    if (ex.split == s) out.push_back(ex);
  }
  return out;
}

nn::ModelConfig model_config_for(const RunConfig& config, const text::Vocabulary& src, const text::Vocabulary& tgt) {
  nn::ModelConfig mc = config.model;
  mc.src_vocab = static_cast<int>(src.size());
  mc.tgt_vocab = static_cast<int>(tgt.size());
  return mc;
}

metrics::Tokens reference_tokens(const std::string& comment, std::size_t cap) {
  metrics::Tokens t = text::subtoken_split(comment);
  if (t.size() > cap) t.resize(cap);
  return t;
}

}  // namespace

// ---- stages -----------------------------------------------------------------

StageOutcome run_extract(const RunConfig& config, const Paths& paths, std::ostream& log) {
  Stamp stamp(paths, "extract");
  stamp.key(config, {"seed", "max_code_tokens", "max_comment_tokens"}).input(config.corpus);
  if (stamp.current({paths.extract, paths.corpus_stats})) return up_to_date("extract", log);
  ensure_dir(paths.dir);

  corpus::LoadResult loaded = corpus::load_corpus(config.corpus);
  for (const auto& e : loaded.errors) log << config.corpus << ":" << e.line << ": " << e.message << "\n";
  corpus::FilterOptions opts;
  opts.max_code_tokens = config.max_code_tokens;
  opts.max_comment_tokens = config.max_comment_tokens;
  corpus::FilterResult filtered = corpus::filter_corpus(loaded.records, opts);
  corpus::assign_missing_splits(filtered.kept, config.model.seed);

  std::vector<json> rows;
  corpus::CorpusStats stats = filtered.stats;
  stats.train = stats.validation = stats.test = stats.unassigned = 0;
  for (const auto& rec : filtered.kept) {
    ExtractedMethod m;
    m.record = rec;
    const java::SyntaxTree tree = java::parse_method_source(rec.code);
    m.sbt = java::sbt_flatten(tree);
    m.signature = java::extract_signature(tree);
    m.calls = java::extract_api_calls(tree);
    switch (*rec.split) {
      case corpus::Split::Train: ++stats.train; break;
      case corpus::Split::Validation: ++stats.validation; break;
      case corpus::Split::Test: ++stats.test; break;
    }
    rows.push_back(to_json(m));
  }
  util::write_jsonl(paths.extract, rows);
  json js = corpus::to_json(stats);
  js["malformed_lines"] = loaded.errors.size();
  util::write_text_file(paths.corpus_stats, js.dump(2) + "\n");
  stamp.write();
  std::ostringstream msg;
  msg << "extract: " << rows.size() << " methods (train " << stats.train << ", validation " << stats.validation
      << ", test " << stats.test << "), filtered " << stats.filtered_out << ", malformed " << loaded.errors.size();
  log << msg.str() << "\n";
  return {false, msg.str()};
}

StageOutcome run_rank(const RunConfig& config, const Paths& paths, std::ostream& log) {
  Stamp stamp(paths, "rank");
  stamp.key(config, {"n_apis"}).input(paths.extract).input(config.catalog);
  if (stamp.current({paths.rank})) return up_to_date("rank", log);

  const auto methods = read_extracted(paths.extract);
  const catalog::CatalogLoad cat = catalog::load_catalog(config.catalog);
  for (const auto& e : cat.errors) log << config.catalog << ":" << e.line << ": " << e.message << "\n";
  std::optional<std::size_t> n;
  if (config.model.n_apis) n = static_cast<std::size_t>(*config.model.n_apis);

  std::vector<json> rows;
  std::size_t matched = 0, unmatched = 0;
  for (const auto& m : methods) {
    const ranker::ResolvedCalls resolved = ranker::resolve_calls(m.calls, cat.catalog);
    std::map<std::size_t, catalog::MatchTier> tier_of;
    for (std::size_t i = 0; i < resolved.matched.size(); ++i) tier_of[resolved.matched[i].order_index] = resolved.tiers[i];
    RankedRecord r;
    r.id = m.record.id;
    r.set = ranker::score_apis(m.signature, resolved.matched, resolved.unmatched_count);
    r.set.n_selected = ranker::select_top_n(r.set, n).n_selected;
    for (const auto& a : r.set.ranked) r.tiers.push_back(tier_of.at(a.order_index));
    matched += r.set.ranked.size();
    unmatched += r.set.unmatched_count;
    rows.push_back(to_json(r));
  }
  util::write_jsonl(paths.rank, rows);
  stamp.write();
  std::ostringstream msg;
  msg << "rank: " << rows.size() << " methods, " << matched << " matched APIs, " << unmatched
      << " unmatched call sites";
  log << msg.str() << "\n";
  return {false, msg.str()};
}

StageOutcome run_prepare(const RunConfig& config, const Paths& paths, std::ostream& log) {
  Stamp stamp(paths, "prepare");
  stamp
      .key(config, {"n_apis", "src_vocab_size", "tgt_vocab_size", "min_freq", "max_code_tokens", "max_comment_tokens",
                    "max_ast_tokens", "max_desc_tokens", "max_def_tokens"})
      .input(paths.extract)
      .input(paths.rank);
  if (stamp.current({paths.prepared, paths.vocab_src, paths.vocab_tgt})) return up_to_date("prepare", log);
  ensure_dir(paths.dir);

  const auto methods = read_extracted(paths.extract);
  const auto ranked = read_ranked(paths.rank);
  if (methods.size() != ranked.size()) {
    throw ValidationError("extract and rank sidecars differ in length (" + std::to_string(methods.size()) + " vs " +
                          std::to_string(ranked.size()) + ")");
  }
  std::optional<std::size_t> n;
  if (config.model.n_apis) n = static_cast<std::size_t>(*config.model.n_apis);
  const text::ChannelCaps caps = config.caps();

  std::vector<text::ExampleTokens> tokens;
  std::vector<std::vector<std::string>> src_streams, tgt_streams;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (methods[i].record.id != ranked[i].id) {
      throw ValidationError("record order differs between sidecars at " + methods[i].record.id);
    }
    tokens.push_back(
        text::tokenize_example(methods[i].record, methods[i].sbt, ranker::select_top_n(ranked[i].set, n), caps));
    if (methods[i].record.split != corpus::Split::Train) continue;
    const auto& t = tokens.back();
    src_streams.push_back(t.code);
    src_streams.push_back(t.ast);
    for (const auto& d : t.descriptions) src_streams.push_back(d);
    for (const auto& d : t.definitions) src_streams.push_back(d);
    tgt_streams.push_back(t.comment);
  }
  if (tgt_streams.empty()) throw ValidationError("no training records to build vocabularies from");
  const auto src = text::Vocabulary::build(src_streams, static_cast<std::size_t>(config.model.src_vocab), config.min_freq);
  const auto tgt = text::Vocabulary::build(tgt_streams, static_cast<std::size_t>(config.model.tgt_vocab), config.min_freq);

  std::vector<text::PreparedExample> prepared;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    prepared.push_back(text::encode_tokens(methods[i].record.id, *methods[i].record.split, tokens[i], src, tgt));
  }
  src.save(paths.vocab_src);
  tgt.save(paths.vocab_tgt);
  text::write_prepared(prepared, paths.prepared);
  stamp.write();
  std::ostringstream msg;
  msg << "prepare: " << prepared.size() << " examples, source vocabulary " << src.size() << ", target vocabulary "
      << tgt.size();
  log << msg.str() << "\n";
  return {false, msg.str()};
}

StageOutcome run_train(const RunConfig& config, const Paths& paths, std::ostream& log) {
  Stamp stamp(paths, "train");
  stamp
      .key(config, {"seed", "embed_dim", "hidden_dim", "cell", "dropout", "n_apis", "lr", "batch_size", "max_epochs",
                    "patience", "use_api_context", "clip_norm", "init_range"})
      .input(paths.prepared)
      .input(paths.vocab_src)
      .input(paths.vocab_tgt);
  if (stamp.current({paths.model, paths.history})) return up_to_date("train", log);

  const auto src = text::Vocabulary::load(paths.vocab_src);
  const auto tgt = text::Vocabulary::load(paths.vocab_tgt);
  const auto all = text::read_prepared(paths.prepared);
  const auto train_set = split_of(all, corpus::Split::Train);
  const auto val_set = split_of(all, corpus::Split::Validation);

  nn::TrainOptions opts;
  opts.on_epoch = [&log](const nn::EpochRecord& r) {
    log << "  epoch " << r.epoch << "  train " << r.train_loss << "  validation " << r.val_loss
        << (r.improved ? "  *" : "") << "\n";
    return false;
  };
  const nn::ModelConfig mc = model_config_for(config, src, tgt);
  log << "train: " << train_set.size() << " train / " << val_set.size() << " validation examples, "
      << nn::Model::closed_form_parameter_count(mc) << " parameters\n";
  nn::TrainResult result = nn::train(mc, train_set, val_set, opts);
  nn::save_model(result.model, paths.model);
  util::write_text_file(paths.history, nn::to_json(result.history).dump(2) + "\n");
  stamp.write();
  std::ostringstream msg;
  msg << "train: " << result.history.epochs.size() << " epochs, best epoch " << result.history.best_epoch;
  log << msg.str() << "\n";
  return {false, msg.str()};
}

StageOutcome run_evaluate(const RunConfig& config, const Paths& paths, std::ostream& log) {
  Stamp stamp(paths, "evaluate");
  stamp.key(config, {"max_decode_len", "max_comment_tokens"})
      .input(paths.model)
      .input(paths.prepared)
      .input(paths.vocab_tgt)
      .input(paths.extract);
  if (stamp.current({paths.decoded, paths.scores})) return up_to_date("evaluate", log);

  nn::Model model = nn::load_model(paths.model);
  const auto tgt = text::Vocabulary::load(paths.vocab_tgt);
  const auto test = split_of(text::read_prepared(paths.prepared), corpus::Split::Test);
  if (test.empty()) throw ValidationError("test split is empty");
  std::map<std::string, std::string> comments;
  for (const auto& m : read_extracted(paths.extract)) comments[m.record.id] = m.record.comment;

  std::vector<json> rows;
  std::vector<metrics::IdTokens> hyps, refs;
  for (const auto& ex : test) {
    DecodedRecord d;
    d.id = ex.id;
    d.hypothesis = tgt.decode(model.greedy_decode(ex, config.max_decode_len).ids);
    const auto it = comments.find(ex.id);
    if (it == comments.end()) throw ValidationError("no reference comment for " + ex.id);
    d.reference = reference_tokens(it->second, config.max_comment_tokens);
    hyps.push_back({d.id, d.hypothesis});
    refs.push_back({d.id, d.reference});
    rows.push_back(to_json(d));
  }
  const metrics::ScoreReport report = metrics::evaluate_corpus(hyps, refs);
  util::write_jsonl(paths.decoded, rows);
  util::write_text_file(paths.scores, metrics::to_json(report).dump(2) + "\n");
  stamp.write();
  std::ostringstream msg;
  msg.setf(std::ios::fixed);
  msg.precision(2);
  msg << "evaluate: " << report.n_examples << " examples, BLEU-1 " << report.bleu1 << ", BLEU-4 " << report.bleu4
      << ", METEOR " << report.meteor << ", ROUGE-L " << report.rouge_l;
  log << msg.str() << "\n";
  return {false, msg.str()};
}

std::vector<MethodSummary> summarize_methods(const RunConfig& config, const Paths& paths,
                                             const std::vector<corpus::CorpusRecord>& methods) {
  require_file(paths.model);
  require_file(paths.vocab_src);
  require_file(paths.vocab_tgt);
  nn::Model model = nn::load_model(paths.model);
  const auto src = text::Vocabulary::load(paths.vocab_src);
  const auto tgt = text::Vocabulary::load(paths.vocab_tgt);
  const catalog::CatalogLoad cat = catalog::load_catalog(config.catalog);
  std::optional<std::size_t> n;
  if (config.model.n_apis) n = static_cast<std::size_t>(*config.model.n_apis);

  std::vector<MethodSummary> out;
  for (const auto& rec : methods) {
    MethodSummary s;
    s.id = rec.id;
    try {
      const java::SyntaxTree tree = java::parse_method_source(rec.code);
      const auto sbt = java::sbt_flatten(tree);
      const auto set = ranker::select_top_n(
          ranker::rank_method(java::extract_signature(tree), java::extract_api_calls(tree), cat.catalog), n);
      corpus::CorpusRecord r = rec;
      r.comment.clear();
      const auto tokens = text::tokenize_example(r, sbt, set, config.caps());
      const auto ex = text::encode_tokens(rec.id, corpus::Split::Test, tokens, src, tgt);
      s.comment = text::join(tgt.decode(model.greedy_decode(ex, config.max_decode_len).ids), " ");
    } catch (const SourceError& e) {
      s.error = std::string("cannot parse method: ") + e.what();
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace codesum::pipeline
