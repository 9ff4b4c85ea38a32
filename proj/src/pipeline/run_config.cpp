// SPDX-License-Identifier: Apache-2.0
#include "codesum/pipeline/run_config.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "codesum/errors.hpp"
#include "codesum/util/jsonl.hpp"

namespace codesum::pipeline {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw ValidationError("bad value for " + key + ": '" + value + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad value for " + key + ": '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ValidationError("bad value for " + key + ": '" + value + "'");
}

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field size_field(T RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& k, const std::string& v) { c.*member = parse_number<T>(k, v); },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field int_model(int nn::ModelConfig::*member) {
  return {[member](RunConfig& c, const std::string& k, const std::string& v) {
            c.model.*member = parse_number<int>(k, v);
          },
          [member](const RunConfig& c) { return std::to_string(c.model.*member); }};
}

Field real_model(double nn::ModelConfig::*member) {
  return {[member](RunConfig& c, const std::string& k, const std::string& v) { c.model.*member = parse_real(k, v); },
          [member](const RunConfig& c) { return fmt_real(c.model.*member); }};
}

Field string_field(std::string RunConfig::*member) {
  return {[member](RunConfig& c, const std::string&, const std::string& v) { c.*member = v; },
          [member](const RunConfig& c) { return c.*member; }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"corpus", string_field(&RunConfig::corpus)},
      {"catalog", string_field(&RunConfig::catalog)},
      {"work_dir", string_field(&RunConfig::work_dir)},
      {"seed",
       {[](RunConfig& c, const std::string& k, const std::string& v) { c.model.seed = parse_number<std::uint64_t>(k, v); },
        [](const RunConfig& c) { return std::to_string(c.model.seed); }}},
      {"embed_dim", int_model(&nn::ModelConfig::embed_dim)},
      {"hidden_dim", int_model(&nn::ModelConfig::hidden_dim)},
      {"cell",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.model.cell = nn::parse_cell(v); },
        [](const RunConfig& c) { return nn::to_string(c.model.cell); }}},
      {"dropout", real_model(&nn::ModelConfig::dropout)},
      {"n_apis",
       {[](RunConfig& c, const std::string&, const std::string& v) { c.model.n_apis = parse_n_apis(v); },
        [](const RunConfig& c) { return format_n_apis(c.model.n_apis); }}},
      {"lr", real_model(&nn::ModelConfig::lr)},
      {"batch_size", int_model(&nn::ModelConfig::batch_size)},
      {"max_epochs", int_model(&nn::ModelConfig::max_epochs)},
      {"patience", int_model(&nn::ModelConfig::patience)},
      {"use_api_context",
       {[](RunConfig& c, const std::string& k, const std::string& v) { c.model.use_api_context = parse_bool(k, v); },
        [](const RunConfig& c) { return std::string(c.model.use_api_context ? "true" : "false"); }}},
      {"clip_norm", real_model(&nn::ModelConfig::clip_norm)},
      {"init_range", real_model(&nn::ModelConfig::init_range)},
      {"src_vocab_size", int_model(&nn::ModelConfig::src_vocab)},
      {"tgt_vocab_size", int_model(&nn::ModelConfig::tgt_vocab)},
      {"min_freq", size_field(&RunConfig::min_freq)},
      {"max_code_tokens", size_field(&RunConfig::max_code_tokens)},
      {"max_comment_tokens", size_field(&RunConfig::max_comment_tokens)},
      {"max_ast_tokens", size_field(&RunConfig::max_ast_tokens)},
      {"max_desc_tokens", size_field(&RunConfig::max_desc_tokens)},
      {"max_def_tokens", size_field(&RunConfig::max_def_tokens)},
      {"sweep",
       {[](RunConfig& c, const std::string&, const std::string& v) {
          c.sweep.clear();
          std::stringstream ss(v);
          std::string item;
          while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) c.sweep.push_back(parse_n_apis(item));
          }
        },
        [](const RunConfig& c) {
          std::string out;
          for (std::size_t i = 0; i < c.sweep.size(); ++i) out += (i ? "," : "") + format_n_apis(c.sweep[i]);
          return out;
        }}},
      {"code_bin", size_field(&RunConfig::code_bin)},
      {"comment_bin", size_field(&RunConfig::comment_bin)},
      {"max_decode_len", size_field(&RunConfig::max_decode_len)},
  };
  return table;
}

const Field& field(const std::string& key) {
  for (const auto& [k, f] : fields()) {
    if (k == key) return f;
  }
  throw ValidationError("unknown config key: " + key);
}

}  // namespace

std::string format_n_apis(const std::optional<int>& n) { return n ? std::to_string(*n) : "all"; }

std::optional<int> parse_n_apis(const std::string& text) {
  if (text == "all") return std::nullopt;
  const int n = parse_number<int>("n_apis", text);
  if (n < 0) throw ValidationError("n_apis must be >= 0 or 'all'");
  return n;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, f] : fields()) k.push_back(name);
    return k;
  }();
  return keys;
}

text::ChannelCaps RunConfig::caps() const {
  text::ChannelCaps c;
  c.code = max_code_tokens;
  c.ast = max_ast_tokens;
  c.description = max_desc_tokens;
  c.definition = max_def_tokens;
  c.comment = max_comment_tokens;
  return c;
}

void RunConfig::set(const std::string& key, const std::string& value) { field(key).set(*this, key, trim(value)); }

std::string RunConfig::get(const std::string& key) const { return field(key).get(*this); }

std::vector<std::pair<std::string, std::string>> RunConfig::items() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, f] : fields()) out.emplace_back(k, f.get(*this));
  return out;
}

void RunConfig::validate() const {
  model.validate();
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("invalid config: ") + what);
  };
  need(max_code_tokens >= 1 && max_comment_tokens >= 1 && max_ast_tokens >= 1, "token caps must be >= 1");
  need(max_desc_tokens >= 1 && max_def_tokens >= 1, "API caps must be >= 1");
  need(min_freq >= 1, "min_freq must be >= 1");
  need(code_bin >= 1 && comment_bin >= 1, "report bins must be >= 1");
  need(max_decode_len >= 1, "max_decode_len must be >= 1");
}

void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ValidationError& e) {
      throw ValidationError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  RunConfig c;
  apply_config_text(c, text, origin);
  return c;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(util::read_text_file(path), path); }

}  // namespace codesum::pipeline
