// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <fstream>
#include <sstream>

#include "codesum/errors.hpp"
#include "codesum/util/hash.hpp"
#include "codesum/util/jsonl.hpp"

namespace codesum::util {

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string Fnv1a::hex() const { return to_hex(state_); }

std::uint64_t hash_file(const std::string& path) { return fnv1a(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
  if (!out) throw IoError("write failed for " + path);
}

std::vector<LineError> read_jsonl(const std::string& path,
                                  const std::function<void(const nlohmann::json&)>& on_object) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<LineError> errors;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      auto obj = nlohmann::json::parse(line);
      if (!obj.is_object()) throw ValidationError("line is not a JSON object");
      on_object(obj);
    } catch (const std::exception& e) {
      errors.push_back({lineno, e.what()});
    }
  }
  return errors;
}

std::vector<nlohmann::json> read_jsonl_strict(const std::string& path) {
  std::vector<nlohmann::json> out;
  auto errors = read_jsonl(path, [&](const nlohmann::json& j) { out.push_back(j); });
  if (!errors.empty()) {
    throw ValidationError(path + ":" + std::to_string(errors.front().line) + ": " +
                          errors.front().message);
  }
  return out;
}

void write_jsonl(const std::string& path, const std::vector<nlohmann::json>& objects) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& obj : objects) out << obj.dump() << '\n';
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace codesum::util
