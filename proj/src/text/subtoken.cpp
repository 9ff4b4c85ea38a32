// SPDX-License-Identifier: Apache-2.0
#include "codesum/text/subtoken.hpp"

namespace codesum::text {
namespace {

enum class CharClass { Upper, Lower, Digit, Other };

CharClass classify(unsigned char c) {
  if (c >= 'A' && c <= 'Z') return CharClass::Upper;
  if (c >= 'a' && c <= 'z') return CharClass::Lower;
  if (c >= '0' && c <= '9') return CharClass::Digit;
  return CharClass::Other;  // non-ASCII byte, behaves like a caseless letter
}

bool is_letter(CharClass k) { return k != CharClass::Digit; }

void split_word(std::string_view word, std::vector<std::string>& out) {
  std::size_t start = 0;
  for (std::size_t i = 1; i < word.size(); ++i) {
    const CharClass prev = classify(static_cast<unsigned char>(word[i - 1]));
    const CharClass cur = classify(static_cast<unsigned char>(word[i]));
    bool boundary = false;
    if (is_letter(prev) != is_letter(cur)) {
      boundary = true;
    } else if (prev == CharClass::Lower && cur == CharClass::Upper) {
      boundary = true;
    } else if (prev == CharClass::Upper && cur == CharClass::Upper && i + 1 < word.size() &&
               classify(static_cast<unsigned char>(word[i + 1])) == CharClass::Lower) {
      // last capital of an acronym run starts the next word: HTTPServer -> HTTP|Server
      boundary = true;
    }
    if (boundary) {
      out.push_back(to_lower_ascii(word.substr(start, i - start)));
      start = i;
    }
  }
  if (start < word.size()) out.push_back(to_lower_ascii(word.substr(start)));
}

}  // namespace

bool is_separator_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 33 && u <= 47) || (u >= 58 && u <= 64) || (u >= 91 && u <= 96) ||
         (u >= 123 && u <= 126);
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string> subtoken_split(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c <= 32 || c == 127 || is_separator_punct(static_cast<char>(c))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size()) {
      const unsigned char d = static_cast<unsigned char>(text[j]);
      if (d <= 32 || d == 127 || is_separator_punct(static_cast<char>(d))) break;
      ++j;
    }
    split_word(text.substr(i, j - i), out);
    i = j;
  }
  return out;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

}  // namespace codesum::text
