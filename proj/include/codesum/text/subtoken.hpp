// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace codesum::text {

/// Splits identifiers and free text into lowercase sub-tokens.
///
/// Separators are whitespace, every ASCII punctuation character and the
/// underscore. Inside a word, splits happen at lower->upper transitions
/// (`createNew` -> create|new), at the end of an acronym run
/// (`HTTPServer` -> http|server) and at letter/digit boundaries
/// (`Server2x` -> server|2|x). Non-ASCII bytes are kept and treated as
/// caseless letters. The result never contains empty tokens.
std::vector<std::string> subtoken_split(std::string_view text);

/// True for the characters removed as punctuation (ASCII punctuation, including '_').
bool is_separator_punct(char c);

std::string to_lower_ascii(std::string_view s);

/// Joins tokens with single spaces.
std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

}  // namespace codesum::text
