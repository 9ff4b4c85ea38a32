// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace codesum {

/// One formal parameter: declared type text and name.
struct ParamDecl {
  std::string type;
  std::string name;
  bool operator==(const ParamDecl&) const = default;
};

/// Drops every `<...>` group: `Map<K, List<V>>` -> `Map`, `List<String>[]` -> `List[]`.
std::string strip_generics(const std::string& type_text);

}  // namespace codesum
