#pragma once

// Small helpers shared by the library sources; not part of the public API.

#include <string>
#include <string_view>
#include <vector>

namespace opalg::detail {

/// "name(a, b)" -> {"name", {"a", "b"}}; "name" -> {"name", {}}.
struct CallSyntax {
  std::string name;
  std::vector<std::string> args;
};

CallSyntax split_call(std::string_view text);

std::string_view trim(std::string_view s);

/// 64-bit FNV-1a over the parts (each terminated by a separator byte), hex.
std::string fnv1a_hex(const std::vector<std::string>& parts);

}  // namespace opalg::detail
