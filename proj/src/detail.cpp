#include "detail.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>

#include "opalg/scalar.hpp"

namespace opalg::detail {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

CallSyntax split_call(std::string_view text) {
  text = trim(text);
  CallSyntax call;
  const auto open = text.find('(');
  if (open == std::string_view::npos) {
    call.name = std::string(text);
  } else {
    if (text.back() != ')') throw ParseError("missing ')' in '" + std::string(text) + "'");
    call.name = std::string(trim(text.substr(0, open)));
    std::string_view inner = text.substr(open + 1, text.size() - open - 2);
    // Split on top-level commas so arguments may contain parenthesized
    // expressions.
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= inner.size(); ++i) {
      if (i == inner.size() || (inner[i] == ',' && depth == 0)) {
        const auto arg = trim(inner.substr(start, i - start));
        if (arg.empty()) throw ParseError("empty argument in '" + std::string(text) + "'");
        call.args.emplace_back(arg);
        start = i + 1;
      } else if (inner[i] == '(') {
        ++depth;
      } else if (inner[i] == ')') {
        --depth;
      }
    }
  }
  if (call.name.empty()) throw ParseError("missing name in '" + std::string(text) + "'");
  return call;
}

std::string fnv1a_hex(const std::vector<std::string>& parts) {
  std::uint64_t h = 1469598103934665603ULL;
  auto step = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ULL;
  };
  for (const auto& p : parts) {
    for (unsigned char c : p) step(c);
    step(0xff);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace opalg::detail
