#include "opalg/scalar.hpp"

#include <cctype>

#include "detail.hpp"

namespace opalg {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  if (!is_integer_literal(s)) throw ParseError("not a rational literal: '" + std::string(whole) + "'");
  if (s.front() == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

Scalar parse_scalar(std::string_view text) {
  const std::string_view s = detail::trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Scalar(parse_integer(s, text));
  const mpz_class num = parse_integer(s.substr(0, slash), text);
  const std::string_view den_text = s.substr(slash + 1);
  if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+')) {
    throw ParseError("sign not allowed in denominator: '" + std::string(text) + "'");
  }
  const mpz_class den = parse_integer(den_text, text);
  if (den == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Scalar& value) { return value.get_str(10); }

}  // namespace opalg
