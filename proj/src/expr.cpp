#include "opalg/expr.hpp"

#include <cctype>
#include <vector>

namespace opalg {

struct Expression::Node {
  enum class Kind { number, identifier, negate, add, sub, mul, div, pow } kind = Kind::number;
  Scalar value;
  std::string name;
  unsigned long exponent = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := '-' unary | power
// power  := atom ('^' integer)?
// atom   := integer | identifier | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view text, std::set<std::string>& ids) : text_(text), ids_(ids) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + std::string(text_) + "': " + what);
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (accept('+')) {
        lhs = make(Kind::add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Kind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (accept('*')) {
        lhs = make(Kind::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make(Kind::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::negate, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::pow;
    n->lhs = std::move(base);
    n->exponent = std::stoul(std::string(text_.substr(start, pos_ - start)));
    return n;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("missing ')'");
      return e;
    }
    auto n = std::make_shared<Expression::Node>();
    const std::size_t start = pos_;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      n->kind = Kind::number;
      n->value = Scalar(mpz_class(std::string(text_.substr(start, pos_ - start)), 10));
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      n->kind = Kind::identifier;
      n->name = std::string(text_.substr(start, pos_ - start));
      ids_.insert(n->name);
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::set<std::string>& ids_;
  std::size_t pos_ = 0;
};

Scalar eval(const Expression::Node& n, const Bindings& b, const std::string& text) {
  switch (n.kind) {
    case Kind::number:
      return n.value;
    case Kind::identifier: {
      auto it = b.find(n.name);
      if (it == b.end()) throw Error("expression '" + text + "': unbound parameter '" + n.name + "'");
      return it->second;
    }
    case Kind::negate:
      return -eval(*n.lhs, b, text);
    case Kind::add:
      return eval(*n.lhs, b, text) + eval(*n.rhs, b, text);
    case Kind::sub:
      return eval(*n.lhs, b, text) - eval(*n.rhs, b, text);
    case Kind::mul:
      return eval(*n.lhs, b, text) * eval(*n.rhs, b, text);
    case Kind::div: {
      const Scalar d = eval(*n.rhs, b, text);
      if (sgn(d) == 0) throw Error("expression '" + text + "': division by zero");
      return eval(*n.lhs, b, text) / d;
    }
    case Kind::pow: {
      const Scalar base = eval(*n.lhs, b, text);
      Scalar out = 1;
      mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), n.exponent);
      mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), n.exponent);
      return out;
    }
  }
  throw Error("corrupt expression");
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.text_ = std::string(text);
  e.root_ = Parser(text, e.identifiers_).parse();
  return e;
}

Expression Expression::constant(const Scalar& value) {
  Expression e;
  auto n = std::make_shared<Node>();
  n->value = value;
  e.root_ = n;
  e.text_ = to_string(value);
  return e;
}

Scalar Expression::evaluate(const Bindings& bindings) const { return eval(*root_, bindings, text_); }

}  // namespace opalg
