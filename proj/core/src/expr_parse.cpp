#include <cctype>
#include <charconv>
#include <string>

#include "expr_internal.hpp"
#include "metallic/errors.hpp"
#include "metallic/expr.hpp"

namespace metallic {

namespace {

// Recursive descent over
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := unary ("^" factor)?
//   unary  := "-" unary | atom
//   atom   := number | ident | func "(" expr ")" | "(" expr ")"
class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  Expr run() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw ParseError(what, at);
  }

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

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = ExprFactory::raw(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = ExprFactory::raw(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = ExprFactory::raw(Op::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = ExprFactory::raw(Op::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    Expr base = unary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t at = pos_;
    const Expr exponent = factor();
    if (!exponent.is_closed()) fail_at("exponent must be constant", at);
    double k = 0.0;
    try {
      k = eval(exponent, {});
    } catch (const DomainError& err) {
      fail_at(std::string("invalid exponent: ") + err.what(), at);
    }
    return ExprFactory::raw(Op::Pow, base, Expr(k));
  }

  Expr unary() {
    if (accept('-')) return ExprFactory::raw(Op::Neg, unary());
    return atom();
  }

  Expr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t k = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++k;
      }
      return k;
    };
    std::size_t count = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) fail_at("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc() || ptr != text_.data() + pos_) fail_at("malformed number", start);
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);

    static constexpr std::pair<std::string_view, Op> kFunctions[] = {
        {"sin", Op::Sin},   {"cos", Op::Cos},   {"tan", Op::Tan},
        {"sinh", Op::Sinh}, {"cosh", Op::Cosh}, {"tanh", Op::Tanh},
        {"exp", Op::Exp},   {"log", Op::Log},   {"sqrt", Op::Sqrt},
    };
    for (const auto& [name, op] : kFunctions) {
      if (id == name) {
        expect('(');
        Expr inner = expr();
        expect(')');
        return ExprFactory::raw(op, inner);
      }
    }
    if (id == "pi" || id == "e") return Expr::named_constant(id);
    if (id.size() >= 2 && id[0] == 'x' &&
        id.substr(1).find_first_not_of("0123456789") == std::string_view::npos &&
        id[1] != '0') {
      int k = 0;
      std::from_chars(id.data() + 1, id.data() + id.size(), k);
      if (k < 1 || k > dim_)
        fail_at("coordinate " + std::string(id) + " out of range for dimension " +
                    std::to_string(dim_),
                start);
      return Expr::coord(k - 1);
    }
    fail_at("unknown identifier '" + std::string(id) + "'", start);
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, int dim) { return Parser(text, dim).run(); }

}  // namespace metallic
