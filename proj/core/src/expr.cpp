#include "metallic/expr.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <unordered_set>
#include <vector>

#include "expr_internal.hpp"
#include "metallic/errors.hpp"

namespace metallic {

namespace {

std::shared_ptr<const Node> make_const(double v, const char* name = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  n->name = name;
  return n;
}

const std::shared_ptr<const Node>& zero_node() {
  static const auto z = make_const(0.0);
  return z;
}

bool integral(double x) { return std::floor(x) == x; }

}  // namespace

const char* op_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Sinh: return "sinh";
    case Op::Cosh: return "cosh";
    case Op::Tanh: return "tanh";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    default: return "?";
  }
}

Expr ExprFactory::raw(Op op, const Expr& a, const Expr& b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = a.node_;
  n->max_coord = a.node_->max_coord;
  if (is_binary(op)) {
    n->b = b.node_;
    n->max_coord = std::max(n->max_coord, b.node_->max_coord);
  }
  return Expr(std::move(n));
}

Expr::Expr() : node_(zero_node()) {}
Expr::Expr(double value) : node_(value == 0.0 ? zero_node() : make_const(value)) {}

Expr Expr::constant(double value) { return Expr(value); }

Expr Expr::named_constant(std::string_view name) {
  if (name == "pi") return Expr(make_const(std::numbers::pi, "pi"));
  if (name == "e") return Expr(make_const(std::numbers::e, "e"));
  throw Error("unknown named constant '" + std::string(name) + "'");
}

Expr Expr::coord(int index) {
  if (index < 0) throw ShapeError("negative coordinate index");
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->index = index;
  n->max_coord = index;
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
int Expr::index() const { return node_->index; }
const char* Expr::name() const { return node_->name; }

std::size_t Expr::arity() const {
  if (node_->b) return 2;
  if (node_->a) return 1;
  return 0;
}

Expr Expr::arg(std::size_t i) const {
  return Expr(i == 0 ? node_->a : node_->b);
}

bool Expr::is_zero() const { return node_->op == Op::Const && node_->value == 0.0; }
bool Expr::is_one() const { return node_->op == Op::Const && node_->value == 1.0; }
bool Expr::is_closed() const { return node_->max_coord < 0; }

// --- folding constructors -------------------------------------------------

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() + b.value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return ExprFactory::raw(Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() - b.value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return ExprFactory::raw(Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_constant() && a.value() == -1.0) return -b;
  if (b.is_constant() && b.value() == -1.0) return -a;
  return ExprFactory::raw(Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.value() != 0.0)
    return Expr(a.value() / b.value());
  if (a.is_zero() && !b.is_zero()) return Expr();
  if (b.is_one()) return a;
  return ExprFactory::raw(Op::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(-a.value());
  if (a.op() == Op::Neg) return a.arg(0);
  return ExprFactory::raw(Op::Neg, a);
}

Expr pow(const Expr& base, double exponent) {
  if (exponent == 0.0) return Expr(1.0);
  if (exponent == 1.0) return base;
  if (base.is_constant()) {
    const double b = base.value();
    const bool ok = !(b < 0.0 && !integral(exponent)) && !(b == 0.0 && exponent < 0.0);
    if (ok) return Expr(std::pow(b, exponent));
  }
  return ExprFactory::raw(Op::Pow, base, Expr(exponent));
}

namespace {

bool in_domain(Op op, double x) {
  switch (op) {
    case Op::Log: return x > 0.0;
    case Op::Sqrt: return x >= 0.0;
    default: return true;
  }
}

double apply_function(Op op, double x) {
  switch (op) {
    case Op::Sin: return std::sin(x);
    case Op::Cos: return std::cos(x);
    case Op::Tan: return std::tan(x);
    case Op::Sinh: return std::sinh(x);
    case Op::Cosh: return std::cosh(x);
    case Op::Tanh: return std::tanh(x);
    case Op::Exp: return std::exp(x);
    case Op::Log: return std::log(x);
    case Op::Sqrt: return std::sqrt(x);
    default: return x;
  }
}

Expr function(Op op, const Expr& a) {
  if (a.is_constant() && in_domain(op, a.value())) {
    const double v = apply_function(op, a.value());
    if (std::isfinite(v)) return Expr(v);
  }
  return ExprFactory::raw(op, a);
}

}  // namespace

Expr sin(const Expr& a) { return function(Op::Sin, a); }
Expr cos(const Expr& a) { return function(Op::Cos, a); }
Expr tan(const Expr& a) { return function(Op::Tan, a); }
Expr sinh(const Expr& a) { return function(Op::Sinh, a); }
Expr cosh(const Expr& a) { return function(Op::Cosh, a); }
Expr tanh(const Expr& a) { return function(Op::Tanh, a); }
Expr exp(const Expr& a) { return function(Op::Exp, a); }
Expr log(const Expr& a) { return function(Op::Log, a); }
Expr sqrt(const Expr& a) { return function(Op::Sqrt, a); }

// --- rendering ------------------------------------------------------------

namespace {

int precedence(const Node* n) {
  switch (n->op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return (n->value < 0.0 && !n->name) ? 0 : 5;
    default: return 5;
  }
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void render_into(const Node* n, std::string& out);

void render_child(const Node* child, bool parens, std::string& out) {
  if (parens) out += '(';
  render_into(child, out);
  if (parens) out += ')';
}

void render_into(const Node* n, std::string& out) {
  switch (n->op) {
    case Op::Const:
      if (n->name) {
        out += n->name;
      } else if (n->value < 0.0) {
        out += '(' + number(n->value) + ')';
      } else {
        out += number(n->value);
      }
      return;
    case Op::Var:
      out += 'x' + std::to_string(n->index + 1);
      return;
    case Op::Neg:
      out += '-';
      // unary minus binds tighter than '^' in the grammar
      render_child(n->a.get(), precedence(n->a.get()) < 5, out);
      return;
    case Op::Pow:
      render_child(n->a.get(), precedence(n->a.get()) < 5, out);
      out += '^';
      render_child(n->b.get(), precedence(n->b.get()) < 5, out);
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const int p = precedence(n);
      const bool assoc = n->op == Op::Add || n->op == Op::Mul;
      render_child(n->a.get(), precedence(n->a.get()) < p, out);
      out += n->op == Op::Add ? " + " : n->op == Op::Sub ? " - " : n->op == Op::Mul ? "*" : "/";
      const int q = precedence(n->b.get());
      render_child(n->b.get(), assoc ? q < p : q <= p, out);
      return;
    }
    default:
      out += op_name(n->op);
      out += '(';
      render_into(n->a.get(), out);
      out += ')';
      return;
  }
}

std::string short_render(const Node* n) {
  std::string s;
  render_into(n, s);
  if (s.size() > 160) s = s.substr(0, 157) + "...";
  return s;
}

}  // namespace

std::string render(const Expr& e) {
  std::string s;
  render_into(e.id(), s);
  return s;
}

// --- evaluation -----------------------------------------------------------

double Evaluator::operator()(const Expr& e) {
  if (e.arity() > 0) roots_.push_back(e);
  return visit(e.id());
}

double Evaluator::visit(const Node* n) {
  if (n->op == Op::Const) return n->value;
  if (n->op == Op::Var) {
    if (static_cast<std::size_t>(n->index) >= point_.size())
      throw ShapeError("coordinate x" + std::to_string(n->index + 1) +
                       " outside a point of dimension " + std::to_string(point_.size()));
    return point_[static_cast<std::size_t>(n->index)];
  }
  if (auto it = memo_.find(n); it != memo_.end()) return it->second;

  const double a = visit(n->a.get());
  double r = 0.0;
  switch (n->op) {
    case Op::Neg: r = -a; break;
    case Op::Add: r = a + visit(n->b.get()); break;
    case Op::Sub: r = a - visit(n->b.get()); break;
    case Op::Mul: r = a * visit(n->b.get()); break;
    case Op::Div: {
      const double b = visit(n->b.get());
      if (b == 0.0) throw DomainError("division by zero", short_render(n));
      r = a / b;
      break;
    }
    case Op::Pow: {
      const double k = n->b->value;
      if (a < 0.0 && !integral(k))
        throw DomainError("negative base with non-integer exponent", short_render(n));
      if (a == 0.0 && k < 0.0)
        throw DomainError("zero base with negative exponent", short_render(n));
      r = std::pow(a, k);
      break;
    }
    default:
      if (!in_domain(n->op, a))
        throw DomainError(std::string(op_name(n->op)) + " of invalid argument", short_render(n));
      r = apply_function(n->op, a);
      break;
  }
  if (!std::isfinite(r)) throw DomainError("non-finite result", short_render(n));
  memo_.emplace(n, r);
  return r;
}

double eval(const Expr& e, std::span<const double> point) {
  Evaluator ev(point);
  return ev(e);
}

// --- differentiation ------------------------------------------------------

namespace {

class Differentiator {
 public:
  explicit Differentiator(int index) : index_(index) {}

  Expr operator()(const Expr& e) {
    const Node* n = e.id();
    if (n->max_coord < index_) return Expr();
    if (n->op == Op::Var) return Expr(n->index == index_ ? 1.0 : 0.0);
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;

    const Expr a = e.arg(0);
    const Expr da = (*this)(a);
    Expr r;
    switch (n->op) {
      case Op::Neg: r = -da; break;
      case Op::Add: r = da + (*this)(e.arg(1)); break;
      case Op::Sub: r = da - (*this)(e.arg(1)); break;
      case Op::Mul: {
        const Expr b = e.arg(1);
        r = da * b + a * (*this)(b);
        break;
      }
      case Op::Div: {
        const Expr b = e.arg(1);
        const Expr db = (*this)(b);
        r = db.is_zero() ? da / b : (da * b - a * db) / pow(b, 2.0);
        break;
      }
      case Op::Pow: {
        const double k = e.arg(1).value();
        r = Expr(k) * pow(a, k - 1.0) * da;
        break;
      }
      case Op::Sin: r = cos(a) * da; break;
      case Op::Cos: r = -(sin(a) * da); break;
      case Op::Tan: r = da / pow(cos(a), 2.0); break;
      case Op::Sinh: r = cosh(a) * da; break;
      case Op::Cosh: r = sinh(a) * da; break;
      case Op::Tanh: r = da / pow(cosh(a), 2.0); break;
      case Op::Exp: r = e * da; break;
      case Op::Log: r = da / a; break;
      case Op::Sqrt: r = da / (Expr(2.0) * e); break;
      default: break;
    }
    memo_.emplace(n, r);
    return r;
  }

 private:
  int index_;
  std::unordered_map<const Node*, Expr> memo_;
};

}  // namespace

Expr diff(const Expr& e, int index) {
  if (index < 0) throw ShapeError("negative coordinate index");
  return Differentiator(index)(e);
}

// --- simplification -------------------------------------------------------

namespace {

class Simplifier {
 public:
  Expr operator()(const Expr& e) {
    const Node* n = e.id();
    if (n->op == Op::Const || n->op == Op::Var) return e;
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    const Expr a = (*this)(e.arg(0));
    Expr r;
    switch (n->op) {
      case Op::Neg: r = -a; break;
      case Op::Add: r = a + (*this)(e.arg(1)); break;
      case Op::Sub: r = a - (*this)(e.arg(1)); break;
      case Op::Mul: r = a * (*this)(e.arg(1)); break;
      case Op::Div: r = a / (*this)(e.arg(1)); break;
      case Op::Pow: r = pow(a, e.arg(1).value()); break;
      default: r = function(n->op, a); break;
    }
    memo_.emplace(n, r);
    return r;
  }

 private:
  std::unordered_map<const Node*, Expr> memo_;
};

}  // namespace

Expr simplify(const Expr& e) { return Simplifier()(e); }

std::size_t node_count(const Expr& e) {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{e.id()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    if (n->a) stack.push_back(n->a.get());
    if (n->b) stack.push_back(n->b.get());
  }
  return seen.size();
}

int max_coordinate(const Expr& e) { return e.id()->max_coord; }

}  // namespace metallic
