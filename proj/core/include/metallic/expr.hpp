#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace metallic {

enum class Op : std::uint8_t {
  Const,
  Var,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Sin,
  Cos,
  Tan,
  Sinh,
  Cosh,
  Tanh,
  Exp,
  Log,
  Sqrt,
};

struct Node;

/// Immutable scalar expression over chart coordinates x1..xn.
///
/// Values share structure: copying an Expr copies a pointer, and every
/// operation returns a new tree that may reuse subtrees of its inputs. The
/// arithmetic operators fold constants and drop additive/multiplicative
/// identities as they build; `parse` does not, so parsed text keeps its shape
/// until `simplify` is called.
class Expr {
 public:
  Expr();  // the constant 0
  Expr(double value);  // NOLINT(google-explicit-constructor)

  static Expr constant(double value);
  static Expr named_constant(std::string_view name);  // "pi" or "e"
  /// Coordinate x_{index+1}; indices are 0-based throughout the C++ API.
  static Expr coord(int index);

  Op op() const;
  double value() const;  // Const only
  int index() const;  // Var only
  std::size_t arity() const;
  Expr arg(std::size_t i) const;
  const char* name() const;  // named constants, else nullptr

  bool is_constant() const { return op() == Op::Const; }
  bool is_zero() const;
  bool is_one() const;
  /// True when no coordinate appears anywhere in the tree.
  bool is_closed() const;

  const Node* id() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend struct ExprFactory;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

/// Power with a constant exponent; the only form the grammar admits.
Expr pow(const Expr& base, double exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tan(const Expr& a);
Expr sinh(const Expr& a);
Expr cosh(const Expr& a);
Expr tanh(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);

/// Parses `text` under the expression grammar with coordinates x1..x`dim`.
/// Throws ParseError with the byte offset of the first offending token.
Expr parse(std::string_view text, int dim);

/// Infix text that parses back to an expression with the same value
/// everywhere. Constants are printed with 17 significant digits.
std::string render(const Expr& e);

/// Evaluates `e` at `point`. Throws DomainError naming the offending subtree.
double eval(const Expr& e, std::span<const double> point);

/// Partial derivative with respect to coordinate `index` (0-based).
Expr diff(const Expr& e, int index);

/// Constant folding plus identity/annihilator removal. No canonicalization.
Expr simplify(const Expr& e);

/// Number of distinct nodes in the expression DAG.
std::size_t node_count(const Expr& e);

/// Largest coordinate index used, or -1 for closed expressions.
int max_coordinate(const Expr& e);

/// Evaluates many expressions at one point, sharing work across common
/// subtrees. Not thread-safe; create one per thread and point.
class Evaluator {
 public:
  explicit Evaluator(std::span<const double> point) : point_(point) {}

  double operator()(const Expr& e);
  std::span<const double> point() const { return point_; }

 private:
  double visit(const Node* n);

  std::span<const double> point_;
  std::unordered_map<const Node*, double> memo_;
  // Keeps every memoized node alive so addresses cannot be recycled.
  std::vector<Expr> roots_;
};

}  // namespace metallic
