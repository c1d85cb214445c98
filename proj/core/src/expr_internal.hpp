#pragma once

#include <memory>

#include "metallic/expr.hpp"

namespace metallic {

struct Node {
  Op op = Op::Const;
  double value = 0.0;
  int index = -1;
  const char* name = nullptr;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
  int max_coord = -1;
};

constexpr bool is_function(Op op) { return op >= Op::Sin; }
constexpr bool is_binary(Op op) {
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div ||
         op == Op::Pow;
}

struct ExprFactory {
  static Expr wrap(std::shared_ptr<const Node> n) { return Expr(std::move(n)); }
  static const std::shared_ptr<const Node>& ptr(const Expr& e) { return e.node_; }

  /// Builds a node without any folding.
  static Expr raw(Op op, const Expr& a, const Expr& b = Expr());
};

const char* op_name(Op op);

}  // namespace metallic
