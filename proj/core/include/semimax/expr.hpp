#pragma once

#include <memory>
#include <string>

#include "semimax/maxwell.hpp"

namespace semimax {

/// Minimal arithmetic expression over the coordinates x1, x2, x3:
/// numbers, + - * /, parentheses, unary minus, and the functions
/// exp, sin, cos, sqrt.  Parsed once into an AST with exact symbolic
/// derivatives.
class Expression {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  /// Throws std::invalid_argument on syntax errors.
  static Expression parse(const std::string& text);

  double eval(const Vec3& x) const;
  /// Symbolic partial derivative; cheap to call repeatedly.
  Expression derivative(int axis) const;

  std::string str() const;

  /// Coefficient field with the analytic gradient attached.
  ScalarField as_field() const;

 private:
  explicit Expression(NodePtr root) : root_(std::move(root)) {}
  NodePtr root_;
};

}  // namespace semimax
