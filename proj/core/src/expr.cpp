#include "semimax/expr.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace semimax {

struct Expression::Node {
  enum class Op { constant, coord, add, sub, mul, div, neg, exp, sin, cos, sqrt };
  Op op = Op::constant;
  double value = 0.0;
  int axis = 0;
  NodePtr a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;
using Op = Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr number(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = v;
  return n;
}

NodePtr coordinate(int axis) {
  auto n = std::make_shared<Node>();
  n->op = Op::coord;
  n->axis = axis;
  return n;
}

bool is_zero(const NodePtr& n) {
  return n->op == Op::constant && n->value == 0.0;
}
bool is_one(const NodePtr& n) {
  return n->op == Op::constant && n->value == 1.0;
}

// light simplification keeps derivative trees small
NodePtr add(NodePtr a, NodePtr b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  return make(Op::add, std::move(a), std::move(b));
}
NodePtr sub(NodePtr a, NodePtr b) {
  if (is_zero(b)) return a;
  return make(Op::sub, std::move(a), std::move(b));
}
NodePtr mul(NodePtr a, NodePtr b) {
  if (is_zero(a) || is_zero(b)) return number(0.0);
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  return make(Op::mul, std::move(a), std::move(b));
}
NodePtr divide(NodePtr a, NodePtr b) {
  if (is_zero(a)) return number(0.0);
  if (is_one(b)) return a;
  return make(Op::div, std::move(a), std::move(b));
}
NodePtr neg(NodePtr a) {
  if (is_zero(a)) return a;
  return make(Op::neg, std::move(a));
}

double eval_node(const Node& n, const Vec3& x) {
  switch (n.op) {
    case Op::constant:
      return n.value;
    case Op::coord:
      return x[n.axis];
    case Op::add:
      return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Op::sub:
      return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Op::mul:
      return eval_node(*n.a, x) * eval_node(*n.b, x);
    case Op::div:
      return eval_node(*n.a, x) / eval_node(*n.b, x);
    case Op::neg:
      return -eval_node(*n.a, x);
    case Op::exp:
      return std::exp(eval_node(*n.a, x));
    case Op::sin:
      return std::sin(eval_node(*n.a, x));
    case Op::cos:
      return std::cos(eval_node(*n.a, x));
    case Op::sqrt:
      return std::sqrt(eval_node(*n.a, x));
  }
  return 0.0;
}

NodePtr diff_node(const NodePtr& n, int axis) {
  switch (n->op) {
    case Op::constant:
      return number(0.0);
    case Op::coord:
      return number(n->axis == axis ? 1.0 : 0.0);
    case Op::add:
      return add(diff_node(n->a, axis), diff_node(n->b, axis));
    case Op::sub:
      return sub(diff_node(n->a, axis), diff_node(n->b, axis));
    case Op::mul:
      return add(mul(diff_node(n->a, axis), n->b), mul(n->a, diff_node(n->b, axis)));
    case Op::div:
      // (a/b)' = a'/b - a b'/b^2
      return sub(divide(diff_node(n->a, axis), n->b),
                 divide(mul(n->a, diff_node(n->b, axis)), mul(n->b, n->b)));
    case Op::neg:
      return neg(diff_node(n->a, axis));
    case Op::exp:
      return mul(make(Op::exp, n->a), diff_node(n->a, axis));
    case Op::sin:
      return mul(make(Op::cos, n->a), diff_node(n->a, axis));
    case Op::cos:
      return neg(mul(make(Op::sin, n->a), diff_node(n->a, axis)));
    case Op::sqrt:
      return divide(diff_node(n->a, axis), mul(number(2.0), make(Op::sqrt, n->a)));
  }
  return number(0.0);
}

std::string str_node(const Node& n) {
  switch (n.op) {
    case Op::constant: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", n.value);
      return buf;
    }
    case Op::coord:
      return "x" + std::to_string(n.axis + 1);
    case Op::add:
      return "(" + str_node(*n.a) + " + " + str_node(*n.b) + ")";
    case Op::sub:
      return "(" + str_node(*n.a) + " - " + str_node(*n.b) + ")";
    case Op::mul:
      return "(" + str_node(*n.a) + " * " + str_node(*n.b) + ")";
    case Op::div:
      return "(" + str_node(*n.a) + " / " + str_node(*n.b) + ")";
    case Op::neg:
      return "(-" + str_node(*n.a) + ")";
    case Op::exp:
      return "exp(" + str_node(*n.a) + ")";
    case Op::sin:
      return "sin(" + str_node(*n.a) + ")";
    case Op::cos:
      return "cos(" + str_node(*n.a) + ")";
    case Op::sqrt:
      return "sqrt(" + str_node(*n.a) + ")";
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size())
      throw std::invalid_argument("expression: trailing input at '" +
                                  text_.substr(pos_) + "'");
    return e;
  }

 private:
  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      if (consume('+'))
        lhs = make(Op::add, lhs, term());
      else if (consume('-'))
        lhs = make(Op::sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      skip_ws();
      if (consume('*'))
        lhs = make(Op::mul, lhs, factor());
      else if (consume('/'))
        lhs = make(Op::div, lhs, factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    skip_ws();
    if (consume('-')) return neg(factor());
    if (consume('+')) return factor();
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    if (consume('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (pos_ < text_.size() &&
        (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      std::size_t used = 0;
      const double v = std::stod(text_.substr(pos_), &used);
      pos_ += used;
      return number(v);
    }
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_]))))
        name += text_[pos_++];
      if (name == "x1" || name == "x2" || name == "x3")
        return coordinate(name[1] - '1');
      Op op;
      if (name == "exp")
        op = Op::exp;
      else if (name == "sin")
        op = Op::sin;
      else if (name == "cos")
        op = Op::cos;
      else if (name == "sqrt")
        op = Op::sqrt;
      else
        throw std::invalid_argument("expression: unknown identifier '" + name + "'");
      expect('(');
      NodePtr arg = expr();
      expect(')');
      return make(op, arg);
    }
    throw std::invalid_argument("expression: unexpected input at position " +
                                std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c))
      throw std::invalid_argument(std::string("expression: expected '") + c + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  return Expression(Parser(text).run());
}

double Expression::eval(const Vec3& x) const { return eval_node(*root_, x); }

Expression Expression::derivative(int axis) const {
  if (axis < 0 || axis > 2)
    throw std::invalid_argument("Expression::derivative: bad axis");
  return Expression(diff_node(root_, axis));
}

std::string Expression::str() const { return str_node(*root_); }

ScalarField Expression::as_field() const {
  const Expression dx = derivative(0);
  const Expression dy = derivative(1);
  const Expression dz = derivative(2);
  auto root = root_;
  return ScalarField(
      [root](const Vec3& x) { return eval_node(*root, x); },
      [dx, dy, dz](const Vec3& x) {
        return Vec3(dx.eval(x), dy.eval(x), dz.eval(x));
      });
}

}  // namespace semimax
