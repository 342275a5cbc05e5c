#pragma once

#include <string>
#include <vector>

#include "core/support/linalg.hpp"

namespace semiflow {

// Scalar expression over coordinates, parsed from config text. Supported:
// +, -, *, /, ^ (right associative), unary minus, sin, cos, exp, abs,
// decimal literals, parentheses, and coordinate references x1..xn with x,
// y, z as aliases for x1, x2, x3. Evaluation is plain IEEE arithmetic;
// overflow and division by zero are left to the surrounding domain checks.
class Expr {
 public:
  // Errors: ConfigError pointing at the offending character position.
  static Expr parse(const std::string& text);

  double eval(const Vec& x) const;
  // Highest coordinate index referenced, 1-based; 0 for constants.
  int max_coord() const { return max_coord_; }
  const std::string& text() const { return text_; }

 private:
  struct Node {
    char op = 0;  // '#' literal, 'x' coordinate, '+-*/^' binary,
                  // 'n' negate, 's' sin, 'c' cos, 'e' exp, 'a' abs
    double value = 0.0;
    int coord = 0;
    int a = -1;
    int b = -1;
  };
  std::vector<Node> nodes_;
  int root_ = -1;
  int max_coord_ = 0;
  std::string text_;

  double eval_node(int idx, const Vec& x) const;
  friend class ExprParser;
};

}  // namespace semiflow
