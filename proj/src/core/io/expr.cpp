#include "core/io/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "core/support/error.hpp"

namespace semiflow {

namespace {

std::string at_pos(const std::string& text, size_t pos) {
  return "expression \"" + text + "\": position " + std::to_string(pos + 1);
}

}  // namespace

class ExprParser {
 public:
  ExprParser(const std::string& text, Expr& out) : text_(text), out_(out) {}

  void run() {
    out_.text_ = text_;
    out_.root_ = parse_sum();
    skip_ws();
    if (pos_ < text_.size())
      fail(ErrorCode::ConfigError,
           at_pos(text_, pos_) + ": unexpected '" + std::string(1, text_[pos_]) + "'");
    if (out_.root_ < 0)
      fail(ErrorCode::ConfigError, "expression \"" + text_ + "\": empty");
  }

 private:
  const std::string& text_;
  Expr& out_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int add(Expr::Node n) {
    out_.nodes_.push_back(n);
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  int parse_sum() {
    int lhs = parse_term();
    for (;;) {
      skip_ws();
      if (eat('+'))
        lhs = add({'+', 0.0, 0, lhs, parse_term()});
      else if (eat('-'))
        lhs = add({'-', 0.0, 0, lhs, parse_term()});
      else
        return lhs;
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      skip_ws();
      if (eat('*'))
        lhs = add({'*', 0.0, 0, lhs, parse_unary()});
      else if (eat('/'))
        lhs = add({'/', 0.0, 0, lhs, parse_unary()});
      else
        return lhs;
    }
  }

  // '^' binds tighter than unary minus, so -x^2 is -(x^2); the exponent
  // itself may carry a sign, so 2^-3 parses.
  int parse_unary() {
    if (eat('-')) return add({'n', 0.0, 0, parse_unary(), -1});
    return parse_power();
  }

  int parse_power() {
    int base = parse_primary();
    if (eat('^')) return add({'^', 0.0, 0, base, parse_unary()});
    return base;
  }

  int parse_primary() {
    skip_ws();
    if (pos_ >= text_.size())
      fail(ErrorCode::ConfigError, at_pos(text_, pos_) + ": expected a value");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_word();
    if (eat('(')) {
      int inner = parse_sum();
      if (!eat(')'))
        fail(ErrorCode::ConfigError, at_pos(text_, pos_) + ": expected ')'");
      return inner;
    }
    fail(ErrorCode::ConfigError,
         at_pos(text_, pos_) + ": unexpected '" + std::string(1, c) + "'");
  }

  int parse_number() {
    const char* start = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start)
      fail(ErrorCode::ConfigError, at_pos(text_, pos_) + ": bad number");
    pos_ += static_cast<size_t>(end - start);
    return add({'#', v, 0, -1, -1});
  }

  int parse_word() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalnum(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    std::string w = text_.substr(start, pos_ - start);
    if (w == "sin" || w == "cos" || w == "exp" || w == "abs") {
      if (!eat('('))
        fail(ErrorCode::ConfigError, at_pos(text_, pos_) + ": expected '(' after " + w);
      int arg = parse_sum();
      if (!eat(')'))
        fail(ErrorCode::ConfigError, at_pos(text_, pos_) + ": expected ')'");
      return add({w[0] == 's' ? 's' : w[0] == 'c' ? 'c' : w[0] == 'e' ? 'e' : 'a',
                  0.0, 0, arg, -1});
    }
    int coord = 0;
    if (w == "x" || w == "y" || w == "z") {
      coord = w == "x" ? 1 : w == "y" ? 2 : 3;
    } else if (w[0] == 'x' && w.size() > 1) {
      for (size_t i = 1; i < w.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(w[i])))
          fail(ErrorCode::ConfigError,
               at_pos(text_, start) + ": unknown name '" + w + "'");
        coord = coord * 10 + (w[i] - '0');
      }
      if (coord == 0)
        fail(ErrorCode::ConfigError,
             at_pos(text_, start) + ": coordinates are 1-based, 'x0' is not one");
    } else {
      fail(ErrorCode::ConfigError, at_pos(text_, start) + ": unknown name '" + w + "'");
    }
    if (coord > out_.max_coord_) out_.max_coord_ = coord;
    return add({'x', 0.0, coord, -1, -1});
  }
};

Expr Expr::parse(const std::string& text) {
  Expr e;
  ExprParser(text, e).run();
  return e;
}

double Expr::eval_node(int idx, const Vec& x) const {
  const Node& n = nodes_[static_cast<size_t>(idx)];
  switch (n.op) {
    case '#': return n.value;
    case 'x':
      if (n.coord > static_cast<int>(x.size()))
        fail(ErrorCode::BadParameter,
             "expression \"" + text_ + "\" reads coordinate x" +
                 std::to_string(n.coord) + " of a " +
                 std::to_string(x.size()) + "-dimensional point");
      return x[static_cast<size_t>(n.coord - 1)];
    case '+': return eval_node(n.a, x) + eval_node(n.b, x);
    case '-': return eval_node(n.a, x) - eval_node(n.b, x);
    case '*': return eval_node(n.a, x) * eval_node(n.b, x);
    case '/': return eval_node(n.a, x) / eval_node(n.b, x);
    case '^': return std::pow(eval_node(n.a, x), eval_node(n.b, x));
    case 'n': return -eval_node(n.a, x);
    case 's': return std::sin(eval_node(n.a, x));
    case 'c': return std::cos(eval_node(n.a, x));
    case 'e': return std::exp(eval_node(n.a, x));
    case 'a': return std::fabs(eval_node(n.a, x));
    default:
      fail(ErrorCode::Internal, "corrupt expression node");
  }
}

double Expr::eval(const Vec& x) const { return eval_node(root_, x); }

}  // namespace semiflow
