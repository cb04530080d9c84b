#include "dgh/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <map>

#include "dgh/errors.hpp"

namespace dgh {

struct Expr::Node {
  enum class Kind { Const, Var, Unary, Binary, Call } kind = Kind::Const;
  double value = 0;
  int var = 0;  // 0..3 -> X,Y,Z,t
  char op = 0;  // for Unary ('-') and Binary; comparisons use tokens below
  std::string name;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Node = Expr::Node;

struct Parser {
  const std::string& s;
  size_t pos = 0;
  bool uses_time = false;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return pos < s.size() ? s[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) {
    throw config_error("expression error at position " + std::to_string(pos) + ": " + what +
                       " in '" + s + "'");
  }

  NodePtr make_binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  // or := and ('||' and)*
  NodePtr parse_or() {
    NodePtr a = parse_and();
    while (eat("||")) a = make_binary('|', a, parse_and());
    return a;
  }
  NodePtr parse_and() {
    NodePtr a = parse_cmp();
    while (eat("&&")) a = make_binary('&', a, parse_cmp());
    return a;
  }
  NodePtr parse_cmp() {
    NodePtr a = parse_sum();
    for (;;) {
      if (eat("<=")) a = make_binary('l', a, parse_sum());
      else if (eat(">=")) a = make_binary('g', a, parse_sum());
      else if (eat("==")) a = make_binary('e', a, parse_sum());
      else if (eat("!=")) a = make_binary('n', a, parse_sum());
      else if (peek() == '<' && s.compare(pos, 2, "<<") != 0) { ++pos; a = make_binary('<', a, parse_sum()); }
      else if (peek() == '>') { ++pos; a = make_binary('>', a, parse_sum()); }
      else return a;
    }
  }
  NodePtr parse_sum() {
    NodePtr a = parse_term();
    for (;;) {
      if (eat("+")) a = make_binary('+', a, parse_term());
      else if (peek() == '-') { ++pos; a = make_binary('-', a, parse_term()); }
      else return a;
    }
  }
  NodePtr parse_term() {
    NodePtr a = parse_unary();
    for (;;) {
      if (eat("*")) a = make_binary('*', a, parse_unary());
      else if (eat("/")) a = make_binary('/', a, parse_unary());
      else return a;
    }
  }
  NodePtr parse_unary() {
    if (eat("-")) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Unary;
      n->op = '-';
      n->args = {parse_unary()};
      return n;
    }
    eat("+");
    return parse_power();
  }
  NodePtr parse_power() {
    NodePtr a = parse_primary();
    if (eat("^")) return make_binary('^', a, parse_unary());  // right associative
    return a;
  }
  NodePtr parse_primary() {
    skip();
    if (pos >= s.size()) fail("unexpected end of input");
    const char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t end = 0;
      const double v = std::stod(s.substr(pos), &end);
      pos += end;
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (c == '(') {
      ++pos;
      NodePtr a = parse_or();
      if (!eat(")")) fail("expected ')'");
      return a;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t end = pos;
      while (end < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_'))
        ++end;
      std::string name = s.substr(pos, end - pos);
      pos = end;
      skip();
      if (pos < s.size() && s[pos] == '(') {
        ++pos;
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Call;
        n->name = name;
        if (peek() != ')') {
          n->args.push_back(parse_or());
          while (eat(",")) n->args.push_back(parse_or());
        }
        if (!eat(")")) fail("expected ')' after call arguments");
        return n;
      }
      auto n = std::make_shared<Node>();
      if (name == "pi") { n->value = M_PI; return n; }
      if (name == "e") { n->value = M_E; return n; }
      n->kind = Node::Kind::Var;
      if (name == "X" || name == "x") n->var = 0;
      else if (name == "Y" || name == "y") n->var = 1;
      else if (name == "Z" || name == "z") n->var = 2;
      else if (name == "t") { n->var = 3; uses_time = true; }
      else fail("unknown identifier '" + name + "'");
      return n;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

double eval_node(const Node& n, const double* vars) {
  switch (n.kind) {
    case Node::Kind::Const: return n.value;
    case Node::Kind::Var: return vars[n.var];
    case Node::Kind::Unary: return -eval_node(*n.args[0], vars);
    case Node::Kind::Binary: {
      const double a = eval_node(*n.args[0], vars);
      const double b = eval_node(*n.args[1], vars);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
        case '<': return a < b ? 1 : 0;
        case '>': return a > b ? 1 : 0;
        case 'l': return a <= b ? 1 : 0;
        case 'g': return a >= b ? 1 : 0;
        case 'e': return a == b ? 1 : 0;
        case 'n': return a != b ? 1 : 0;
        case '&': return (a != 0 && b != 0) ? 1 : 0;
        case '|': return (a != 0 || b != 0) ? 1 : 0;
      }
      return 0;
    }
    case Node::Kind::Call: {
      auto arg = [&](size_t i) { return eval_node(*n.args[i], vars); };
      const size_t na = n.args.size();
      if (n.name == "sin" && na == 1) return std::sin(arg(0));
      if (n.name == "cos" && na == 1) return std::cos(arg(0));
      if (n.name == "tan" && na == 1) return std::tan(arg(0));
      if (n.name == "asin" && na == 1) return std::asin(arg(0));
      if (n.name == "acos" && na == 1) return std::acos(arg(0));
      if (n.name == "atan" && na == 1) return std::atan(arg(0));
      if (n.name == "atan2" && na == 2) return std::atan2(arg(0), arg(1));
      if (n.name == "sinh" && na == 1) return std::sinh(arg(0));
      if (n.name == "cosh" && na == 1) return std::cosh(arg(0));
      if (n.name == "tanh" && na == 1) return std::tanh(arg(0));
      if (n.name == "exp" && na == 1) return std::exp(arg(0));
      if (n.name == "log" && na == 1) return std::log(arg(0));
      if (n.name == "sqrt" && na == 1) return std::sqrt(arg(0));
      if (n.name == "abs" && na == 1) return std::abs(arg(0));
      if (n.name == "floor" && na == 1) return std::floor(arg(0));
      if (n.name == "ceil" && na == 1) return std::ceil(arg(0));
      if (n.name == "step" && na == 1) return arg(0) >= 0 ? 1 : 0;
      if (n.name == "min" && na == 2) return std::min(arg(0), arg(1));
      if (n.name == "max" && na == 2) return std::max(arg(0), arg(1));
      if (n.name == "pow" && na == 2) return std::pow(arg(0), arg(1));
      throw config_error("unknown function '" + n.name + "' with " +
                         std::to_string(na) + " argument(s)");
    }
  }
  return 0;
}

bool node_constant(const Node& n) {
  if (n.kind == Node::Kind::Var) return false;
  for (const auto& a : n.args)
    if (!node_constant(*a)) return false;
  return true;
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Parser p(text);
  Expr e;
  e.root_ = p.parse_or();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  e.text_ = text;
  e.uses_time_ = p.uses_time;
  return e;
}

double Expr::eval(double X, double Y, double Z, double t) const {
  if (!root_) return 0;
  const double vars[4] = {X, Y, Z, t};
  return eval_node(*root_, vars);
}

bool Expr::constant() const { return root_ ? node_constant(*root_) : true; }

}  // namespace dgh
