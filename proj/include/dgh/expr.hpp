#pragma once

#include <memory>
#include <string>
#include <vector>

namespace dgh {

/// Tiny arithmetic expression evaluator for boundary data and predicates.
/// Variables: X, Y, Z (position) and t (loading fraction); constants pi, e;
/// the usual operators (+ - * / ^, comparisons, && ||) and functions
/// (sin cos tan asin acos atan sinh cosh tanh exp log sqrt abs min max pow
/// step floor ceil atan2). Comparisons evaluate to 0/1.
class Expr {
public:
  Expr() = default;
  static Expr parse(const std::string& text);

  double eval(double X, double Y, double Z, double t) const;
  bool constant() const;  // no variable references
  const std::string& text() const { return text_; }
  bool uses_time() const { return uses_time_; }

private:
  struct Node;
  std::shared_ptr<const Node> root_;
  std::string text_;
  bool uses_time_ = false;
};

}  // namespace dgh
