#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lightcone/jet.hpp"

namespace lightcone {

/// Immutable arithmetic expression over variables x_first .. x_{first+arity-1}.
///
/// Grammar (whitespace-insensitive):
///
///     expr    = term { ("+" | "-") term } ;
///     term    = power { ("*" | "/") power } ;
///     power   = unary [ "^" power ] ;
///     unary   = ("-" | "+") unary | primary ;
///     primary = number | variable | constant | func "(" expr ")" | "(" expr ")" ;
///     func    = "exp" | "log" | "sqrt" | "sin" | "cos" | "tanh" ;
///     variable= "x" digits | "x_" digits | "xn" ;
///     constant= "pi" | "e" ;
///
/// Unary minus binds tighter than "^", so "-x1^2" is (-x1)^2. An exponent
/// that is an integer literal (optionally negated) is evaluated by repeated
/// multiplication; any other exponent is routed through exp(rhs * log(lhs)).
class Expression {
 public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, IntPow, Pow, Exp, Log, Sqrt, Sin, Cos, Tanh };

  struct Node {
    Kind kind;
    double value = 0.0;   // Const
    int var = 0;          // Var: 0-based slot
    long exponent = 0;    // IntPow
    std::vector<std::shared_ptr<const Node>> args;
  };

  /// Parses `text` with variables named x_first .. x_{first+arity-1}; "xn"
  /// names the variable with the highest index.
  static Expression parse(std::string_view text, int arity, int first_index = 1);

  static Expression constant(double value, int arity, int first_index = 1);
  /// `slot` is 0-based, i.e. the variable named x_{first_index + slot}.
  static Expression variable(int slot, int arity, int first_index = 1);

  int arity() const { return arity_; }
  int first_index() const { return first_index_; }
  const Node& root() const { return *root_; }

  /// True when the expression contains no variable and evaluates; `value`
  /// receives the constant.
  bool is_constant(double* value = nullptr) const;

  /// Structural dump, e.g. "Add(Var 1, Const 2)". Variables are shown with
  /// their user-facing index.
  std::string describe() const;
  /// Infix rendering, fully parenthesized.
  std::string to_string() const;

  double evaluate(std::span<const double> point) const;
  /// Evaluates with jets as inputs (one per variable); this is function
  /// composition in truncated Taylor arithmetic.
  Jet3 evaluate(std::span<const Jet3> inputs) const;

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);

 private:
  Expression(std::shared_ptr<const Node> root, int arity, int first_index)
      : root_(std::move(root)), arity_(arity), first_index_(first_index) {}

  std::shared_ptr<const Node> root_;
  int arity_ = 1;
  int first_index_ = 1;
};

/// Value and all partial derivatives through order 3 at `point`.
Jet3 eval_jet3(const Expression& e, std::span<const double> point, int order = Jet3::kMaxOrder);

}  // namespace lightcone
