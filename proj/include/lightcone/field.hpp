#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lightcone/expression.hpp"
#include "lightcone/jet.hpp"

namespace lightcone {

/// A scalar function on R^arity that can be composed with jets. Graph
/// functions and weights are held through this interface so that both parsed
/// expressions and implicitly defined functions (re-graphed surfaces) flow
/// through the same operators.
class ScalarField {
 public:
  virtual ~ScalarField() = default;

  virtual int arity() const = 0;
  /// Truncated composition: the field evaluated at jet arguments.
  virtual Jet3 compose(std::span<const Jet3> inputs) const = 0;
  virtual double value(std::span<const double> x) const;
  virtual std::string describe() const = 0;

  Jet3 jet(std::span<const double> x, int order = Jet3::kMaxOrder) const;
};

using Field = std::shared_ptr<const ScalarField>;

class ExpressionField final : public ScalarField {
 public:
  explicit ExpressionField(Expression e) : expr_(std::move(e)) {}

  int arity() const override { return expr_.arity(); }
  Jet3 compose(std::span<const Jet3> inputs) const override { return expr_.evaluate(inputs); }
  double value(std::span<const double> x) const override { return expr_.evaluate(x); }
  std::string describe() const override { return expr_.to_string(); }

  const Expression& expression() const { return expr_; }

 private:
  Expression expr_;
};

Field make_field(Expression e);
/// Parses `text` over x1..x_arity.
Field parse_field(const std::string& text, int arity);

}  // namespace lightcone
