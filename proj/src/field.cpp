#include "lightcone/field.hpp"

namespace lightcone {

double ScalarField::value(std::span<const double> x) const { return jet(x, 0).value(); }

Jet3 ScalarField::jet(std::span<const double> x, int order) const {
  const std::vector<Jet3> seeds = seed_variables(x, order);
  return compose(seeds);
}

Field make_field(Expression e) { return std::make_shared<ExpressionField>(std::move(e)); }

Field parse_field(const std::string& text, int arity) { return make_field(Expression::parse(text, arity, 1)); }

}  // namespace lightcone
