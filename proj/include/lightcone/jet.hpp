#pragma once

#include <span>
#include <vector>

namespace lightcone {

/// Truncated multivariate Taylor jet: a value together with every partial
/// derivative up to `order()` (at most 3) with respect to `arity()` variables.
///
/// Second and third derivative tensors are stored in full but are only ever
/// computed on the canonical index set (i <= j <= k) and then mirrored, so they
/// are symmetric bit for bit. Arithmetic between jets of different orders
/// yields the smaller order.
class Jet3 {
 public:
  static constexpr int kMaxOrder = 3;

  Jet3() : Jet3(0, 0) {}

  static Jet3 constant(int arity, double value, int order = kMaxOrder);
  /// The coordinate function x_index (0-based) evaluated at `value`.
  static Jet3 variable(int arity, int index, double value, int order = kMaxOrder);

  int arity() const { return m_; }
  int order() const { return order_; }

  double value() const { return data_[0]; }
  double d(int i) const { return data_[g(i)]; }
  double d(int i, int j) const { return data_[h(i, j)]; }
  double d(int i, int j, int k) const { return data_[t(i, j, k)]; }

  std::vector<double> gradient() const;

  /// d/dx_i of this jet; the result has order() - 1.
  Jet3 partial(int i) const;
  Jet3 truncated(int order) const;
  bool is_finite() const;

  // Mutators write the canonical entry and every permutation of it.
  void set_value(double v) { data_[0] = v; }
  void set_d(int i, double v) { data_[g(i)] = v; }
  void set_d(int i, int j, double v);
  void set_d(int i, int j, int k, double v);

  Jet3& operator+=(const Jet3& rhs);
  Jet3& operator-=(const Jet3& rhs);
  Jet3& operator*=(double s);

 private:
  Jet3(int arity, int order);

  int g(int i) const { return 1 + i; }
  int h(int i, int j) const { return 1 + m_ + i * m_ + j; }
  int t(int i, int j, int k) const { return 1 + m_ + m_ * m_ + (i * m_ + j) * m_ + k; }

  int m_;
  int order_;
  std::vector<double> data_;

  friend Jet3 operator*(const Jet3& a, const Jet3& b);
  friend Jet3 apply(const Jet3& u, double d0, double d1, double d2, double d3);
};

Jet3 operator+(const Jet3& a, const Jet3& b);
Jet3 operator-(const Jet3& a, const Jet3& b);
Jet3 operator-(const Jet3& a);
Jet3 operator*(const Jet3& a, const Jet3& b);
Jet3 operator*(const Jet3& a, double s);
Jet3 operator*(double s, const Jet3& a);
Jet3 operator+(const Jet3& a, double s);
Jet3 operator+(double s, const Jet3& a);
Jet3 operator-(const Jet3& a, double s);
Jet3 operator-(double s, const Jet3& a);

/// Composes a univariate function phi with u, where d0..d3 are phi and its first
/// three derivatives at u.value().
Jet3 apply(const Jet3& u, double d0, double d1, double d2, double d3);

// These assume the argument lies in the function's domain; the expression
// evaluator performs the domain checks.
Jet3 reciprocal(const Jet3& u);
Jet3 operator/(const Jet3& a, const Jet3& b);
Jet3 exp(const Jet3& u);
Jet3 log(const Jet3& u);
Jet3 sqrt(const Jet3& u);
Jet3 sin(const Jet3& u);
Jet3 cos(const Jet3& u);
Jet3 tanh(const Jet3& u);
/// u^k by repeated squaring; negative k goes through the reciprocal.
Jet3 ipow(const Jet3& u, long k);

/// Evaluates the Taylor polynomial of `jet` (expanded at `center`) at the jet
/// arguments `inputs`, i.e. the truncated composition jet(inputs).
Jet3 compose_taylor(const Jet3& jet, std::span<const double> center, std::span<const Jet3> inputs);

/// Identity jets x_i at `point`.
std::vector<Jet3> seed_variables(std::span<const double> point, int order = Jet3::kMaxOrder);

}  // namespace lightcone
