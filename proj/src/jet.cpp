#include "lightcone/jet.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace lightcone {

namespace {

int storage_size(int m, int order) {
  int size = 1;
  if (order >= 1) size += m;
  if (order >= 2) size += m * m;
  if (order >= 3) size += m * m * m;
  return size;
}

}  // namespace

Jet3::Jet3(int arity, int order)
    : m_(arity), order_(order), data_(static_cast<std::size_t>(storage_size(arity, order)), 0.0) {
  assert(order >= 0 && order <= kMaxOrder);
}

Jet3 Jet3::constant(int arity, double value, int order) {
  Jet3 j(arity, order);
  j.data_[0] = value;
  return j;
}

Jet3 Jet3::variable(int arity, int index, double value, int order) {
  Jet3 j(arity, order);
  j.data_[0] = value;
  if (order >= 1) j.data_[j.g(index)] = 1.0;
  return j;
}

std::vector<double> Jet3::gradient() const {
  if (order_ < 1) throw std::logic_error("gradient of an order-0 jet");
  return {data_.begin() + 1, data_.begin() + 1 + m_};
}

void Jet3::set_d(int i, int j, double v) {
  data_[h(i, j)] = v;
  data_[h(j, i)] = v;
}

void Jet3::set_d(int i, int j, int k, double v) {
  data_[t(i, j, k)] = v;
  data_[t(i, k, j)] = v;
  data_[t(j, i, k)] = v;
  data_[t(j, k, i)] = v;
  data_[t(k, i, j)] = v;
  data_[t(k, j, i)] = v;
}

Jet3 Jet3::partial(int i) const {
  if (order_ < 1) throw std::logic_error("partial derivative of an order-0 jet");
  Jet3 r(m_, order_ - 1);
  r.data_[0] = d(i);
  if (r.order_ >= 1)
    for (int a = 0; a < m_; ++a) r.data_[r.g(a)] = d(i, a);
  if (r.order_ >= 2)
    for (int a = 0; a < m_; ++a)
      for (int b = 0; b < m_; ++b) r.data_[r.h(a, b)] = d(i, a, b);
  return r;
}

Jet3 Jet3::truncated(int order) const {
  if (order >= order_) return *this;
  Jet3 r(m_, order);
  std::copy_n(data_.begin(), r.data_.size(), r.data_.begin());
  return r;
}

bool Jet3::is_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Jet3& Jet3::operator+=(const Jet3& rhs) {
  assert(m_ == rhs.m_);
  if (rhs.order_ < order_) *this = truncated(rhs.order_);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

Jet3& Jet3::operator-=(const Jet3& rhs) {
  assert(m_ == rhs.m_);
  if (rhs.order_ < order_) *this = truncated(rhs.order_);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

Jet3& Jet3::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Jet3 operator+(const Jet3& a, const Jet3& b) {
  Jet3 r = a;
  r += b;
  return r;
}

Jet3 operator-(const Jet3& a, const Jet3& b) {
  Jet3 r = a;
  r -= b;
  return r;
}

Jet3 operator-(const Jet3& a) { return a * -1.0; }

Jet3 operator*(const Jet3& a, double s) {
  Jet3 r = a;
  r *= s;
  return r;
}

Jet3 operator*(double s, const Jet3& a) { return a * s; }

Jet3 operator+(const Jet3& a, double s) {
  Jet3 r = a;
  r.set_value(r.value() + s);
  return r;
}

Jet3 operator+(double s, const Jet3& a) { return a + s; }

Jet3 operator-(const Jet3& a, double s) { return a + (-s); }

Jet3 operator-(double s, const Jet3& a) { return (-a) + s; }

Jet3 operator*(const Jet3& a, const Jet3& b) {
  assert(a.m_ == b.m_);
  const int m = a.m_;
  Jet3 r(m, std::min(a.order_, b.order_));
  const double a0 = a.value(), b0 = b.value();
  r.data_[0] = a0 * b0;
  if (r.order_ >= 1)
    for (int i = 0; i < m; ++i) r.data_[r.g(i)] = a.d(i) * b0 + a0 * b.d(i);
  if (r.order_ >= 2)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        r.set_d(i, j, a.d(i, j) * b0 + a.d(i) * b.d(j) + a.d(j) * b.d(i) + a0 * b.d(i, j));
  if (r.order_ >= 3)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        for (int k = j; k < m; ++k)
          r.set_d(i, j, k,
                  a.d(i, j, k) * b0 + a.d(i, j) * b.d(k) + a.d(i, k) * b.d(j) + a.d(j, k) * b.d(i) +
                      a.d(i) * b.d(j, k) + a.d(j) * b.d(i, k) + a.d(k) * b.d(i, j) +
                      a0 * b.d(i, j, k));
  return r;
}

Jet3 apply(const Jet3& u, double d0, double d1, double d2, double d3) {
  const int m = u.m_;
  Jet3 r(m, u.order_);
  r.data_[0] = d0;
  if (r.order_ >= 1)
    for (int i = 0; i < m; ++i) r.data_[r.g(i)] = d1 * u.d(i);
  if (r.order_ >= 2)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) r.set_d(i, j, d2 * u.d(i) * u.d(j) + d1 * u.d(i, j));
  if (r.order_ >= 3)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        for (int k = j; k < m; ++k)
          r.set_d(i, j, k,
                  d3 * u.d(i) * u.d(j) * u.d(k) +
                      d2 * (u.d(i, j) * u.d(k) + u.d(i, k) * u.d(j) + u.d(j, k) * u.d(i)) +
                      d1 * u.d(i, j, k));
  return r;
}

Jet3 reciprocal(const Jet3& u) {
  const double x = u.value();
  const double r = 1.0 / x;
  return apply(u, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

Jet3 operator/(const Jet3& a, const Jet3& b) { return a * reciprocal(b); }

Jet3 exp(const Jet3& u) {
  const double e = std::exp(u.value());
  return apply(u, e, e, e, e);
}

Jet3 log(const Jet3& u) {
  const double x = u.value();
  const double r = 1.0 / x;
  return apply(u, std::log(x), r, -r * r, 2.0 * r * r * r);
}

Jet3 sqrt(const Jet3& u) {
  const double x = u.value();
  const double s = std::sqrt(x);
  // d/dx x^{1/2} = 1/(2s), then -1/(4 s^3), then 3/(8 s^5)
  if (u.order() == 0) return apply(u, s, 0.0, 0.0, 0.0);
  const double inv = 1.0 / s;
  return apply(u, s, 0.5 * inv, -0.25 * inv * inv * inv, 0.375 * inv * inv * inv * inv * inv);
}

Jet3 sin(const Jet3& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return apply(u, s, c, -s, -c);
}

Jet3 cos(const Jet3& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return apply(u, c, -s, -c, s);
}

Jet3 tanh(const Jet3& u) {
  const double th = std::tanh(u.value());
  const double sech2 = 1.0 - th * th;
  return apply(u, th, sech2, -2.0 * th * sech2, sech2 * (6.0 * th * th - 2.0));
}

Jet3 ipow(const Jet3& u, long k) {
  if (k < 0) return reciprocal(ipow(u, -k));
  Jet3 result = Jet3::constant(u.arity(), 1.0, u.order());
  Jet3 base = u;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Jet3 compose_taylor(const Jet3& jet, std::span<const double> center, std::span<const Jet3> inputs) {
  const int m = jet.arity();
  assert(static_cast<int>(center.size()) == m && static_cast<int>(inputs.size()) == m);
  const int out_arity = m > 0 ? inputs[0].arity() : 0;
  int out_order = jet.order();
  for (const Jet3& in : inputs) out_order = std::min(out_order, in.order());

  std::vector<Jet3> delta;
  delta.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) delta.push_back((inputs[i] - center[i]).truncated(out_order));

  Jet3 r = Jet3::constant(out_arity, jet.value(), out_order);
  if (jet.order() >= 1)
    for (int i = 0; i < m; ++i) r += jet.d(i) * delta[i];
  if (jet.order() >= 2)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double c = 0.5 * jet.d(i, j);
        if (c != 0.0) r += c * (delta[i] * delta[j]);
      }
  if (jet.order() >= 3)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const double c = jet.d(i, j, k) / 6.0;
          if (c != 0.0) r += c * (delta[i] * delta[j] * delta[k]);
        }
  return r;
}

std::vector<Jet3> seed_variables(std::span<const double> point, int order) {
  const int m = static_cast<int>(point.size());
  std::vector<Jet3> seeds;
  seeds.reserve(point.size());
  for (int i = 0; i < m; ++i) seeds.push_back(Jet3::variable(m, i, point[i], order));
  return seeds;
}

}  // namespace lightcone
