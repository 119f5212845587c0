#include "lightcone/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lightcone {

AxisProfile AxisProfile::zero(int n, double y) {
  AxisProfile p;
  p.n = n;
  p.y = y;
  const auto k = static_cast<std::size_t>(n - 1);
  p.b.assign(k, 0.0);
  p.db.assign(k, 0.0);
  p.ddb.assign(k, 0.0);
  p.c2.assign(k * k, 0.0);
  p.c3.assign(k * k * k, 0.0);
  p.dc2.assign(k * k, 0.0);
  p.dphi.assign(k, 0.0);
  return p;
}

void AxisProfile::set_c(int i, int j, double v) {
  c2[static_cast<std::size_t>(i * k() + j)] = v;
  c2[static_cast<std::size_t>(j * k() + i)] = v;
}

void AxisProfile::set_c(int i, int j, int l, double v) {
  const int idx[6][3] = {{i, j, l}, {i, l, j}, {j, i, l}, {j, l, i}, {l, i, j}, {l, j, i}};
  for (const auto& p : idx) c3[static_cast<std::size_t>((p[0] * k() + p[1]) * k() + p[2])] = v;
}

void AxisProfile::set_dc(int i, int j, double v) {
  dc2[static_cast<std::size_t>(i * k() + j)] = v;
  dc2[static_cast<std::size_t>(j * k() + i)] = v;
}

std::vector<double> axis_point(int n, double y) {
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  x.back() = y;
  return x;
}

namespace {

struct Decomposition {
  AxisProfile profile;
  double residual = 0.0;
};

Decomposition decompose_impl(const GraphHypersurface& S, double y) {
  const int n = S.n, k = n - 1, yi = n - 1;
  const std::vector<double> x = axis_point(n, y);
  const Jet3 f = S.f->jet(x, 3);

  AxisProfile p = AxisProfile::zero(n, y);
  p.a = f.value();
  p.da = f.d(yi);
  p.dda = f.d(yi, yi);
  for (int i = 0; i < k; ++i) {
    p.b[static_cast<std::size_t>(i)] = f.d(i);
    p.db[static_cast<std::size_t>(i)] = f.d(i, yi);
    p.ddb[static_cast<std::size_t>(i)] = f.d(i, yi, yi);
  }

  // c = f - a(y) - sum_i b_i(y) x_i as a jet, with a and b_i expanded in
  // eta = x_n - y from their own axis data.
  const Jet3 eta = Jet3::variable(n, yi, 0.0, 3);
  const Jet3 eta2 = eta * eta;
  Jet3 a_of_y = p.a + p.da * eta + (0.5 * p.dda) * eta2 + (f.d(yi, yi, yi) / 6.0) * (eta2 * eta);
  Jet3 c = f - a_of_y;
  for (int i = 0; i < k; ++i) {
    const auto s = static_cast<std::size_t>(i);
    const Jet3 b_of_y = p.b[s] + p.db[s] * eta + (0.5 * p.ddb[s]) * eta2;
    c -= b_of_y * Jet3::variable(n, i, 0.0, 3);
  }

  double residual = std::fabs(c.value());
  residual = std::max(residual, std::fabs(c.d(yi)));
  for (int i = 0; i < k; ++i) {
    residual = std::max(residual, std::fabs(c.d(i)));
    residual = std::max(residual, std::fabs(c.d(i, yi)));
    residual = std::max(residual, std::fabs(c.d(i, yi, yi)));
  }

  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      p.set_c(i, j, c.d(i, j));
      p.set_dc(i, j, c.d(i, j, yi));
      for (int l = j; l < k; ++l) p.set_c(i, j, l, c.d(i, j, l));
    }

  const Jet3 phi = S.phi->jet(x, 1);
  p.phi = phi.value();
  for (int i = 0; i < k; ++i) p.dphi[static_cast<std::size_t>(i)] = phi.d(i);
  return {std::move(p), residual};
}

}  // namespace

AxisProfile decompose(const GraphHypersurface& S, double y) {
  Decomposition d = decompose_impl(S, y);
  if (d.residual > kIdentityTolerance) {
    std::ostringstream os;
    os << "axis decomposition residual " << d.residual << " at y=" << y;
    throw IdentityViolation(os.str());
  }
  return std::move(d.profile);
}

double decomposition_residual(const GraphHypersurface& S, double y) { return decompose_impl(S, y).residual; }

namespace {

double coefficient_C(const AxisProfile& p) {
  double C = 1.0;
  for (double bi : p.b) C -= bi * bi;
  return C;
}

double coefficient_D(const AxisProfile& p) { return coefficient_C(p) - p.da * p.da; }

}  // namespace

double alpha(const AxisProfile& p) {
  const int k = p.k();
  const double C = coefficient_C(p), D = coefficient_D(p);
  double r = C * p.dda;
  for (int j = 0; j < k; ++j) {
    const double bj = p.b[static_cast<std::size_t>(j)];
    r += p.c(j, j) * (D + bj * bj);
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) r += 2.0 * p.b[static_cast<std::size_t>(i)] * p.b[static_cast<std::size_t>(j)] * p.c(i, j);
  for (int i = 0; i < k; ++i) r += 2.0 * p.da * p.b[static_cast<std::size_t>(i)] * p.db[static_cast<std::size_t>(i)];
  r -= p.phi * D;
  return r;
}

double alpha_l(const AxisProfile& p, int l) {
  const int k = p.k();
  const auto L = static_cast<std::size_t>(l);
  const double C = coefficient_C(p), D = coefficient_D(p);
  auto b = [&](int i) { return p.b[static_cast<std::size_t>(i)]; };
  auto db = [&](int i) { return p.db[static_cast<std::size_t>(i)]; };

  double bc = 0.0;  // sum_j b_j c_jl
  for (int j = 0; j < k; ++j) bc += b(j) * p.c(j, l);

  double r = C * p.ddb[L] - 2.0 * bc * p.dda;
  for (int j = 0; j < k; ++j) r += (D + b(j) * b(j)) * p.c(j, j, l);
  for (int j = 0; j < k; ++j) {
    double inner = p.da * db(l);
    for (int i = 0; i < k; ++i)
      if (i != j) inner += b(i) * p.c(i, l);
    r -= 2.0 * inner * p.c(j, j);
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      r += 2.0 * (b(j) * p.c(i, l) * p.c(i, j) + b(i) * p.c(j, l) * p.c(i, j) + b(i) * b(j) * p.c(i, j, l));
  for (int i = 0; i < k; ++i)
    r += 2.0 * (p.c(i, l) * p.da * db(i) + b(i) * db(l) * db(i) + b(i) * p.da * p.dc(i, l));

  r -= p.dphi[L] * D - 2.0 * p.phi * (bc + p.da * db(l));
  return r;
}

double alpha_generic(const GraphHypersurface& S, double y) { return operator_tildeA(S, axis_point(S.n, y)); }

double alpha_l_generic(const GraphHypersurface& S, double y, int l) {
  const std::vector<double> x0 = axis_point(S.n, y);
  auto central = [&](double h) {
    std::vector<double> xp = x0, xm = x0;
    xp[static_cast<std::size_t>(l)] += h;
    xm[static_cast<std::size_t>(l)] -= h;
    return (operator_tildeA(S, xp) - operator_tildeA(S, xm)) / (2.0 * h);
  };
  const double h = 1e-3;
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

namespace {

void check_state(const AxisProfile& frozen, const OdeState& s) {
  const auto k = static_cast<std::size_t>(frozen.k());
  if (s.b.size() != k || s.db.size() != k) throw std::invalid_argument("ODE state vectors must have length n-1");
}

double checked_C(const OdeState& s) {
  double C = 1.0;
  for (double bi : s.b) C -= bi * bi;
  if (!(std::fabs(C) >= kSingularCThreshold)) throw SingularC(s.y, C);
  return C;
}

}  // namespace

OdeRhs ode_rhs(const AxisProfile& frozen, const OdeState& state) {
  check_state(frozen, state);
  const double C = checked_C(state);
  AxisProfile p = frozen;
  p.y = state.y;
  p.a = state.a;
  p.da = state.da;
  p.b = state.b;
  p.db = state.db;
  p.dda = 0.0;
  std::fill(p.ddb.begin(), p.ddb.end(), 0.0);

  OdeRhs r;
  r.dda = -alpha(p) / C;
  p.dda = r.dda;
  r.ddb.resize(state.b.size());
  for (int l = 0; l < p.k(); ++l) r.ddb[static_cast<std::size_t>(l)] = -alpha_l(p, l) / C;
  return r;
}

OdeRhs ode_rhs(const GraphHypersurface& S, const OdeState& state) {
  if (!S.metric.is_minkowski()) return ode_rhs_generic(S, state);
  return ode_rhs(decompose(S, state.y), state);
}

namespace {

// Cubic model surface around (0, ..., 0, y0) with prescribed axis data.
GraphHypersurface model_surface(const GraphHypersurface& S, const AxisProfile& p) {
  const int n = S.n, k = n - 1;
  auto cst = [&](double v) { return Expression::constant(v, n); };
  auto var = [&](int i) { return Expression::variable(i, n); };
  const Expression eta = var(k) - cst(p.y);
  const Expression eta2 = eta * eta;

  Expression f = cst(p.a) + cst(p.da) * eta + cst(0.5 * p.dda) * eta2;
  for (int i = 0; i < k; ++i) {
    const auto s = static_cast<std::size_t>(i);
    f = f + (cst(p.b[s]) + cst(p.db[s]) * eta + cst(0.5 * p.ddb[s]) * eta2) * var(i);
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      f = f + cst(0.5 * p.c(i, j)) * var(i) * var(j);
      f = f + cst(0.5 * p.dc(i, j)) * var(i) * var(j) * eta;
      for (int l = 0; l < k; ++l) f = f + cst(p.c(i, j, l) / 6.0) * var(i) * var(j) * var(l);
    }
  Expression phi = cst(p.phi);
  for (int i = 0; i < k; ++i) phi = phi + cst(p.dphi[static_cast<std::size_t>(i)]) * var(i);

  Box box = Box::cube(n, 1.0);
  box.lower.back() += p.y;
  box.upper.back() += p.y;
  return GraphHypersurface::make(make_field(f), S.metric, make_field(phi), box);
}

}  // namespace

OdeRhs ode_rhs_generic(const GraphHypersurface& S, const OdeState& state) {
  AxisProfile p = decompose(S, state.y);
  check_state(p, state);
  p.a = state.a;
  p.da = state.da;
  p.b = state.b;
  p.db = state.db;
  std::fill(p.ddb.begin(), p.ddb.end(), 0.0);

  // alpha is affine in a'' with coefficient R; alpha_l affine in b''_l.
  p.dda = 0.0;
  const double a0 = alpha_generic(model_surface(S, p), p.y);
  p.dda = 1.0;
  const double a1 = alpha_generic(model_surface(S, p), p.y);
  const double coef = a1 - a0;
  if (!(std::fabs(coef) >= kSingularCThreshold)) throw SingularC(state.y, coef);

  OdeRhs r;
  r.dda = -a0 / coef;
  p.dda = r.dda;
  r.ddb.resize(p.b.size());
  for (int l = 0; l < p.k(); ++l) {
    const auto L = static_cast<std::size_t>(l);
    p.ddb[L] = 0.0;
    const double l0 = alpha_l_generic(model_surface(S, p), p.y, l);
    p.ddb[L] = 1.0;
    const double l1 = alpha_l_generic(model_surface(S, p), p.y, l);
    const double lc = l1 - l0;
    if (!(std::fabs(lc) >= kSingularCThreshold)) throw SingularC(state.y, lc);
    r.ddb[L] = -l0 / lc;
    p.ddb[L] = 0.0;
  }
  return r;
}

bool is_degenerate_initial(const AxisProfile& p, double tol) {
  if (std::fabs(p.a) > tol || std::fabs(p.da - 1.0) > tol) return false;
  for (double v : p.b)
    if (std::fabs(v) > tol) return false;
  for (double v : p.db)
    if (std::fabs(v) > tol) return false;
  return true;
}

}  // namespace lightcone
