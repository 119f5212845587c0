#include "lightcone/surface.hpp"

#include <cmath>
#include <stdexcept>

namespace lightcone {

Box Box::cube(int n, double half_width) {
  return Box{std::vector<double>(static_cast<std::size_t>(n), -half_width),
             std::vector<double>(static_cast<std::size_t>(n), half_width)};
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  return true;
}

Grid Grid::uniform(Box box, int nodes_per_axis) {
  const int d = box.dim();
  return Grid{std::move(box), std::vector<int>(static_cast<std::size_t>(d), nodes_per_axis)};
}

double Grid::coordinate(int axis, int k) const {
  const auto a = static_cast<std::size_t>(axis);
  const int last = nodes[a] - 1;
  if (k == last) return box.upper[a];
  return box.lower[a] + (box.upper[a] - box.lower[a]) * static_cast<double>(k) / last;
}

std::size_t Grid::size() const {
  std::size_t total = 1;
  for (int k : nodes) total *= static_cast<std::size_t>(k);
  return total;
}

std::vector<int> Grid::unflatten(std::size_t flat) const {
  std::vector<int> idx(nodes.size());
  for (std::size_t a = nodes.size(); a-- > 0;) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(nodes[a]));
    flat /= static_cast<std::size_t>(nodes[a]);
  }
  return idx;
}

std::vector<double> Grid::point(std::span<const int> index) const {
  std::vector<double> x(index.size());
  for (std::size_t a = 0; a < index.size(); ++a) x[a] = coordinate(static_cast<int>(a), index[a]);
  return x;
}

GraphHypersurface GraphHypersurface::make(Field f, MetricField metric, Field phi, std::optional<Box> domain) {
  const int n = metric.n();
  if (n < 2) throw std::invalid_argument("hypersurface dimension n must be at least 2");
  if (!f || f->arity() != n) throw std::invalid_argument("graph function must have arity n");
  if (!phi) phi = make_field(Expression::constant(0.0, n));
  if (phi->arity() != n) throw std::invalid_argument("phi must have arity n");
  Box box = domain ? *domain : Box::cube(n, 1.0);
  if (box.dim() != n || box.upper.size() != box.lower.size())
    throw std::invalid_argument("domain box must have dimension n");
  for (int i = 0; i < n; ++i)
    if (!(box.lower[static_cast<std::size_t>(i)] < box.upper[static_cast<std::size_t>(i)]))
      throw std::invalid_argument("domain box must be nonempty");
  return GraphHypersurface{n, std::move(f), std::move(metric), std::move(phi), std::move(box)};
}

std::vector<double> GraphHypersurface::embed(std::span<const double> x) const {
  std::vector<double> p(static_cast<std::size_t>(n + 1));
  p[0] = f->value(x);
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i + 1)] = x[static_cast<std::size_t>(i)];
  return p;
}

namespace {

void check_point(const GraphHypersurface& S, std::span<const double> x) {
  if (static_cast<int>(x.size()) != S.n) throw std::invalid_argument("surface point has wrong dimension");
}

SquareMatrix<double> values(const SquareMatrix<Jet3>& m) {
  SquareMatrix<double> r(m.size(), 0.0);
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) r(i, j) = m(i, j).value();
  return r;
}

double frobenius(const SquareMatrix<double>& m) {
  double s = 0.0;
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

// Second-order data of f at x plus the ambient metric and connection at F(x).
struct PointData {
  Jet3 f;                  // order 2
  std::vector<double> p;   // F(x)
  SquareMatrix<double> g;  // g at F(x)
};

PointData point_data(const GraphHypersurface& S, std::span<const double> x) {
  check_point(S, x);
  PointData d;
  d.f = S.f->jet(x, 2);
  d.p.resize(static_cast<std::size_t>(S.n + 1));
  d.p[0] = d.f.value();
  for (int i = 0; i < S.n; ++i) d.p[static_cast<std::size_t>(i + 1)] = x[static_cast<std::size_t>(i)];
  d.g = metric_at(S.metric, d.p);
  return d;
}

SquareMatrix<double> induced_from(const PointData& d, int n) {
  const SquareMatrix<double>& g = d.g;
  SquareMatrix<double> s(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double fi = d.f.d(i), fj = d.f.d(j);
      s(i, j) = s(j, i) = fi * fj * g(0, 0) + fi * g(0, j + 1) + fj * g(i + 1, 0) + g(i + 1, j + 1);
    }
  return s;
}

}  // namespace

SquareMatrix<Jet3> induced_metric_jet(const GraphHypersurface& S, std::span<const double> x, int order) {
  check_point(S, x);
  const int n = S.n;
  const Jet3 fj = S.f->jet(x, order + 1);
  std::vector<Jet3> ambient;
  ambient.reserve(static_cast<std::size_t>(n + 1));
  ambient.push_back(fj);
  for (int i = 0; i < n; ++i) ambient.push_back(Jet3::variable(n, i, x[static_cast<std::size_t>(i)], order + 1));
  const SquareMatrix<Jet3> g = S.metric.compose(ambient);

  SquareMatrix<double> g0(n + 1, 0.0);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) g0(a, b) = g(a, b).value();
  if (!(std::fabs(determinant(g0)) > MetricField::kDegenerateDet))
    throw DegenerateMetric("metric degenerate on the surface at F(x)");

  std::vector<Jet3> df;
  df.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) df.push_back(fj.partial(i));

  SquareMatrix<Jet3> s(n, Jet3());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet3 v = df[i] * df[j] * g(0, 0) + df[i] * g(0, j + 1) + df[j] * g(i + 1, 0) + g(i + 1, j + 1);
      v = v.truncated(order);
      s(i, j) = v;
      s(j, i) = std::move(v);
    }
  return s;
}

FirstFundamental induced_metric(const GraphHypersurface& S, std::span<const double> x) {
  const PointData d = point_data(S, x);
  FirstFundamental ff;
  ff.s = induced_from(d, S.n);
  ff.cof = cofactor_matrix(ff.s);
  ff.B = determinant(ff.s);
  return ff;
}

FirstFundamental first_fundamental(const GraphHypersurface& S, std::span<const double> x) {
  const SquareMatrix<Jet3> sj = induced_metric_jet(S, x, 1);
  const Jet3 Bj = determinant(sj);
  FirstFundamental ff;
  ff.s = values(sj);
  ff.cof = cofactor_matrix(ff.s);
  ff.B = Bj.value();
  ff.gradB = Bj.gradient();
  return ff;
}

double B_value(const GraphHypersurface& S, std::span<const double> x) {
  return determinant(induced_metric_jet(S, x, 0)).value();
}

std::vector<double> gradient_B(const GraphHypersurface& S, std::span<const double> x) {
  return determinant(induced_metric_jet(S, x, 1)).gradient();
}

std::vector<std::vector<double>> tangent_frame(const GraphHypersurface& S, std::span<const double> x) {
  check_point(S, x);
  const Jet3 fj = S.f->jet(x, 1);
  std::vector<std::vector<double>> frame(static_cast<std::size_t>(S.n),
                                         std::vector<double>(static_cast<std::size_t>(S.n + 1), 0.0));
  for (int i = 0; i < S.n; ++i) {
    frame[static_cast<std::size_t>(i)][0] = fj.d(i);
    frame[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + 1)] = 1.0;
  }
  return frame;
}

namespace {

std::vector<double> normal_from(const PointData& d, int n) {
  const int dim = n + 1;
  // Rows 1..n hold F_{x_i}; row 0 is a placeholder whose cofactors give the
  // covector eps_{b c1..cn} F_1^{c1} ... F_n^{cn}.
  SquareMatrix<double> m(dim, 0.0);
  for (int i = 0; i < n; ++i) {
    m(i + 1, 0) = d.f.d(i);
    m(i + 1, i + 1) = 1.0;
  }
  std::vector<double> omega(static_cast<std::size_t>(dim));
  for (int b = 0; b < dim; ++b) {
    const double minor_det = determinant(m.minor(0, b));
    omega[static_cast<std::size_t>(b)] = (b % 2) ? -minor_det : minor_det;
  }
  const SquareMatrix<double> ginv = inverse_metric(d.g);
  const double vol = std::sqrt(std::fabs(determinant(d.g)));
  std::vector<double> nu(static_cast<std::size_t>(dim), 0.0);
  for (int a = 0; a < dim; ++a) {
    double s = 0.0;
    for (int b = 0; b < dim; ++b) s += ginv(a, b) * omega[static_cast<std::size_t>(b)];
    nu[static_cast<std::size_t>(a)] = -vol * s;
  }
  return nu;
}

}  // namespace

std::vector<double> normal_vector(const GraphHypersurface& S, std::span<const double> x) {
  return normal_from(point_data(S, x), S.n);
}

double operator_A_generic(const GraphHypersurface& S, std::span<const double> x) {
  const int n = S.n, dim = n + 1;
  const PointData d = point_data(S, x);
  const Christoffel gamma = christoffel_at(S.metric, d.p);
  const SquareMatrix<double> cof = cofactor_matrix(induced_from(d, n));
  const std::vector<double> nu = normal_from(d, n);

  std::vector<double> g_nu(static_cast<std::size_t>(dim), 0.0);  // g_{ab} nu^b
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) g_nu[static_cast<std::size_t>(a)] += d.g(a, b) * nu[static_cast<std::size_t>(b)];

  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double fi = d.f.d(i), fj = d.f.d(j);
      const int ai = i + 1, aj = j + 1;  // ambient indices of x_i, x_j
      double second = 0.0;               // g(D_{d_i} F_{x_j}, nu)
      for (int a = 0; a < dim; ++a) {
        double comp = fi * fj * gamma(a, 0, 0) + fi * gamma(a, 0, aj) + fj * gamma(a, ai, 0) + gamma(a, ai, aj);
        if (a == 0) comp += d.f.d(i, j);
        second += comp * g_nu[static_cast<std::size_t>(a)];
      }
      total += cof(i, j) * second;
    }
  return -total;
}

double operator_A_explicit(const GraphHypersurface& S, std::span<const double> x) {
  if (!S.metric.is_minkowski()) throw std::invalid_argument("closed-form A requires the Minkowski metric");
  check_point(S, x);
  const Jet3 f = S.f->jet(x, 2);
  const int n = S.n;
  const int last = n - 1;  // x_n
  const double fn = f.d(last);

  double R = 1.0;
  for (int j = 0; j < last; ++j) R -= f.d(j) * f.d(j);

  double Ssum = 0.0;
  for (int k = 0; k < last; ++k) {
    double coef = 1.0 - fn * fn;
    for (int j = 0; j < last; ++j)
      if (j != k) coef -= f.d(j) * f.d(j);
    Ssum += coef * f.d(k, k);
  }
  for (int j = 0; j < last; ++j)
    for (int k = j + 1; k < last; ++k) Ssum += 2.0 * f.d(j) * f.d(k) * f.d(j, k);
  for (int j = 0; j < last; ++j) Ssum += 2.0 * f.d(j) * fn * f.d(j, last);

  return R * f.d(last, last) + Ssum;
}

double operator_A(const GraphHypersurface& S, std::span<const double> x) { return operator_A_generic(S, x); }

double operator_tildeA(const GraphHypersurface& S, std::span<const double> x) {
  const double A = operator_A(S, x);
  const double phi = S.phi->value(x);
  if (phi == 0.0) return A;
  return A - phi * B_value(S, x);
}

const char* to_string(PointClass::Kind k) {
  switch (k) {
    case PointClass::Kind::SpaceLike: return "SpaceLike";
    case PointClass::Kind::TimeLike: return "TimeLike";
    case PointClass::Kind::LightLike: return "LightLike";
  }
  return "?";
}

std::string class_label(const PointClass& c) {
  if (c.kind != PointClass::Kind::LightLike) return to_string(c.kind);
  return c.degenerate ? "LightLikeDegenerate" : "LightLike";
}

double default_tol_b(const SquareMatrix<double>& s) { return 1e-9 * (1.0 + frobenius(s)); }

PointClass classify_point(const GraphHypersurface& S, std::span<const double> x, std::optional<double> tol_b,
                          double tol_grad) {
  const FirstFundamental ff = first_fundamental(S, x);
  PointClass c;
  c.B = ff.B;
  double g2 = 0.0;
  for (double v : ff.gradB) g2 += v * v;
  c.grad_norm = std::sqrt(g2);
  const double tol = tol_b ? *tol_b : default_tol_b(ff.s);
  if (std::fabs(ff.B) <= tol) {
    c.kind = PointClass::Kind::LightLike;
    c.degenerate = c.grad_norm <= tol_grad;
  } else {
    c.kind = ff.B > 0.0 ? PointClass::Kind::SpaceLike : PointClass::Kind::TimeLike;
  }
  return c;
}

std::vector<double> lightlike_direction(const GraphHypersurface& S, std::span<const double> x) {
  const FirstFundamental ff = induced_metric(S, x);
  const int n = S.n;
  int best = -1;
  double best_norm = 0.0;
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += ff.cof(i, j) * ff.cof(i, j);
    if (s > best_norm) {
      best_norm = s;
      best = j;
    }
  }
  if (best < 0) throw NotLightLike("induced metric has no unique null direction (rank < n-1)");
  std::vector<double> v(static_cast<std::size_t>(n));
  const double norm = std::sqrt(best_norm);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = ff.cof(i, best) / norm;
  return v;
}

}  // namespace lightcone
