#include "lightcone/lorentz.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace lightcone {

namespace {

std::string format_point(std::span<const double> p) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

}  // namespace

MetricField::MetricField(int n, std::vector<Expression> entries) : n_(n), upper_(std::move(entries)) {
  const int d = n + 1;
  if (n < 1) throw std::invalid_argument("metric dimension must be at least 2");
  if (static_cast<int>(upper_.size()) != d * (d + 1) / 2)
    throw std::invalid_argument("metric needs (n+1)(n+2)/2 upper-triangle entries");
  for (const Expression& e : upper_) {
    if (e.arity() != d || e.first_index() != 0)
      throw std::invalid_argument("metric entries must be expressions in x0..xn");
  }
  minkowski_ = true;
  for (int a = 0; a < d && minkowski_; ++a)
    for (int b = a; b < d && minkowski_; ++b) {
      double v = 0.0;
      const double want = (a != b) ? 0.0 : (a == 0 ? -1.0 : 1.0);
      minkowski_ = upper_[static_cast<std::size_t>(index(a, b))].is_constant(&v) && v == want;
    }
}

int MetricField::index(int a, int b) const {
  if (a > b) std::swap(a, b);
  const int d = n_ + 1;
  // row a of the upper triangle starts after a*d - a(a-1)/2 entries
  return a * d - a * (a - 1) / 2 + (b - a);
}

MetricField MetricField::minkowski(int n) {
  const int d = n + 1;
  std::vector<Expression> entries;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b)
      entries.push_back(Expression::constant(a != b ? 0.0 : (a == 0 ? -1.0 : 1.0), d, 0));
  return MetricField(n, std::move(entries));
}

MetricField MetricField::from_upper_triangle(int n, std::vector<Expression> entries) {
  return MetricField(n, std::move(entries));
}

MetricField MetricField::parse_upper_triangle(int n, const std::vector<std::string>& entries) {
  std::vector<Expression> parsed;
  parsed.reserve(entries.size());
  for (const std::string& s : entries) parsed.push_back(Expression::parse(s, n + 1, 0));
  return MetricField(n, std::move(parsed));
}

const Expression& MetricField::entry(int a, int b) const { return upper_[static_cast<std::size_t>(index(a, b))]; }

SquareMatrix<Jet3> MetricField::compose(std::span<const Jet3> inputs) const {
  const int d = dim();
  SquareMatrix<Jet3> g(d, Jet3());
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      Jet3 v = entry(a, b).evaluate(inputs);
      g(a, b) = v;
      g(b, a) = std::move(v);
    }
  return g;
}

void MetricField::validate_signature(std::span<const double> base_point) const {
  const SquareMatrix<double> g = metric_at(*this, base_point);
  const int d = dim();
  Eigen::MatrixXd m(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) m(a, b) = g(a, b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  int negative = 0;
  for (int i = 0; i < d; ++i) negative += solver.eigenvalues()(i) < 0.0;
  if (negative != 1)
    throw WrongSignature("metric at " + format_point(base_point) + " has " + std::to_string(negative) +
                         " negative eigenvalues; expected signature (-,+,...,+)");
}

SquareMatrix<double> metric_at(const MetricField& metric, std::span<const double> p) {
  const int d = metric.dim();
  if (static_cast<int>(p.size()) != d) throw std::invalid_argument("point has wrong dimension");
  SquareMatrix<double> g(d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) g(a, b) = g(b, a) = metric.entry(a, b).evaluate(p);
  const double det = determinant(g);
  if (!(std::fabs(det) > MetricField::kDegenerateDet))
    throw DegenerateMetric("metric degenerate at " + format_point(p) + " (det=" + std::to_string(det) + ")");
  return g;
}

SquareMatrix<double> inverse_metric(const SquareMatrix<double>& g) {
  const double det = determinant(g);
  SquareMatrix<double> inv = cofactor_matrix(g);
  const int d = g.size();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) inv(a, b) /= det;
  return inv;
}

Christoffel christoffel_at(const MetricField& metric, std::span<const double> p) {
  const int d = metric.dim();
  if (static_cast<int>(p.size()) != d) throw std::invalid_argument("point has wrong dimension");
  const std::vector<Jet3> seeds = seed_variables(p, 1);
  const SquareMatrix<Jet3> gj = metric.compose(seeds);
  SquareMatrix<double> g(d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) g(a, b) = gj(a, b).value();
  const double det = determinant(g);
  if (!(std::fabs(det) > MetricField::kDegenerateDet))
    throw DegenerateMetric("metric degenerate at " + format_point(p) + " (det=" + std::to_string(det) + ")");
  const SquareMatrix<double> ginv = inverse_metric(g);

  // dg(k, a, b) = d_k g_{ab}
  auto dg = [&](int k, int a, int b) { return gj(a, b).d(k); };
  Christoffel gamma(d);
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        double s = 0.0;
        for (int e = 0; e < d; ++e) s += ginv(c, e) * (dg(a, e, b) + dg(b, a, e) - dg(e, a, b));
        gamma(c, a, b) = gamma(c, b, a) = 0.5 * s;
      }
  return gamma;
}

const char* to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::TimeLike: return "TimeLike";
    case CausalCharacter::SpaceLike: return "SpaceLike";
    case CausalCharacter::LightLike: return "LightLike";
  }
  return "?";
}

double metric_product(const SquareMatrix<double>& g, std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (int a = 0; a < g.size(); ++a)
    for (int b = 0; b < g.size(); ++b) s += g(a, b) * u[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(b)];
  return s;
}

CausalCharacter causal_character(const MetricField& metric, std::span<const double> p, std::span<const double> v,
                                 double tol) {
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  if (norm2 == 0.0) throw ZeroVector("causal character of the zero vector");
  const double q = metric_product(metric_at(metric, p), v, v);
  if (std::fabs(q) <= tol * norm2) return CausalCharacter::LightLike;
  return q < 0.0 ? CausalCharacter::TimeLike : CausalCharacter::SpaceLike;
}

namespace {

// Acceleration -Gamma^c_{ab} u^a u^b at x.
std::vector<double> geodesic_acceleration(const MetricField& metric, std::span<const double> x,
                                          std::span<const double> u) {
  const int d = metric.dim();
  const Christoffel gamma = christoffel_at(metric, x);
  std::vector<double> acc(static_cast<std::size_t>(d), 0.0);
  for (int c = 0; c < d; ++c) {
    double s = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) s += gamma(c, a, b) * u[static_cast<std::size_t>(a)] * u[static_cast<std::size_t>(b)];
    acc[static_cast<std::size_t>(c)] = -s;
  }
  return acc;
}

}  // namespace

GeodesicPath integrate_geodesic(const MetricField& metric, std::span<const double> p, std::span<const double> v,
                                double t0, double t1, int steps) {
  const int d = metric.dim();
  if (steps < 2) throw std::invalid_argument("geodesic integration needs at least 2 steps");
  if (!(t1 > t0)) throw std::invalid_argument("geodesic t-span must be increasing");
  if (static_cast<int>(p.size()) != d || static_cast<int>(v.size()) != d)
    throw std::invalid_argument("geodesic point/velocity have wrong dimension");

  GeodesicPath path;
  path.step = (t1 - t0) / steps;
  const double h = path.step;
  std::vector<double> x(p.begin(), p.end()), u(v.begin(), v.end());
  path.samples.push_back({t0, x, u});

  auto axpy = [](const std::vector<double>& a, double s, const std::vector<double>& b) {
    std::vector<double> r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += s * b[i];
    return r;
  };

  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    try {
      const std::vector<double> a1 = geodesic_acceleration(metric, x, u);
      const std::vector<double>& v1 = u;
      const std::vector<double> x2 = axpy(x, 0.5 * h, v1), v2 = axpy(u, 0.5 * h, a1);
      const std::vector<double> a2 = geodesic_acceleration(metric, x2, v2);
      const std::vector<double> x3 = axpy(x, 0.5 * h, v2), v3 = axpy(u, 0.5 * h, a2);
      const std::vector<double> a3 = geodesic_acceleration(metric, x3, v3);
      const std::vector<double> x4 = axpy(x, h, v3), v4 = axpy(u, h, a3);
      const std::vector<double> a4 = geodesic_acceleration(metric, x4, v4);
      for (int i = 0; i < d; ++i) {
        const auto s = static_cast<std::size_t>(i);
        x[s] += h / 6.0 * (v1[s] + 2.0 * v2[s] + 2.0 * v3[s] + v4[s]);
        u[s] += h / 6.0 * (a1[s] + 2.0 * a2[s] + 2.0 * a3[s] + a4[s]);
      }
    } catch (const DegenerateMetric& e) {
      throw GeodesicBreakdown(std::string("geodesic integration stopped: ") + e.what(), path, t);
    }
    path.samples.push_back({t0 + (k + 1) * h, x, u});
  }
  return path;
}

}  // namespace lightcone
