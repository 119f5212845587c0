#pragma once

#include <span>
#include <string>
#include <vector>

#include "lightcone/error.hpp"
#include "lightcone/expression.hpp"
#include "lightcone/linalg.hpp"

namespace lightcone {

/// Lorentzian metric g_{ab}(x_0, ..., x_n) on R^{n+1}, signature (-,+,...,+).
/// Only the upper triangle is stored, so symmetry holds by construction.
class MetricField {
 public:
  static constexpr double kDegenerateDet = 1e-12;

  static MetricField minkowski(int n);
  /// `entries` is the upper triangle in row-major order: (n+1)(n+2)/2
  /// expressions over x0..xn.
  static MetricField from_upper_triangle(int n, std::vector<Expression> entries);
  static MetricField parse_upper_triangle(int n, const std::vector<std::string>& entries);

  int n() const { return n_; }
  int dim() const { return n_ + 1; }
  const Expression& entry(int a, int b) const;
  bool is_minkowski() const { return minkowski_; }

  /// Throws WrongSignature unless g has exactly one negative eigenvalue at
  /// `base_point`, DegenerateMetric if it is degenerate there.
  void validate_signature(std::span<const double> base_point) const;

  /// Entries composed with jet arguments (one per ambient coordinate).
  SquareMatrix<Jet3> compose(std::span<const Jet3> inputs) const;

 private:
  MetricField(int n, std::vector<Expression> entries);
  int index(int a, int b) const;

  int n_ = 0;
  std::vector<Expression> upper_;
  bool minkowski_ = false;
};

/// g(p). Throws DegenerateMetric when |det g(p)| <= 1e-12.
SquareMatrix<double> metric_at(const MetricField& metric, std::span<const double> p);

/// Inverse of a nondegenerate symmetric metric matrix (cofactor / det).
SquareMatrix<double> inverse_metric(const SquareMatrix<double>& g);

/// Levi-Civita connection coefficients Gamma^c_{ab}.
class Christoffel {
 public:
  explicit Christoffel(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}
  int dim() const { return dim_; }
  double operator()(int c, int a, int b) const { return data_[idx(c, a, b)]; }
  double& operator()(int c, int a, int b) { return data_[idx(c, a, b)]; }

 private:
  std::size_t idx(int c, int a, int b) const { return static_cast<std::size_t>((c * dim_ + a) * dim_ + b); }
  int dim_;
  std::vector<double> data_;
};

Christoffel christoffel_at(const MetricField& metric, std::span<const double> p);

enum class CausalCharacter { TimeLike, SpaceLike, LightLike };
const char* to_string(CausalCharacter c);

double metric_product(const SquareMatrix<double>& g, std::span<const double> u, std::span<const double> v);

/// Sign of g_p(v, v); |g_p(v,v)| <= tol * |v|^2 counts as light-like.
CausalCharacter causal_character(const MetricField& metric, std::span<const double> p, std::span<const double> v,
                                 double tol = 1e-9);

struct GeodesicSample {
  double t;
  std::vector<double> position;
  std::vector<double> velocity;
};

struct GeodesicPath {
  std::vector<GeodesicSample> samples;
  double step = 0.0;
};

/// Raised when the metric degenerates mid-integration; carries what was
/// integrated up to that point.
class GeodesicBreakdown : public DegenerateMetric {
 public:
  GeodesicBreakdown(const std::string& what, GeodesicPath partial, double t)
      : DegenerateMetric(what), partial_(std::move(partial)), t_(t) {}
  const GeodesicPath& partial() const { return partial_; }
  double failure_t() const { return t_; }

 private:
  GeodesicPath partial_;
  double t_;
};

/// Fixed-step classical RK4 for x'' = -Gamma(x)(x', x') over [t0, t1].
GeodesicPath integrate_geodesic(const MetricField& metric, std::span<const double> p, std::span<const double> v,
                                double t0, double t1, int steps);

}  // namespace lightcone
