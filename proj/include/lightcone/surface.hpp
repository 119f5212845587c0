#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lightcone/field.hpp"
#include "lightcone/linalg.hpp"
#include "lightcone/lorentz.hpp"

namespace lightcone {

/// Axis-aligned box in R^n.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box cube(int n, double half_width);
  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(std::span<const double> x) const;
};

/// Tensor grid over a box with nodes[k] >= 2 nodes on axis k. Flat indices are
/// row-major (the first axis varies slowest).
struct Grid {
  Box box;
  std::vector<int> nodes;

  static Grid uniform(Box box, int nodes_per_axis);
  int dim() const { return box.dim(); }
  double coordinate(int axis, int k) const;
  std::size_t size() const;
  std::vector<int> unflatten(std::size_t flat) const;
  std::vector<double> point(std::span<const int> index) const;
};

/// Graph hypersurface x0 = f(x1, ..., xn) in a Lorentzian R^{n+1}, embedded by
/// F(x) = (f(x), x1, ..., xn), together with the weight phi of A - phi B.
struct GraphHypersurface {
  int n = 0;
  Field f;
  MetricField metric;
  Field phi;
  Box domain;

  /// Validates arities; phi defaults to 0 and the domain to [-1, 1]^n.
  static GraphHypersurface make(Field f, MetricField metric, Field phi = nullptr,
                                std::optional<Box> domain = std::nullopt);

  std::vector<double> embed(std::span<const double> x) const;
};

/// Induced metric s_{ij}, its cofactor matrix, B = det(s) and grad B.
struct FirstFundamental {
  SquareMatrix<double> s;
  SquareMatrix<double> cof;
  double B = 0.0;
  std::vector<double> gradB;  // empty unless requested
};

/// s_{ij} = f_i f_j g00 + f_i g0j + f_j gi0 + gij with g taken at F(x), as
/// jets of the given order in x (needs f to order + 1).
SquareMatrix<Jet3> induced_metric_jet(const GraphHypersurface& S, std::span<const double> x, int order);

/// s and cof (B is filled as well; gradB is left empty).
FirstFundamental induced_metric(const GraphHypersurface& S, std::span<const double> x);
/// s, cof, B and grad B.
FirstFundamental first_fundamental(const GraphHypersurface& S, std::span<const double> x);

/// B = det(s): positive at space-like points, negative at time-like points,
/// zero at light-like points.
double B_value(const GraphHypersurface& S, std::span<const double> x);
/// Exact gradient of B, differentiated through the determinant in jet arithmetic.
std::vector<double> gradient_B(const GraphHypersurface& S, std::span<const double> x);

/// Normal field nu^a = -g^{ab} sqrt|det g| eps_{b c1..cn} F_1^{c1} ... F_n^{cn}.
/// The sign makes nu^0 > 0 in Minkowski space.
std::vector<double> normal_vector(const GraphHypersurface& S, std::span<const double> x);

/// Tangent vectors F_{x_i} = f_i d_0 + d_i as rows.
std::vector<std::vector<double>> tangent_frame(const GraphHypersurface& S, std::span<const double> x);

/// Mean-curvature-type operator through the connection:
///   A = -sum_{ij} cof^{ij} g(D_{d_i} F_{x_j}, nu).
/// The overall factor -1 matches the closed Minkowski form below.
double operator_A_generic(const GraphHypersurface& S, std::span<const double> x);
/// Closed Minkowski form A = R f_nn + S with R = 1 - sum_{j<n} f_j^2 and
///   S = sum_{k<n} (1 - f_n^2 - sum_{j<n, j!=k} f_j^2) f_kk
///       + 2 sum_{j<k<n} f_j f_k f_jk + 2 sum_{j<n} f_j f_n f_jn.
/// Throws std::invalid_argument when the metric is not Minkowski.
double operator_A_explicit(const GraphHypersurface& S, std::span<const double> x);
/// The connection form; valid for every metric.
double operator_A(const GraphHypersurface& S, std::span<const double> x);
/// A - phi B.
double operator_tildeA(const GraphHypersurface& S, std::span<const double> x);

struct PointClass {
  enum class Kind { SpaceLike, TimeLike, LightLike };
  Kind kind = Kind::SpaceLike;
  bool degenerate = false;  // only ever set for LightLike
  double B = 0.0;
  double grad_norm = 0.0;
};

const char* to_string(PointClass::Kind k);
std::string class_label(const PointClass& c);

/// Default |B| tolerance at a point: 1e-9 * (1 + |s|_F).
double default_tol_b(const SquareMatrix<double>& s);
constexpr double kDefaultTolGrad = 1e-7;

/// |B| <= tolB gives LightLike, degenerate iff |grad B| <= tolG; otherwise the
/// sign of B decides. tolB defaults to default_tol_b at x.
PointClass classify_point(const GraphHypersurface& S, std::span<const double> x,
                          std::optional<double> tol_b = std::nullopt, double tol_grad = kDefaultTolGrad);

/// A null direction v of s at a light-like point (s v = 0), taken from the
/// largest column of the cofactor matrix, normalized to unit length.
std::vector<double> lightlike_direction(const GraphHypersurface& S, std::span<const double> x);

struct LocusPoint {
  int axis = 0;                 // direction of the grid line
  std::vector<int> line;        // node indices on the other axes (axis entry is -1)
  double parameter = 0.0;       // coordinate along the line
  std::vector<double> x;
  PointClass cls;
};

struct LocusScan {
  bool identically_lightlike = false;  // |B| <= tol at every node; nothing bisected
  std::vector<LocusPoint> points;
};

/// Brackets sign changes of B between consecutive nodes of every grid line,
/// refines each by bisection and classifies the root. Ordered by axis, then
/// line (lexicographic), then parameter.
LocusScan scan_lightlike_locus(const GraphHypersurface& S, const Grid& grid,
                               std::optional<double> tol_b = std::nullopt, double tol_grad = kDefaultTolGrad);

}  // namespace lightcone
