#pragma once

#include <span>
#include <vector>

#include "lightcone/surface.hpp"

namespace lightcone {

/// Restriction data of f = a(y) + sum_i b_i(y) x_i + c(x, y) along the x_n-axis
/// (y = x_n, transverse indices i = 0..n-2 in code).
struct AxisProfile {
  int n = 0;
  double y = 0.0;
  double a = 0.0, da = 0.0, dda = 0.0;
  std::vector<double> b, db, ddb;
  std::vector<double> c2;   // c_ij, (n-1)^2
  std::vector<double> c3;   // c_ijk, (n-1)^3
  std::vector<double> dc2;  // c'_ij = c_{x_i x_j y}
  double phi = 0.0;
  std::vector<double> dphi;  // phi_{x_i}

  /// All-zero profile for an n-dimensional graph at axis parameter y.
  static AxisProfile zero(int n, double y);

  int k() const { return n - 1; }
  double c(int i, int j) const { return c2[static_cast<std::size_t>(i * k() + j)]; }
  double c(int i, int j, int l) const { return c3[static_cast<std::size_t>((i * k() + j) * k() + l)]; }
  double dc(int i, int j) const { return dc2[static_cast<std::size_t>(i * k() + j)]; }
  void set_c(int i, int j, double v);
  void set_c(int i, int j, int l, double v);
  void set_dc(int i, int j, double v);
};

/// First-order form of the reduced system: (a, a', b_I, b'_I) at y.
struct OdeState {
  double y = 0.0;
  double a = 0.0, da = 0.0;
  std::vector<double> b, db;
};

struct OdeRhs {
  double dda = 0.0;
  std::vector<double> ddb;
};

constexpr double kSingularCThreshold = 1e-8;
constexpr double kIdentityTolerance = 1e-10;

std::vector<double> axis_point(int n, double y);

/// Axis data from the third-order jet of f at (0, ..., 0, y). The vanishing of
/// c, c_{x_i}, c_y, c_{y x_i}, c_{yy x_i} on the axis is checked and reported as
/// IdentityViolation.
AxisProfile decompose(const GraphHypersurface& S, double y);

/// Residuals of c, c_{x_i}, c_y, c_{y x_i}, c_{yy x_i} on the axis (max abs).
double decomposition_residual(const GraphHypersurface& S, double y);

/// Minkowski restriction of A - phi B to the axis:
///   alpha = C a'' + sum_j c_jj (D + b_j^2) + 2 sum_{i<j} b_i b_j c_ij + 2 sum_i a' b_i b'_i - phi D
/// with C = 1 - sum b_i^2 and D = 1 - a'^2 - sum b_i^2.
double alpha(const AxisProfile& p);
/// Minkowski restriction of d/dx_l (A - phi B) to the axis (l is 0-based).
/// The phi-free part is the closed display for alpha_l; the phi part is
/// -phi_l D + 2 phi (sum_m b_m c_ml + a' b'_l).
double alpha_l(const AxisProfile& p, int l);

/// The same restrictions through the connection form of A: A - phi B at the
/// axis and a Richardson-extrapolated central difference of it in x_l.
double alpha_generic(const GraphHypersurface& S, double y);
double alpha_l_generic(const GraphHypersurface& S, double y, int l);

/// Solves alpha = 0 for a'' and then alpha_l = 0 for each b''_l, with the
/// c-blocks and phi of `frozen` held fixed and (a, a', b, b') from `state`.
/// Throws SingularC when |C| < 1e-8.
OdeRhs ode_rhs(const AxisProfile& frozen, const OdeState& state);

/// Reduced-ODE right-hand side for a surface: the c-blocks are frozen from
/// decompose(S, state.y). Minkowski metrics use the closed forms, other
/// metrics the connection form (ode_rhs_generic).
OdeRhs ode_rhs(const GraphHypersurface& S, const OdeState& state);

/// Right-hand side through the connection form: a cubic model surface carrying
/// the state and the frozen c-blocks is built, and A - phi B and its x_l
/// derivative are evaluated on it (affine in a'' and b''_l).
OdeRhs ode_rhs_generic(const GraphHypersurface& S, const OdeState& state);

/// |a|, |a' - 1|, |b_i|, |b'_i| all <= tol.
bool is_degenerate_initial(const AxisProfile& p, double tol = 1e-9);

/// Minkowski only. Translates F(q) to the origin and applies a Lorentz map
/// (rotation then boost) taking dF_q(v) to (1, 0, ..., 0, 1); the image is
/// re-expressed as a graph over [-radius, radius]^n by Newton iteration.
/// Throws NotLightLike when dF_q(v) is not light-like, ReGraphFailure when
/// Newton does not converge in 50 iterations.
GraphHypersurface normalize_graph(const GraphHypersurface& S, std::span<const double> q, std::span<const double> v,
                                  double radius = 0.25);

}  // namespace lightcone
