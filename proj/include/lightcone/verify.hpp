#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lightcone/reduction.hpp"

namespace lightcone {

struct ResidualScan {
  double max = 0.0;             // max |A - phi B| over the grid (inf if any value is NaN)
  std::vector<double> location;  // first node attaining the max
  std::size_t nodes = 0;
};

/// |A - phi B| over every node of the grid. Ties keep the lowest flat index.
ResidualScan zmc_residual_scan(const GraphHypersurface& S, const Grid& grid);

struct OdeTrajectory {
  std::vector<OdeState> states;  // states[k] at y0 + k h
  double step = 0.0;
};

/// Raised when |C| drops below threshold during integration; carries the
/// states computed so far.
class OdeBreakdown : public SingularC {
 public:
  OdeBreakdown(const SingularC& cause, OdeTrajectory partial)
      : SingularC(cause.y(), cause.c()), partial_(std::move(partial)) {}
  const OdeTrajectory& partial() const { return partial_; }

 private:
  OdeTrajectory partial_;
};

/// Classical RK4 with `steps` equal steps from y0 to y1 (y1 < y0 integrates
/// backwards) on (a, a', b, b')' = (a', ode_rhs.dda, b', ode_rhs.ddb).
OdeTrajectory integrate_reduced_ode(const GraphHypersurface& S, double y0, double y1, int steps,
                                    const OdeState& init);

/// Box of ODE states at a fixed y. Coordinates are (a, a', b_1..b_{n-1},
/// b'_1..b'_{n-1}).
struct StateBox {
  double y = 0.0;
  std::vector<double> lower, upper;

  /// Box of the given half width around `center`.
  static StateBox around(const OdeState& center, double half_width);
  int dim() const { return static_cast<int>(lower.size()); }
};

/// Max over random state pairs of |rhs(s1) - rhs(s2)| / |s1 - s2|, where rhs is
/// (a'', b''). Throws SingularC if the box reaches C = 1 - sum b_i^2 ~ 0.
double estimate_lipschitz(const GraphHypersurface& S, const StateBox& box, int samples, std::uint64_t seed);

struct TheoremTolerances {
  double containment = 1e-8;
  double B = 1e-8;
  double gradB = 1e-6;
  double ode = 1e-6;
  double zmc = 1e-7;
};

struct VerifyOptions {
  double t0 = -1.0, t1 = 1.0;
  int steps = 1000;
  int zmc_nodes = 21;  // per axis, over the surface domain
  int lipschitz_samples = 200;
  double lipschitz_half_width = 0.05;
  std::uint64_t seed = 20240521;
  TheoremTolerances tol;
};

enum class Verdict { Pass, Fail, Inapplicable };
const char* to_string(Verdict v);

struct TheoremReport {
  Verdict verdict = Verdict::Inapplicable;
  std::string reason;  // empty on PASS
  std::optional<double> zmc_residual_max;
  std::vector<double> zmc_location;
  std::optional<double> containment_max;
  std::optional<double> degeneracy_B_max;
  std::optional<double> degeneracy_gradB_max;
  std::optional<double> ode_deviation;
  std::optional<double> lipschitz_estimate;
  std::optional<AxisProfile> initial;  // axis data at y = 0
  VerifyOptions options;

  /// "PASS", "FAIL(reason)" or "INAPPLICABLE(reason)".
  std::string verdict_text() const;
};

/// Checks the hypotheses (degenerate initial data at y = 0, A - phi B = 0 on
/// the domain grid) and then the conclusions along sigma(t) = (t, 0, ..., 0, t):
/// containment, |B| and |grad B| on the axis, and the reduced ODE solution
/// from (a, a', b, b') = (0, 1, 0, 0). Never throws for surface-related
/// failures; they are encoded in the verdict.
TheoremReport verify_theorem(const GraphHypersurface& S, const VerifyOptions& options = {});

}  // namespace lightcone
