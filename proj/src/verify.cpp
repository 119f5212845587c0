#include "lightcone/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "lightcone/parallel.hpp"

namespace lightcone {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

std::vector<double> pack(const OdeState& s) {
  std::vector<double> v{s.a, s.da};
  v.insert(v.end(), s.b.begin(), s.b.end());
  v.insert(v.end(), s.db.begin(), s.db.end());
  return v;
}

OdeState unpack(double y, std::span<const double> v) {
  const std::size_t k = (v.size() - 2) / 2;
  OdeState s;
  s.y = y;
  s.a = v[0];
  s.da = v[1];
  s.b.assign(v.begin() + 2, v.begin() + 2 + static_cast<std::ptrdiff_t>(k));
  s.db.assign(v.begin() + 2 + static_cast<std::ptrdiff_t>(k), v.end());
  return s;
}

// Derivative of the packed first-order state.
std::vector<double> field(const GraphHypersurface& S, double y, std::span<const double> v) {
  const OdeState s = unpack(y, v);
  const OdeRhs r = ode_rhs(S, s);
  const std::size_t k = s.b.size();
  std::vector<double> d(v.size());
  d[0] = s.da;
  d[1] = r.dda;
  for (std::size_t i = 0; i < k; ++i) {
    d[2 + i] = s.db[i];
    d[2 + k + i] = r.ddb[i];
  }
  return d;
}

std::vector<double> axpy(std::span<const double> x, double h, std::span<const double> d) {
  std::vector<double> r(x.begin(), x.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += h * d[i];
  return r;
}

}  // namespace

ResidualScan zmc_residual_scan(const GraphHypersurface& S, const Grid& grid) {
  if (grid.dim() != S.n) throw std::invalid_argument("grid dimension must equal n");
  std::vector<double> values(grid.size());
  parallel_for(values.size(), [&](std::size_t flat) {
    const std::vector<double> x = grid.point(grid.unflatten(flat));
    const double v = std::fabs(operator_tildeA(S, x));
    values[flat] = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  });
  ResidualScan scan;
  scan.nodes = values.size();
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  scan.max = values[best];
  scan.location = grid.point(grid.unflatten(best));
  return scan;
}

OdeTrajectory integrate_reduced_ode(const GraphHypersurface& S, double y0, double y1, int steps,
                                    const OdeState& init) {
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  if (static_cast<int>(init.b.size()) != S.n - 1 || static_cast<int>(init.db.size()) != S.n - 1)
    throw std::invalid_argument("initial state must carry n-1 coefficients b and b'");
  OdeTrajectory traj;
  const double h = (y1 - y0) / steps;
  traj.step = h;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  OdeState first = init;
  first.y = y0;
  traj.states.push_back(first);
  std::vector<double> v = pack(first);
  for (int k = 0; k < steps; ++k) {
    const double y = y0 + k * h;
    try {
      const std::vector<double> k1 = field(S, y, v);
      const std::vector<double> k2 = field(S, y + 0.5 * h, axpy(v, 0.5 * h, k1));
      const std::vector<double> k3 = field(S, y + 0.5 * h, axpy(v, 0.5 * h, k2));
      const std::vector<double> k4 = field(S, y + h, axpy(v, h, k3));
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    } catch (const SingularC& e) {
      throw OdeBreakdown(e, std::move(traj));
    }
    traj.states.push_back(unpack(y0 + (k + 1) * h, v));
  }
  return traj;
}

StateBox StateBox::around(const OdeState& center, double half_width) {
  StateBox box;
  box.y = center.y;
  for (double c : pack(center)) {
    box.lower.push_back(c - half_width);
    box.upper.push_back(c + half_width);
  }
  return box;
}

double estimate_lipschitz(const GraphHypersurface& S, const StateBox& box, int samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("at least two samples are required");
  const int k = S.n - 1;
  if (box.dim() != 2 + 2 * k) throw std::invalid_argument("state box must have dimension 2n");
  for (int i = 0; i < box.dim(); ++i)
    if (box.lower[static_cast<std::size_t>(i)] > box.upper[static_cast<std::size_t>(i)])
      throw std::invalid_argument("state box bounds are reversed");

  // C = 1 - sum b_i^2 ranges over [1 - sum max b_i^2, 1 - sum min b_i^2].
  double hi2 = 0.0, lo2 = 0.0;
  for (int i = 0; i < k; ++i) {
    const double l = box.lower[static_cast<std::size_t>(2 + i)], u = box.upper[static_cast<std::size_t>(2 + i)];
    const double m = std::max(std::fabs(l), std::fabs(u));
    const double z = (l <= 0.0 && u >= 0.0) ? 0.0 : std::min(std::fabs(l), std::fabs(u));
    hi2 += m * m;
    lo2 += z * z;
  }
  const double c_min = 1.0 - hi2, c_max = 1.0 - lo2;
  if (c_min < kSingularCThreshold && c_max > -kSingularCThreshold)
    throw SingularC(box.y, std::clamp(0.0, c_min, c_max));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t pairs = static_cast<std::size_t>(samples);
  std::vector<std::vector<double>> points(2 * pairs);
  for (auto& p : points) {
    p.resize(static_cast<std::size_t>(box.dim()));
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * unit(rng);
  }
  std::vector<std::vector<double>> rhs(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const OdeRhs r = ode_rhs(S, unpack(box.y, points[i]));
    rhs[i] = {r.dda};
    rhs[i].insert(rhs[i].end(), r.ddb.begin(), r.ddb.end());
  });

  double best = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    const auto& s1 = points[2 * p];
    const auto& s2 = points[2 * p + 1];
    double ds = 0.0, dr = 0.0;
    for (std::size_t i = 0; i < s1.size(); ++i) ds += (s1[i] - s2[i]) * (s1[i] - s2[i]);
    for (std::size_t i = 0; i < rhs[2 * p].size(); ++i)
      dr += (rhs[2 * p][i] - rhs[2 * p + 1][i]) * (rhs[2 * p][i] - rhs[2 * p + 1][i]);
    if (ds > 0.0) best = std::max(best, std::sqrt(dr / ds));
  }
  return best;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Inapplicable:
      return "INAPPLICABLE";
  }
  return "?";
}

std::string TheoremReport::verdict_text() const {
  if (verdict == Verdict::Pass) return "PASS";
  return std::string(to_string(verdict)) + "(" + reason + ")";
}

TheoremReport verify_theorem(const GraphHypersurface& S, const VerifyOptions& options) {
  TheoremReport report;
  report.options = options;
  const TheoremTolerances& tol = options.tol;
  std::vector<std::string> inapplicable;

  auto join = [](const std::vector<std::string>& parts) {
    std::string out;
    for (const std::string& p : parts) out += (out.empty() ? "" : "; ") + p;
    return out;
  };
  auto finish = [&](Verdict v, const std::vector<std::string>& reasons) {
    report.verdict = v;
    report.reason = join(reasons);
    return report;
  };

  if (!(options.t0 <= 0.0 && 0.0 <= options.t1 && options.t0 < options.t1))
    return finish(Verdict::Inapplicable, {"t_span must contain 0"});
  if (options.steps < 1) return finish(Verdict::Inapplicable, {"steps must be positive"});

  try {
    AxisProfile p0 = decompose(S, 0.0);
    report.initial = p0;
    if (!is_degenerate_initial(p0)) {
      inapplicable.push_back("initial data at y=0 is not (a, a', b, b') = (0, 1, 0, 0): a=" + fmt(p0.a) +
                             " a'=" + fmt(p0.da) + " max|b|=" + fmt(max_abs(p0.b)) + " max|b'|=" + fmt(max_abs(p0.db)));
    }
  } catch (const Error& e) {
    inapplicable.push_back(std::string("axis data at y=0 unavailable: ") + e.what());
  }

  try {
    const ResidualScan scan = zmc_residual_scan(S, Grid::uniform(S.domain, std::max(2, options.zmc_nodes)));
    report.zmc_residual_max = scan.max;
    report.zmc_location = scan.location;
    if (!(scan.max <= tol.zmc)) inapplicable.push_back("zmc residual " + fmt(scan.max) + " > " + fmt(tol.zmc));
  } catch (const Error& e) {
    inapplicable.push_back(std::string("zmc scan failed: ") + e.what());
  }
  if (!inapplicable.empty()) return finish(Verdict::Inapplicable, inapplicable);

  std::vector<std::string> failures;
  const std::size_t count = static_cast<std::size_t>(options.steps) + 1;
  const double dt = (options.t1 - options.t0) / options.steps;
  std::vector<double> contain(count), bval(count), gval(count);
  try {
    parallel_for(count, [&](std::size_t k) {
      const double t = options.t0 + static_cast<double>(k) * dt;
      const std::vector<double> x = axis_point(S.n, t);
      contain[k] = std::fabs(S.f->value(x) - t);
      const FirstFundamental ff = first_fundamental(S, x);
      bval[k] = std::fabs(ff.B);
      double g2 = 0.0;
      for (double g : ff.gradB) g2 += g * g;
      gval[k] = std::sqrt(g2);
    });
    report.containment_max = *std::max_element(contain.begin(), contain.end());
    report.degeneracy_B_max = *std::max_element(bval.begin(), bval.end());
    report.degeneracy_gradB_max = *std::max_element(gval.begin(), gval.end());
    if (!(*report.containment_max <= tol.containment))
      failures.push_back("containment " + fmt(*report.containment_max) + " > " + fmt(tol.containment));
    if (!(*report.degeneracy_B_max <= tol.B))
      failures.push_back("|B| " + fmt(*report.degeneracy_B_max) + " > " + fmt(tol.B));
    if (!(*report.degeneracy_gradB_max <= tol.gradB))
      failures.push_back("|grad B| " + fmt(*report.degeneracy_gradB_max) + " > " + fmt(tol.gradB));
  } catch (const Error& e) {
    failures.push_back(std::string("axis evaluation failed: ") + e.what());
  }

  OdeState init;
  init.a = 0.0;
  init.da = 1.0;
  init.b.assign(static_cast<std::size_t>(S.n - 1), 0.0);
  init.db.assign(static_cast<std::size_t>(S.n - 1), 0.0);
  try {
    const double span = options.t1 - options.t0;
    double dev = 0.0;
    auto deviation = [&](const OdeTrajectory& tr) {
      for (const OdeState& s : tr.states) {
        double d2 = (s.a - s.y) * (s.a - s.y);
        for (double b : s.b) d2 += b * b;
        dev = std::max(dev, std::sqrt(d2));
        if (std::isnan(d2)) dev = std::numeric_limits<double>::infinity();
      }
    };
    if (options.t1 > 0.0) {
      const int n_fwd = std::max(1, static_cast<int>(std::lround(options.steps * options.t1 / span)));
      deviation(integrate_reduced_ode(S, 0.0, options.t1, n_fwd, init));
    }
    if (options.t0 < 0.0) {
      const int n_bwd = std::max(1, static_cast<int>(std::lround(options.steps * -options.t0 / span)));
      deviation(integrate_reduced_ode(S, 0.0, options.t0, n_bwd, init));
    }
    report.ode_deviation = dev;
    if (!(dev <= tol.ode)) failures.push_back("ode deviation " + fmt(dev) + " > " + fmt(tol.ode));
  } catch (const Error& e) {
    failures.push_back(std::string("reduced ODE failed: ") + e.what());
  }

  try {
    OdeState center = init;
    report.lipschitz_estimate =
        estimate_lipschitz(S, StateBox::around(center, options.lipschitz_half_width),
                           std::max(2, options.lipschitz_samples), options.seed);
  } catch (const Error&) {
  }

  if (!failures.empty()) return finish(Verdict::Fail, failures);
  return finish(Verdict::Pass, {});
}

}  // namespace lightcone
