#include <gtest/gtest.h>

#include <cmath>

#include "lightcone/verify.hpp"

using namespace lightcone;

namespace {

GraphHypersurface graph(const std::string& f, int n, const std::string& phi = "0") {
  return GraphHypersurface::make(parse_field(f, n), MetricField::minkowski(n), parse_field(phi, n));
}

OdeState init(double a, double da, std::vector<double> b, std::vector<double> db) {
  OdeState s;
  s.a = a;
  s.da = da;
  s.b = std::move(b);
  s.db = std::move(db);
  return s;
}

double end_error(const OdeTrajectory& t, const OdeTrajectory& ref) {
  const OdeState& a = t.states.back();
  const OdeState& b = ref.states.back();
  double e = std::fabs(a.a - b.a) + std::fabs(a.da - b.da);
  for (std::size_t i = 0; i < a.b.size(); ++i) e += std::fabs(a.b[i] - b.b[i]) + std::fabs(a.db[i] - b.db[i]);
  return e;
}

}  // namespace

TEST(ResidualScan, Examples) {
  EXPECT_EQ(zmc_residual_scan(graph("xn", 2), Grid::uniform(Box::cube(2, 1), 11)).max, 0.0);

  const ResidualScan t = zmc_residual_scan(graph("x1*tanh(x2)", 2), Grid::uniform(Box::cube(2, 2), 101));
  EXPECT_LT(t.max, 1e-8);
  EXPECT_EQ(t.nodes, 101u * 101u);

  const ResidualScan p = zmc_residual_scan(graph("x1^2/2", 2), Grid::uniform(Box::cube(2, 0.5), 11));
  EXPECT_GE(p.max, 1.0);
  ASSERT_EQ(p.location.size(), 2u);
  EXPECT_EQ(p.location[1], -0.5);
}

TEST(ResidualScan, TieKeepsFirstNode) {
  const ResidualScan s = zmc_residual_scan(graph("0", 2, "1"), Grid::uniform(Box::cube(2, 1), 5));
  EXPECT_EQ(s.max, 1.0);
  EXPECT_EQ(s.location, (std::vector<double>{-1, -1}));
}

TEST(ResidualScan, LocationAndDomain) {
  const ResidualScan s = zmc_residual_scan(graph("0", 2, "sqrt(x1)"), Grid::uniform(Box{{0, 0}, {1, 1}}, 3));
  EXPECT_EQ(s.max, 1.0);
  EXPECT_EQ(s.location, (std::vector<double>{1, 0}));
  EXPECT_THROW(zmc_residual_scan(graph("0", 2, "sqrt(x1)"), Grid::uniform(Box::cube(2, 1), 3)), DomainError);
}

TEST(ReducedOde, PlaneReproducesLinearSolution) {
  const OdeTrajectory t = integrate_reduced_ode(graph("xn", 3), 0.0, 1.0, 100, init(0, 1, {0, 0}, {0, 0}));
  ASSERT_EQ(t.states.size(), 101u);
  for (const OdeState& s : t.states) {
    EXPECT_NEAR(s.a, s.y, 1e-12);
    EXPECT_NEAR(s.da, 1.0, 1e-12);
    for (double b : s.b) EXPECT_NEAR(b, 0.0, 1e-12);
    for (double b : s.db) EXPECT_NEAR(b, 0.0, 1e-12);
  }
  EXPECT_DOUBLE_EQ(t.states.back().y, 1.0);
}

TEST(ReducedOde, PlaneWithOtherSlope) {
  const OdeTrajectory t = integrate_reduced_ode(graph("xn", 2), 0.0, 1.0, 50, init(0, 1.1, {0}, {0}));
  for (const OdeState& s : t.states) {
    EXPECT_NEAR(s.da, 1.1, 1e-14);
    EXPECT_NEAR(s.a, 1.1 * s.y, 1e-14);
  }
}

TEST(ReducedOde, BackwardIntegration) {
  const OdeTrajectory t = integrate_reduced_ode(graph("xn", 2), 0.0, -0.5, 10, init(0, 1, {0}, {0}));
  EXPECT_DOUBLE_EQ(t.step, -0.05);
  EXPECT_NEAR(t.states.back().a, -0.5, 1e-15);
}

TEST(ReducedOde, SingularCarriesPartialTrajectory) {
  try {
    integrate_reduced_ode(graph("xn", 2), 0.0, 1.0, 10, init(0, 1, {1}, {0}));
    FAIL() << "expected SingularC";
  } catch (const OdeBreakdown& e) {
    EXPECT_EQ(e.y(), 0.0);
    EXPECT_EQ(e.partial().states.size(), 1u);
    const SingularC& base = e;
    EXPECT_NEAR(base.c(), 0.0, 1e-15);
  }

  // A steep transverse slope drives b into 1 part way through.
  try {
    integrate_reduced_ode(graph("xn", 2), 0.0, 1.0, 100, init(0, 1, {0.5}, {10.0}));
    FAIL() << "expected SingularC";
  } catch (const OdeBreakdown& e) {
    const auto& states = e.partial().states;
    ASSERT_GT(states.size(), 1u);
    EXPECT_LT(states.size(), 101u);
    EXPECT_GT(e.y(), 0.0);
    EXPECT_LT(e.y(), 1.0);
    EXPECT_NEAR(e.y(), states.back().y, 0.01 + 1e-12);
    for (const OdeState& st : states) EXPECT_LT(std::fabs(st.b[0]), 1.0);
  }
}

TEST(ReducedOde, ArgumentChecks) {
  EXPECT_THROW(integrate_reduced_ode(graph("xn", 2), 0, 1, 0, init(0, 1, {0}, {0})), std::invalid_argument);
  EXPECT_THROW(integrate_reduced_ode(graph("xn", 2), 0, 1, 5, init(0, 1, {0, 0}, {0})), std::invalid_argument);
}

TEST(ReducedOde, FourthOrderConvergence) {
  const GraphHypersurface S = graph("xn + x1^2*xn", 2);
  const OdeState s0 = init(0, 0.5, {0.2}, {0.1});
  const OdeTrajectory ref = integrate_reduced_ode(S, 0.0, 1.0, 4096, s0);
  double prev = end_error(integrate_reduced_ode(S, 0.0, 1.0, 8, s0), ref);
  for (int steps : {16, 32, 64}) {
    const double err = end_error(integrate_reduced_ode(S, 0.0, 1.0, steps, s0), ref);
    const double ratio = prev / err;
    EXPECT_GE(ratio, 13.0) << steps;
    EXPECT_LE(ratio, 19.0) << steps;
    prev = err;
  }
}

TEST(ReducedOde, PlaneDeviationIndependentOfSteps) {
  const GraphHypersurface S = graph("xn", 2);
  for (int steps : {10, 37, 100, 1000}) {
    const OdeTrajectory t = integrate_reduced_ode(S, 0.0, 1.0, steps, init(0, 1, {0}, {0}));
    double dev = 0.0;
    for (const OdeState& s : t.states) dev = std::max({dev, std::fabs(s.a - s.y), std::fabs(s.b[0])});
    EXPECT_LE(dev, 1e-12) << steps;
  }
}

TEST(Lipschitz, PlaneRhsVanishesWithoutTransverseSlope) {
  // The plane's a'' carries 2 a' b b' / C, so it is zero only on b = b' = 0.
  StateBox box = StateBox::around(init(0, 1, {0}, {0}), 0.5);
  box.lower[2] = box.upper[2] = 0.0;
  box.lower[3] = box.upper[3] = 0.0;
  EXPECT_EQ(estimate_lipschitz(graph("xn", 2), box, 200, 1), 0.0);
}

TEST(Lipschitz, PlaneOnUnitBoxIsFinite) {
  const double L = estimate_lipschitz(graph("xn", 2), StateBox::around(init(0, 1, {0}, {0}), 0.5), 400, 3);
  EXPECT_GT(L, 0.0);
  EXPECT_TRUE(std::isfinite(L));
}

TEST(Lipschitz, StableUnderRefinement) {
  const GraphHypersurface S = graph("xn + x1^2*xn", 2);
  const StateBox box = StateBox::around(init(0, 1, {0}, {0}), 0.1);
  const double l1 = estimate_lipschitz(S, box, 200, 11);
  const double l2 = estimate_lipschitz(S, box, 400, 11);
  EXPECT_GT(l1, 0.0);
  EXPECT_LE(std::fabs(l2 - l1), 0.2 * l1);
}

TEST(Lipschitz, DeterministicForSeed) {
  const GraphHypersurface S = graph("xn + x1^2*xn", 2);
  const StateBox box = StateBox::around(init(0, 1, {0}, {0}), 0.1);
  EXPECT_EQ(estimate_lipschitz(S, box, 100, 5), estimate_lipschitz(S, box, 100, 5));
}

TEST(Lipschitz, Errors) {
  const GraphHypersurface S = graph("xn", 2);
  StateBox touching = StateBox::around(init(0, 1, {0.9}, {0}), 0.2);
  EXPECT_THROW(estimate_lipschitz(S, touching, 10, 1), SingularC);
  EXPECT_THROW(estimate_lipschitz(S, StateBox::around(init(0, 1, {0}, {0}), 0.1), 1, 1), std::invalid_argument);
  EXPECT_THROW(estimate_lipschitz(S, StateBox::around(init(0, 1, {0, 0}, {0, 0}), 0.1), 10, 1),
               std::invalid_argument);
}

TEST(Verify, PlanePasses) {
  for (int n : {2, 3}) {
    const TheoremReport r = verify_theorem(graph("xn", n));
    EXPECT_EQ(r.verdict, Verdict::Pass) << r.verdict_text();
    EXPECT_EQ(r.verdict_text(), "PASS");
    EXPECT_LE(*r.containment_max, 1e-12);
    EXPECT_LE(*r.degeneracy_B_max, 1e-12);
    EXPECT_LE(*r.degeneracy_gradB_max, 1e-12);
    EXPECT_LE(*r.ode_deviation, 1e-12);
    EXPECT_LE(*r.zmc_residual_max, 1e-12);
    ASSERT_TRUE(r.lipschitz_estimate.has_value());
  }
}

TEST(Verify, TiltedPlaneAfterNormalizationPasses) {
  const GraphHypersurface N =
      normalize_graph(graph("x1", 2), std::vector<double>{0, 0}, std::vector<double>{1, 0}, 1.0);
  VerifyOptions o;
  o.t0 = -0.5;
  o.t1 = 0.5;
  o.steps = 100;
  o.zmc_nodes = 5;
  const TheoremReport r = verify_theorem(N, o);
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.verdict_text();
}

TEST(Verify, CurvedMetricPlanePasses) {
  const MetricField M = MetricField::parse_upper_triangle(2, {"-(1 + 0.1*x1^2)", "0", "0", "1", "0", "1"});
  const GraphHypersurface S = GraphHypersurface::make(parse_field("xn", 2), M);
  VerifyOptions o;
  o.steps = 200;
  const TheoremReport r = verify_theorem(S, o);
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.verdict_text();
}

TEST(Verify, ParaboloidIsInapplicable) {
  const TheoremReport r = verify_theorem(graph("x1^2/2", 2));
  EXPECT_EQ(r.verdict, Verdict::Inapplicable);
  EXPECT_NE(r.reason.find("zmc residual"), std::string::npos);
  EXPECT_NE(r.reason.find("initial data"), std::string::npos);
  EXPECT_FALSE(r.ode_deviation.has_value());
  EXPECT_EQ(r.verdict_text().rfind("INAPPLICABLE(", 0), 0u);
}

TEST(Verify, TanhIsInapplicableAfterNormalization) {
  const GraphHypersurface t = graph("x1*tanh(x2)", 2);
  const std::vector<double> q{std::cosh(1.0), 1.0};
  VerifyOptions o;
  o.t0 = -0.1;
  o.t1 = 0.1;
  o.steps = 20;
  o.zmc_nodes = 5;
  const TheoremReport r = verify_theorem(normalize_graph(t, q, lightlike_direction(t, q)), o);
  EXPECT_EQ(r.verdict, Verdict::Inapplicable) << r.verdict_text();
  EXPECT_NE(r.reason.find("initial data"), std::string::npos);
  EXPECT_EQ(r.reason.find("zmc residual"), std::string::npos);
}

TEST(Verify, SpanMustContainZero) {
  VerifyOptions o;
  o.t0 = 0.1;
  const TheoremReport r = verify_theorem(graph("xn", 2), o);
  EXPECT_EQ(r.verdict, Verdict::Inapplicable);
}

TEST(Verify, ViolatedToleranceFails) {
  VerifyOptions o;
  o.tol.ode = -1.0;
  const TheoremReport r = verify_theorem(graph("xn", 2), o);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_NE(r.reason.find("ode deviation"), std::string::npos);
}

TEST(Verify, OptionsAreEchoed) {
  VerifyOptions o;
  o.steps = 50;
  o.seed = 99;
  const TheoremReport r = verify_theorem(graph("xn", 2), o);
  EXPECT_EQ(r.options.steps, 50);
  EXPECT_EQ(r.options.seed, 99u);
  EXPECT_EQ(r.options.tol.zmc, 1e-7);
}
