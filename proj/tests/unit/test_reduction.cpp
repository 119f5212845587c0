#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "lightcone/reduction.hpp"
#include "oracle.hpp"

using namespace lightcone;

namespace {

GraphHypersurface graph(const std::string& f, int n, const std::string& phi = "0") {
  return GraphHypersurface::make(parse_field(f, n), MetricField::minkowski(n), parse_field(phi, n));
}

OdeState state(double y, double a, double da, std::vector<double> b, std::vector<double> db) {
  OdeState s;
  s.y = y;
  s.a = a;
  s.da = da;
  s.b = std::move(b);
  s.db = std::move(db);
  return s;
}

OdeState state_of(const AxisProfile& p) { return state(p.y, p.a, p.da, p.b, p.db); }

AxisProfile synthetic() {
  AxisProfile p = AxisProfile::zero(2, 0.0);
  p.da = 1.0;
  p.dda = 2.0;
  p.b = {0.5};
  p.db = {1.0};
  p.set_c(0, 0, 3.0);
  return p;
}

}  // namespace

TEST(Decompose, Plane) {
  for (double y : {-0.7, 0.0, 0.4}) {
    const AxisProfile p = decompose(graph("xn", 3), y);
    EXPECT_EQ(p.a, y);
    EXPECT_EQ(p.da, 1.0);
    EXPECT_EQ(p.dda, 0.0);
    for (double v : p.b) EXPECT_EQ(v, 0.0);
    for (double v : p.db) EXPECT_EQ(v, 0.0);
    for (double v : p.ddb) EXPECT_EQ(v, 0.0);
    for (double v : p.c2) EXPECT_EQ(v, 0.0);
    for (double v : p.c3) EXPECT_EQ(v, 0.0);
    for (double v : p.dc2) EXPECT_EQ(v, 0.0);
  }
}

TEST(Decompose, Tanh) {
  const GraphHypersurface S = graph("x1*tanh(x2)", 2);
  for (double y : {-0.9, 0.3, 1.2}) {
    const AxisProfile p = decompose(S, y);
    const double t = std::tanh(y), s2 = 1.0 / (std::cosh(y) * std::cosh(y));
    EXPECT_EQ(p.a, 0.0);
    EXPECT_EQ(p.da, 0.0);
    EXPECT_NEAR(p.b[0], t, 1e-15);
    EXPECT_NEAR(p.db[0], s2, 1e-15);
    EXPECT_NEAR(p.ddb[0], -2.0 * s2 * t, 1e-15);
    EXPECT_EQ(p.c(0, 0), 0.0);
    EXPECT_EQ(p.c(0, 0, 0), 0.0);
    EXPECT_EQ(p.dc(0, 0), 0.0);
    // Finite-difference cross-check of b and b' along the axis.
    const auto fx = [&](double yy) { return S.f->jet(std::vector<double>{0.0, yy}, 1).d(0); };
    EXPECT_NEAR(p.db[0], (fx(y + 1e-5) - fx(y - 1e-5)) / 2e-5, 1e-9);
  }
}

TEST(Decompose, CubicCorrection) {
  const AxisProfile p = decompose(graph("xn + x1^2*xn", 2), 0.6);
  EXPECT_DOUBLE_EQ(p.a, 0.6);
  EXPECT_EQ(p.b[0], 0.0);
  EXPECT_DOUBLE_EQ(p.c(0, 0), 1.2);
  EXPECT_DOUBLE_EQ(p.dc(0, 0), 2.0);
  EXPECT_EQ(p.c(0, 0, 0), 0.0);
}

TEST(Decompose, BlocksAreSymmetricAndIdentitiesHold) {
  oracle::ExpressionGenerator gen(3, 77);
  for (int trial = 0; trial < 40; ++trial) {
    const GraphHypersurface S = graph(trial % 2 ? gen.polynomial() : gen.next(3), 3);
    const double y = gen.uniform(-0.8, 0.8);
    EXPECT_LE(decomposition_residual(S, y), kIdentityTolerance);
    const AxisProfile p = decompose(S, y);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        EXPECT_EQ(p.c(i, j), p.c(j, i));
        EXPECT_EQ(p.dc(i, j), p.dc(j, i));
        for (int l = 0; l < 2; ++l) {
          EXPECT_EQ(p.c(i, j, l), p.c(j, l, i));
          EXPECT_EQ(p.c(i, j, l), p.c(l, i, j));
        }
      }
  }
}

TEST(Decompose, OutsideDomainOfExpression) {
  EXPECT_THROW(decompose(graph("log(xn)", 2), -1.0), DomainError);
}

TEST(Alpha, Examples) {
  const AxisProfile plane = decompose(graph("xn", 2), 0.3);
  EXPECT_EQ(alpha(plane), 0.0);
  EXPECT_EQ(alpha_l(plane, 0), 0.0);
  EXPECT_DOUBLE_EQ(alpha(synthetic()), 2.5);
  const GraphHypersurface t = graph("x1*tanh(x2)", 2);
  for (double y : {-1.0, 0.0, 0.5, 2.0}) {
    const AxisProfile p = decompose(t, y);
    EXPECT_NEAR(alpha(p), 0.0, 1e-14);
    EXPECT_NEAR(alpha_l(p, 0), 0.0, 1e-14);
  }
}

TEST(Alpha, RestrictsOperatorOnAxis) {
  for (int n : {2, 3}) {
    oracle::ExpressionGenerator gen(n, 900 + n);
    for (int trial = 0; trial < 25; ++trial) {
      const GraphHypersurface S = graph(gen.polynomial(), n, trial % 3 ? "0" : gen.polynomial());
      const double y = gen.uniform(-0.5, 0.5);
      const std::vector<double> x = axis_point(n, y);
      AxisProfile p;
      try {
        p = decompose(S, y);
      } catch (const Error&) {
        continue;
      }
      EXPECT_NEAR(alpha(p), operator_tildeA(S, x), 1e-8 * std::max(1.0, std::fabs(alpha(p))));
      const oracle::ScalarFn At = [&](std::span<const double> z) { return operator_tildeA(S, z); };
      for (int l = 0; l < n - 1; ++l) {
        const int idx[1] = {l};
        const double fd = oracle::richardson(At, x, idx, 1e-2);
        EXPECT_TRUE(oracle::close_rel(alpha_l(p, l), fd, 1e-6)) << alpha_l(p, l) << " vs " << fd;
        EXPECT_TRUE(oracle::close_rel(alpha_l_generic(S, y, l), fd, 1e-6));
      }
      EXPECT_NEAR(alpha_generic(S, y), alpha(p), 1e-8 * std::max(1.0, std::fabs(alpha(p))));
    }
  }
}

TEST(OdeRhs, Examples) {
  const OdeRhs plane = ode_rhs(graph("xn", 2), state(0.2, 0.0, 1.0, {0.0}, {0.0}));
  EXPECT_EQ(plane.dda, 0.0);
  EXPECT_EQ(plane.ddb[0], 0.0);
  const OdeRhs syn = ode_rhs(synthetic(), state(0.0, 0.0, 1.0, {0.5}, {1.0}));
  EXPECT_NEAR(syn.dda, -4.0 / 3.0, 1e-15);
  EXPECT_THROW(ode_rhs(graph("xn", 2), state(0.0, 0.0, 1.0, {1.0}, {0.0})), SingularC);
  EXPECT_THROW(ode_rhs(synthetic(), state(0.0, 0.0, 1.0, {1.0}, {0.0})), SingularC);
  EXPECT_THROW(ode_rhs(synthetic(), state(0.0, 0.0, 1.0, {0.0, 0.0}, {0.0})), std::invalid_argument);
}

TEST(OdeRhs, ReproducesAxisDataOfZeroMeanCurvatureSurfaces) {
  const GraphHypersurface t = graph("x1*tanh(x2)", 2);
  const std::vector<double> q{std::cosh(1.0), 1.0};
  const GraphHypersurface surfaces[] = {t, graph("x1*tanh(x3)", 3), graph("xn", 3),
                                        normalize_graph(t, q, lightlike_direction(t, q))};
  for (const GraphHypersurface& S : surfaces) {
    for (double y : {-0.2, 0.0, 0.15}) {
      const AxisProfile p = decompose(S, y);
      const OdeRhs r = ode_rhs(S, state_of(p));
      EXPECT_NEAR(r.dda, p.dda, 1e-8);
      for (int l = 0; l < S.n - 1; ++l) EXPECT_NEAR(r.ddb[static_cast<std::size_t>(l)], p.ddb[static_cast<std::size_t>(l)], 1e-8);
    }
  }
}

TEST(OdeRhs, GenericPathMatchesClosedForm) {
  for (int n : {2, 3}) {
    oracle::ExpressionGenerator gen(n, 300 + n);
    for (int trial = 0; trial < 20; ++trial) {
      const GraphHypersurface S = graph(gen.polynomial(), n, trial % 2 ? "0" : gen.polynomial());
      const double y = gen.uniform(-0.5, 0.5);
      std::vector<double> b(static_cast<std::size_t>(n - 1)), db(b.size());
      for (double& v : b) v = gen.uniform(-0.4, 0.4);
      for (double& v : db) v = gen.uniform(-1, 1);
      const OdeState s = state(y, gen.uniform(-1, 1), gen.uniform(-1, 1), b, db);
      const OdeRhs closed = ode_rhs(decompose(S, y), s);
      const OdeRhs generic = ode_rhs_generic(S, s);
      EXPECT_TRUE(oracle::close_rel(generic.dda, closed.dda, 1e-6)) << generic.dda << " vs " << closed.dda;
      for (std::size_t l = 0; l < b.size(); ++l)
        EXPECT_TRUE(oracle::close_rel(generic.ddb[l], closed.ddb[l], 1e-5)) << generic.ddb[l] << " vs " << closed.ddb[l];
    }
  }
}

TEST(DegenerateInitial, Examples) {
  AxisProfile p = AxisProfile::zero(2, 0.0);
  p.da = 1.0;
  EXPECT_TRUE(is_degenerate_initial(p));
  p.b[0] = 0.1;
  EXPECT_FALSE(is_degenerate_initial(p));
  p.b[0] = 0.0;
  p.a = 1e-12;
  p.da = 1.0 + 1e-12;
  EXPECT_TRUE(is_degenerate_initial(p, 1e-9));
  p.db[0] = 2e-9;
  EXPECT_FALSE(is_degenerate_initial(p, 1e-9));
  EXPECT_TRUE(is_degenerate_initial(decompose(graph("xn", 4), 0.0)));
}

TEST(Normalize, IdentityOnNormalizedSurface) {
  const GraphHypersurface S = graph("xn", 3);
  const GraphHypersurface N = normalize_graph(S, std::vector<double>{0, 0, 0}, std::vector<double>{0, 0, 1});
  oracle::ExpressionGenerator gen(3, 5);
  for (int i = 0; i < 20; ++i) {
    const std::vector<double> x = gen.point(0.25);
    EXPECT_NEAR(N.f->value(x), S.f->value(x), 1e-14);
  }
}

TEST(Normalize, TiltedPlaneBecomesNormalPlane) {
  const GraphHypersurface S = graph("x1", 2);
  const GraphHypersurface N = normalize_graph(S, std::vector<double>{0, 0}, std::vector<double>{1, 0});
  oracle::ExpressionGenerator gen(2, 6);
  for (int i = 0; i < 20; ++i) {
    const std::vector<double> x = gen.point(0.25);
    const Jet3 j = N.f->jet(x, 2);
    EXPECT_NEAR(j.value(), x[1], 1e-13);
    EXPECT_NEAR(j.d(0), 0.0, 1e-13);
    EXPECT_NEAR(j.d(1), 1.0, 1e-13);
    EXPECT_NEAR(j.d(0, 0), 0.0, 1e-12);
  }
  EXPECT_TRUE(is_degenerate_initial(decompose(N, 0.0)));
}

TEST(Normalize, Errors) {
  const GraphHypersurface S = graph("x1*tanh(x2)", 2);
  EXPECT_THROW(normalize_graph(graph("0", 2), std::vector<double>{0, 0}, std::vector<double>{1, 0}), NotLightLike);
  EXPECT_THROW(normalize_graph(S, std::vector<double>{0, 0}, std::vector<double>{0, 0}), NotLightLike);
  const MetricField M = MetricField::parse_upper_triangle(2, {"-2", "0", "0", "1", "0", "1"});
  EXPECT_THROW(normalize_graph(GraphHypersurface::make(parse_field("x1", 2), M), std::vector<double>{0, 0},
                               std::vector<double>{1, 0}),
               std::invalid_argument);
}

TEST(Normalize, DegeneracyIsPreserved) {
  // Degenerate light-like point at the origin (B = -9 x2^4), and one that is not.
  const GraphHypersurface deg = graph("x1 + x2^3", 2);
  const std::vector<double> o{0, 0};
  const GraphHypersurface N = normalize_graph(deg, o, lightlike_direction(deg, o));
  EXPECT_TRUE(is_degenerate_initial(decompose(N, 0.0)));
  EXPECT_NEAR(N.f->value(o), 0.0, 1e-15);

  const GraphHypersurface t = graph("x1*tanh(x2)", 2);
  const std::vector<double> q{std::cosh(1.0), 1.0};
  const GraphHypersurface T = normalize_graph(t, q, lightlike_direction(t, q));
  const AxisProfile p = decompose(T, 0.0);
  EXPECT_NEAR(p.a, 0.0, 1e-12);
  EXPECT_NEAR(p.da, 1.0, 1e-12);
  EXPECT_NEAR(p.b[0], 0.0, 1e-12);
  EXPECT_GT(std::fabs(p.db[0]), 1e-3);
  EXPECT_FALSE(is_degenerate_initial(p));
}

TEST(Normalize, PreservesZeroMeanCurvature) {
  const GraphHypersurface t = graph("x1*tanh(x2)", 2);
  const std::vector<double> q{std::cosh(1.0), 1.0};
  const GraphHypersurface T = normalize_graph(t, q, lightlike_direction(t, q));
  oracle::ExpressionGenerator gen(2, 8);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(operator_A(T, gen.point(0.2)), 0.0, 1e-9);
}

TEST(Normalize, ReGraphFailsPastAFold) {
  // Time-like graph whose tangent plane contains the new time axis where
  // 2 + 3 x1^2 = 10/3, so the normalized chart cannot extend that far.
  const GraphHypersurface S = graph("2*x1 + x1^3", 2);
  const GraphHypersurface T =
      normalize_graph(S, std::vector<double>{0, 0}, std::vector<double>{1, std::sqrt(3.0)}, 2.0);
  int near_failures = 0, far_failures = 0;
  for (int i = -16; i <= 16; ++i)
    for (int j = -16; j <= 16; ++j) {
      const std::vector<double> x{i / 8.0, j / 8.0};
      try {
        T.f->value(x);
      } catch (const ReGraphFailure&) {
        (std::max(std::abs(i), std::abs(j)) <= 1 ? near_failures : far_failures)++;
      }
    }
  EXPECT_EQ(near_failures, 0);
  EXPECT_GT(far_failures, 0);
}
