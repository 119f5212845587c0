#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

#include "lightcone/reduction.hpp"

namespace lightcone {

namespace {

constexpr int kMaxNewton = 50;
constexpr int kContinuationStages = 32;

// Inverse of x -> spatial part of L (F(x) - P): for new spatial coordinates x'
// finds the original graph coordinates x, as jets when asked.
class ImplicitChart {
 public:
  ImplicitChart(Field f, SquareMatrix<double> lorentz, std::vector<double> origin, std::vector<double> seed)
      : f_(std::move(f)), L_(std::move(lorentz)), P_(std::move(origin)), seed_(std::move(seed)) {
    seed_jacobian_inv_ = inverse(jacobian(seed_));
  }

  int n() const { return f_->arity(); }

  std::vector<Jet3> solve(std::span<const Jet3> inputs) const {
    const int n = this->n();
    std::vector<double> target(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) target[static_cast<std::size_t>(k)] = inputs[static_cast<std::size_t>(k)].value();
    const std::vector<double> x = newton(target);

    const int m = inputs.empty() ? 0 : inputs[0].arity();
    int order = Jet3::kMaxOrder;
    for (const Jet3& in : inputs) order = std::min(order, in.order());
    std::vector<Jet3> X;
    X.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) X.push_back(Jet3::constant(m, x[static_cast<std::size_t>(i)], order));

    // Each simplified-Newton sweep with the Jacobian frozen at the root fixes
    // one more derivative order.
    const SquareMatrix<double> Jinv = inverse(jacobian(x));
    for (int sweep = 0; sweep <= order; ++sweep) {
      const std::vector<Jet3> F = embed(X);
      std::vector<Jet3> G;
      G.reserve(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) G.push_back(row(F, k + 1) - inputs[static_cast<std::size_t>(k)]);
      for (int i = 0; i < n; ++i) {
        Jet3 delta = Jinv(i, 0) * G[0];
        for (int k = 1; k < n; ++k) delta += Jinv(i, k) * G[static_cast<std::size_t>(k)];
        X[static_cast<std::size_t>(i)] -= delta;
      }
    }
    return X;
  }

  /// New time coordinate of the point with original graph coordinates X.
  Jet3 time(std::span<const Jet3> X) const { return row(embed(X), 0); }

 private:
  std::vector<Jet3> embed(std::span<const Jet3> X) const {
    std::vector<Jet3> F;
    F.reserve(X.size() + 1);
    F.push_back(f_->compose(X));
    for (const Jet3& xi : X) F.push_back(xi);
    return F;
  }

  // (L (F - P))_r
  Jet3 row(const std::vector<Jet3>& F, int r) const {
    Jet3 acc = L_(r, 0) * (F[0] - P_[0]);
    for (int b = 1; b < L_.size(); ++b) acc += L_(r, b) * (F[static_cast<std::size_t>(b)] - P_[static_cast<std::size_t>(b)]);
    return acc;
  }

  SquareMatrix<double> jacobian(const std::vector<double>& x) const {
    const int n = this->n();
    const Jet3 fj = f_->jet(x, 1);
    SquareMatrix<double> J(n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) J(k, j) = L_(k + 1, 0) * fj.d(j) + L_(k + 1, j + 1);
    return J;
  }

  static SquareMatrix<double> inverse(const SquareMatrix<double>& J) {
    const int n = J.size();
    SquareMatrix<double> inv(n, 0.0);
    for (int c = 0; c < n; ++c) {
      std::vector<double> e(static_cast<std::size_t>(n), 0.0);
      e[static_cast<std::size_t>(c)] = 1.0;
      if (!solve_linear(J, e, 1e-14))
        throw ReGraphFailure("surface is tangent to the new time direction; cannot re-graph");
      for (int r = 0; r < n; ++r) inv(r, c) = e[static_cast<std::size_t>(r)];
    }
    return inv;
  }

  std::optional<std::vector<double>> iterate(std::vector<double> x, const std::vector<double>& target) const {
    const int n = this->n();
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kMaxNewton; ++it) {
      const Jet3 fj = f_->jet(x, 1);
      std::vector<double> G(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) {
        double s = L_(k + 1, 0) * (fj.value() - P_[0]);
        for (int b = 1; b <= n; ++b) s += L_(k + 1, b) * (x[static_cast<std::size_t>(b - 1)] - P_[static_cast<std::size_t>(b)]);
        G[static_cast<std::size_t>(k)] = s - target[static_cast<std::size_t>(k)];
      }
      SquareMatrix<double> J(n, 0.0);
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) J(k, j) = L_(k + 1, 0) * fj.d(j) + L_(k + 1, j + 1);
      if (!solve_linear(J, G, 1e-14)) return std::nullopt;
      double step = 0.0, scale = 1.0;
      for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] -= G[static_cast<std::size_t>(i)];
        step = std::max(step, std::fabs(G[static_cast<std::size_t>(i)]));
        scale = std::max(scale, std::fabs(x[static_cast<std::size_t>(i)]));
      }
      // Quadratic convergence stalls at round-off; stop once the step stops shrinking there.
      if (step <= 1e-15 * scale || (step <= 1e-12 * scale && step >= 0.5 * last)) return x;
      if (!std::isfinite(step)) return std::nullopt;
      last = step;
    }
    return std::nullopt;
  }

  std::vector<double> newton(const std::vector<double>& target) const {
    const int n = this->n();
    auto guess = [&](const std::vector<double>& t) {
      std::vector<double> x = seed_;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(i)] += seed_jacobian_inv_(i, k) * t[static_cast<std::size_t>(k)];
      return x;
    };
    if (auto x = iterate(guess(target), target)) return *x;

    // Continuation from the base point keeps Newton on the sheet through the
    // origin when the surface folds back over the new time axis further out.
    std::vector<double> x = seed_, t(target.size());
    for (int stage = 1; stage <= kContinuationStages; ++stage) {
      const double s = static_cast<double>(stage) / kContinuationStages;
      for (std::size_t k = 0; k < t.size(); ++k) t[k] = s * target[k];
      auto next = iterate(x, t);
      if (!next) {
        std::ostringstream os;
        os << "Newton iteration did not converge in " << kMaxNewton << " iterations while re-graphing";
        throw ReGraphFailure(os.str());
      }
      x = std::move(*next);
    }
    return x;
  }

  Field f_;
  SquareMatrix<double> L_;
  std::vector<double> P_;
  std::vector<double> seed_;
  SquareMatrix<double> seed_jacobian_inv_;
};

class NormalizedGraphField final : public ScalarField {
 public:
  explicit NormalizedGraphField(std::shared_ptr<const ImplicitChart> chart) : chart_(std::move(chart)) {}
  int arity() const override { return chart_->n(); }
  Jet3 compose(std::span<const Jet3> inputs) const override {
    const std::vector<Jet3> X = chart_->solve(inputs);
    return chart_->time(X);
  }
  std::string describe() const override { return "<normalized graph>"; }

 private:
  std::shared_ptr<const ImplicitChart> chart_;
};

class PulledBackField final : public ScalarField {
 public:
  PulledBackField(std::shared_ptr<const ImplicitChart> chart, Field inner)
      : chart_(std::move(chart)), inner_(std::move(inner)) {}
  int arity() const override { return chart_->n(); }
  Jet3 compose(std::span<const Jet3> inputs) const override {
    const std::vector<Jet3> X = chart_->solve(inputs);
    return inner_->compose(X);
  }
  std::string describe() const override { return inner_->describe() + " (pulled back)"; }

 private:
  std::shared_ptr<const ImplicitChart> chart_;
  Field inner_;
};

bool is_zero_constant(const Field& f) {
  const auto* e = dynamic_cast<const ExpressionField*>(f.get());
  double v = 1.0;
  return e && e->expression().is_constant(&v) && v == 0.0;
}

}  // namespace

GraphHypersurface normalize_graph(const GraphHypersurface& S, std::span<const double> q, std::span<const double> v,
                                  double radius) {
  if (!S.metric.is_minkowski()) throw std::invalid_argument("normalize_graph requires the Minkowski metric");
  const int n = S.n, dim = n + 1;
  if (static_cast<int>(q.size()) != n || static_cast<int>(v.size()) != n)
    throw std::invalid_argument("normalize_graph: point and direction must have dimension n");

  const Jet3 fq = S.f->jet(q, 1);
  std::vector<double> w(static_cast<std::size_t>(dim));
  double w0 = 0.0, spatial2 = 0.0;
  for (int i = 0; i < n; ++i) {
    w0 += fq.d(i) * v[static_cast<std::size_t>(i)];
    w[static_cast<std::size_t>(i + 1)] = v[static_cast<std::size_t>(i)];
    spatial2 += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
  }
  w[0] = w0;
  const double norm2 = w0 * w0 + spatial2;
  if (norm2 == 0.0 || std::fabs(spatial2 - w0 * w0) > 1e-9 * norm2)
    throw NotLightLike("dF(v) is not a light-like vector");
  if (w0 < 0.0)
    for (double& c : w) c = -c;
  w0 = w[0];

  // Rotation R with R u = e_n for u = w_s / |w_s|: a Householder reflection
  // followed by flipping x_1 so that det R = +1.
  const double ws = std::sqrt(spatial2);
  SquareMatrix<double> R(n, 0.0);
  for (int i = 0; i < n; ++i) R(i, i) = 1.0;
  std::vector<double> h(static_cast<std::size_t>(n));
  double hh = 0.0;
  for (int i = 0; i < n; ++i) {
    h[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i + 1)] / ws - (i == n - 1 ? 1.0 : 0.0);
    hh += h[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i)];
  }
  if (hh > 1e-30) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        R(i, j) -= 2.0 * h[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(j)] / hh;
    for (int j = 0; j < n; ++j) R(0, j) = -R(0, j);
  }

  // Boost in the (x0, xn) plane with rapidity log(w0): (w0, w0) -> (1, 1).
  const double theta = std::log(w0);
  const double ch = std::cosh(theta), sh = std::sinh(theta);
  SquareMatrix<double> rot(dim, 0.0);
  rot(0, 0) = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rot(i + 1, j + 1) = R(i, j);
  SquareMatrix<double> boost(dim, 0.0);
  for (int a = 0; a < dim; ++a) boost(a, a) = 1.0;
  boost(0, 0) = ch;
  boost(0, n) = -sh;
  boost(n, 0) = -sh;
  boost(n, n) = ch;
  SquareMatrix<double> L(dim, 0.0);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      double s = 0.0;
      for (int c = 0; c < dim; ++c) s += boost(a, c) * rot(c, b);
      L(a, b) = s;
    }

  std::vector<double> origin = S.embed(q);
  auto chart = std::make_shared<const ImplicitChart>(S.f, L, std::move(origin), std::vector<double>(q.begin(), q.end()));
  Field f = std::make_shared<NormalizedGraphField>(chart);
  Field phi = is_zero_constant(S.phi) ? S.phi : Field(std::make_shared<PulledBackField>(chart, S.phi));
  return GraphHypersurface::make(std::move(f), S.metric, std::move(phi), Box::cube(n, radius));
}

}  // namespace lightcone
