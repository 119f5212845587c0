#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lightcone::cli {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  void allow(std::initializer_list<const char*> keys) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!ok.count(it.key())) throw ConfigError("unknown key '" + child_path(it.key()) + "'");
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  Reader at(const char* key) const {
    if (!j_.contains(key)) throw ConfigError("missing key '" + child_path(key) + "'");
    return Reader(j_.at(key), child_path(key));
  }
  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  std::uint64_t unsigned_integer() const {
    if (!j_.is_number_unsigned()) fail("expected a nonnegative integer");
    return j_.get<std::uint64_t>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::vector<double> numbers(std::optional<std::size_t> size = std::nullopt) const {
    if (!j_.is_array()) fail("expected an array of numbers");
    if (size && j_.size() != *size) fail("expected " + std::to_string(*size) + " numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < j_.size(); ++i) v.push_back(Reader(j_[i], path_ + "/" + std::to_string(i)).number());
    return v;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ConfigError("'" + path_ + "': " + message); }

 private:
  std::string child_path(const std::string& key) const { return path_ + "/" + key; }
  const json& j_;
  std::string path_;
};

OdeState default_init(int n) {
  OdeState s;
  s.a = 0.0;
  s.da = 1.0;
  s.b.assign(static_cast<std::size_t>(n - 1), 0.0);
  s.db.assign(static_cast<std::size_t>(n - 1), 0.0);
  return s;
}

void read_tolerances(const Reader& r, RunConfig& c) {
  r.allow({"b", "grad", "containment", "B", "gradB", "ode", "zmc"});
  if (r.has("b")) c.tol_b = r.at("b").number();
  if (r.has("grad")) c.tol_grad = r.at("grad").number();
  TheoremTolerances& t = c.verify.tol;
  if (r.has("containment")) t.containment = r.at("containment").number();
  if (r.has("B")) t.B = r.at("B").number();
  if (r.has("gradB")) t.gradB = r.at("gradB").number();
  if (r.has("ode")) t.ode = r.at("ode").number();
  if (r.has("zmc")) t.zmc = r.at("zmc").number();
}

RunConfig from_json(const json& j) {
  const Reader root(j, "");
  root.allow({"n", "f", "metric", "phi", "domain", "grid", "tolerances", "base_point", "reduce", "ode", "geodesic",
              "normalize", "verify"});
  RunConfig c;
  c.n = root.at("n").integer();
  if (c.n < 2) root.at("n").fail("n must be at least 2");
  const int n = c.n;
  const std::size_t un = static_cast<std::size_t>(n);
  c.f = root.at("f").string();
  if (root.has("phi")) c.phi = root.at("phi").string();

  if (root.has("metric")) {
    const Reader m = root.at("metric");
    if (m.raw().is_string()) {
      if (m.string() != "minkowski") m.fail("expected \"minkowski\" or an array of upper-triangle entries");
    } else {
      if (!m.raw().is_array()) m.fail("expected \"minkowski\" or an array of upper-triangle entries");
      const std::size_t want = static_cast<std::size_t>((n + 1) * (n + 2) / 2);
      if (m.raw().size() != want) m.fail("expected " + std::to_string(want) + " upper-triangle entries");
      for (std::size_t i = 0; i < want; ++i)
        c.metric.push_back(Reader(m.raw()[i], m.path() + "/" + std::to_string(i)).string());
    }
  }

  c.domain = Box::cube(n, 1.0);
  if (root.has("domain")) {
    const Reader d = root.at("domain");
    d.allow({"lower", "upper"});
    c.domain.lower = d.at("lower").numbers(un);
    c.domain.upper = d.at("upper").numbers(un);
    for (std::size_t i = 0; i < un; ++i)
      if (!(c.domain.lower[i] < c.domain.upper[i])) d.fail("box must be nonempty on every axis");
  }

  c.grid.assign(un, 21);
  if (root.has("grid")) {
    const Reader g = root.at("grid");
    if (g.raw().is_array()) {
      if (g.raw().size() != un) g.fail("expected " + std::to_string(n) + " node counts");
      for (std::size_t i = 0; i < un; ++i) c.grid[i] = Reader(g.raw()[i], g.path() + "/" + std::to_string(i)).integer();
    } else {
      c.grid.assign(un, g.integer());
    }
    for (int k : c.grid)
      if (k < 2) g.fail("grid needs at least 2 nodes per axis");
  }

  if (root.has("tolerances")) read_tolerances(root.at("tolerances"), c);
  c.base_point.assign(un + 1, 0.0);
  if (root.has("base_point")) c.base_point = root.at("base_point").numbers(un + 1);

  if (root.has("reduce")) {
    const Reader r = root.at("reduce");
    r.allow({"y0", "y1", "samples"});
    if (r.has("y0")) c.reduce.y0 = r.at("y0").number();
    if (r.has("y1")) c.reduce.y1 = r.at("y1").number();
    if (r.has("samples")) c.reduce.samples = r.at("samples").integer();
    if (c.reduce.samples < 2) r.at("samples").fail("need at least 2 samples");
  }

  c.ode.init = default_init(n);
  if (root.has("ode")) {
    const Reader r = root.at("ode");
    r.allow({"y0", "y1", "steps", "init"});
    if (r.has("y0")) c.ode.y0 = r.at("y0").number();
    if (r.has("y1")) c.ode.y1 = r.at("y1").number();
    if (r.has("steps")) c.ode.steps = r.at("steps").integer();
    if (r.has("init")) {
      const Reader i = r.at("init");
      i.allow({"a", "da", "b", "db"});
      if (i.has("a")) c.ode.init.a = i.at("a").number();
      if (i.has("da")) c.ode.init.da = i.at("da").number();
      if (i.has("b")) c.ode.init.b = i.at("b").numbers(un - 1);
      if (i.has("db")) c.ode.init.db = i.at("db").numbers(un - 1);
    }
  }

  c.geodesic.point.assign(un + 1, 0.0);
  c.geodesic.velocity.assign(un + 1, 0.0);
  c.geodesic.velocity.front() = 1.0;
  c.geodesic.velocity.back() = 1.0;
  if (root.has("geodesic")) {
    const Reader r = root.at("geodesic");
    r.allow({"point", "velocity", "t0", "t1", "steps"});
    if (r.has("point")) c.geodesic.point = r.at("point").numbers(un + 1);
    if (r.has("velocity")) c.geodesic.velocity = r.at("velocity").numbers(un + 1);
    if (r.has("t0")) c.geodesic.t0 = r.at("t0").number();
    if (r.has("t1")) c.geodesic.t1 = r.at("t1").number();
    if (r.has("steps")) c.geodesic.steps = r.at("steps").integer();
  }

  if (root.has("normalize")) {
    const Reader r = root.at("normalize");
    r.allow({"point", "direction", "radius"});
    NormalizeParams p;
    p.point = r.at("point").numbers(un);
    if (r.has("direction")) p.direction = r.at("direction").numbers(un);
    if (r.has("radius")) p.radius = r.at("radius").number();
    if (!(p.radius > 0.0)) r.at("radius").fail("radius must be positive");
    c.normalize = p;
  }

  if (root.has("verify")) {
    const Reader r = root.at("verify");
    r.allow({"t_span", "steps", "zmc_nodes", "lipschitz_samples", "lipschitz_half_width", "seed"});
    VerifyOptions& v = c.verify;
    if (r.has("t_span")) {
      const std::vector<double> span = r.at("t_span").numbers(2);
      v.t0 = span[0];
      v.t1 = span[1];
    }
    if (r.has("steps")) v.steps = r.at("steps").integer();
    if (r.has("zmc_nodes")) v.zmc_nodes = r.at("zmc_nodes").integer();
    if (r.has("lipschitz_samples")) v.lipschitz_samples = r.at("lipschitz_samples").integer();
    if (r.has("lipschitz_half_width")) v.lipschitz_half_width = r.at("lipschitz_half_width").number();
    if (r.has("seed")) v.seed = r.at("seed").unsigned_integer();
  }
  return c;
}

template <class Fn>
auto with_path(const char* path, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("'/") + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("'/") + path + "': " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    const auto colon = what.find("; ");
    throw ConfigError(colon == std::string::npos ? what : what.substr(colon + 2), line, column);
  }
  return from_json(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

GraphHypersurface build_surface(const RunConfig& c) {
  Field f = with_path("f", [&] { return parse_field(c.f, c.n); });
  Field phi = with_path("phi", [&] { return parse_field(c.phi, c.n); });
  MetricField metric = with_path("metric", [&] {
    return c.metric.empty() ? MetricField::minkowski(c.n) : MetricField::parse_upper_triangle(c.n, c.metric);
  });
  with_path("base_point", [&] {
    metric.validate_signature(c.base_point);
    return 0;
  });
  return GraphHypersurface::make(std::move(f), std::move(metric), std::move(phi), c.domain);
}

GraphHypersurface analysis_surface(const RunConfig& c) {
  GraphHypersurface S = build_surface(c);
  if (!c.normalize) return S;
  const NormalizeParams& p = *c.normalize;
  const std::vector<double> v = p.direction.empty() ? lightlike_direction(S, p.point) : p.direction;
  return normalize_graph(S, p.point, v, p.radius);
}

}  // namespace lightcone::cli
