#include "run.hpp"

#include <cstdio>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "lightcone/parallel.hpp"

namespace lightcone::cli {

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  std::optional<double> tol_b;
  std::optional<double> tol_grad;
  std::optional<int> steps;
  std::optional<std::uint64_t> seed;
};

std::vector<std::string> names(const char* prefix, int from, int count) {
  std::vector<std::string> v;
  for (int i = 0; i < count; ++i) v.push_back(prefix + std::to_string(from + i));
  return v;
}

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> v;
  for (const auto& p : parts) v.insert(v.end(), p.begin(), p.end());
  return v;
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

Json surface_json(const RunConfig& c) {
  Json s;
  s["n"] = c.n;
  s["f"] = c.f;
  s["phi"] = c.phi;
  if (c.metric.empty()) {
    s["metric"] = "minkowski";
  } else {
    Json m = Json::array();
    for (const std::string& e : c.metric) m.push_back(e);
    s["metric"] = m;
  }
  s["domain"] = {{"lower", numbers(c.domain.lower)}, {"upper", numbers(c.domain.upper)}};
  if (c.normalize) {
    s["normalize"] = {{"point", numbers(c.normalize->point)},
                      {"direction", c.normalize->direction.empty() ? Json(nullptr) : numbers(c.normalize->direction)},
                      {"radius", c.normalize->radius}};
  } else {
    s["normalize"] = nullptr;
  }
  return s;
}

Json optional_number(const std::optional<double>& v) { return v ? number_or_null(*v) : Json(nullptr); }

Grid config_grid(const RunConfig& c) { return Grid{c.domain, c.grid}; }

std::string label(const PointClass& cls) { return class_label(cls); }

int cmd_classify(const RunConfig& c, const Flags& flags) {
  const GraphHypersurface S = build_surface(c);
  const Grid grid = config_grid(c);
  std::vector<PointClass> classes(grid.size());
  parallel_for(classes.size(), [&](std::size_t flat) {
    classes[flat] = classify_point(S, grid.point(grid.unflatten(flat)), c.tol_b, c.tol_grad);
  });

  Csv csv(concat({names("x", 1, c.n), {"B", "grad_B_norm", "class"}}));
  std::map<std::string, std::size_t> counts{
      {"SpaceLike", 0}, {"TimeLike", 0}, {"LightLike", 0}, {"LightLikeDegenerate", 0}};
  for (std::size_t flat = 0; flat < classes.size(); ++flat) {
    std::vector<double> row = grid.point(grid.unflatten(flat));
    row.push_back(classes[flat].B);
    row.push_back(classes[flat].grad_norm);
    const std::string l = label(classes[flat]);
    ++counts[l];
    csv.row(row, {l});
  }
  write_file(flags.out, "classify.csv", csv.str());

  Json j;
  j["schema"] = "lightcone.classify/1";
  j["command"] = "classify";
  j["surface"] = surface_json(c);
  Json nodes = Json::array();
  for (int k : c.grid) nodes.push_back(k);
  j["grid"] = {{"lower", numbers(c.domain.lower)}, {"upper", numbers(c.domain.upper)}, {"nodes", nodes}};
  j["tolerances"] = {{"b", optional_number(c.tol_b)}, {"grad", c.tol_grad}};
  j["points"] = classes.size();
  j["counts"] = {{"SpaceLike", counts["SpaceLike"]},
                 {"TimeLike", counts["TimeLike"]},
                 {"LightLike", counts["LightLike"]},
                 {"LightLikeDegenerate", counts["LightLikeDegenerate"]}};
  write_file(flags.out, "classify.json", dump_json(j));
  std::cout << "classify: " << classes.size() << " points, SpaceLike " << counts["SpaceLike"] << ", TimeLike "
            << counts["TimeLike"] << ", LightLike " << counts["LightLike"] << ", LightLikeDegenerate "
            << counts["LightLikeDegenerate"] << "\n";
  return kSuccess;
}

int cmd_locus(const RunConfig& c, const Flags& flags) {
  const GraphHypersurface S = build_surface(c);
  const LocusScan scan = scan_lightlike_locus(S, config_grid(c), c.tol_b, c.tol_grad);
  Csv csv(concat({{"axis", "parameter"}, names("x", 1, c.n), {"B", "grad_B_norm", "class"}}));
  for (const LocusPoint& p : scan.points) {
    std::vector<double> row{static_cast<double>(p.axis + 1), p.parameter};
    row.insert(row.end(), p.x.begin(), p.x.end());
    row.push_back(p.cls.B);
    row.push_back(p.cls.grad_norm);
    csv.row(row, {label(p.cls)});
  }
  write_file(flags.out, "locus.csv", csv.str());
  if (scan.identically_lightlike)
    std::cout << "locus: B vanishes at every grid node (identically light-like)\n";
  else
    std::cout << "locus: " << scan.points.size() << " light-like points\n";
  return kSuccess;
}

int cmd_residual(const RunConfig& c, const Flags& flags) {
  const GraphHypersurface S = build_surface(c);
  const Grid grid = config_grid(c);
  const ResidualScan scan = zmc_residual_scan(S, grid);
  write_file(flags.out, "residual.json", dump_json(residual_report(c, grid, scan)));
  std::cout << "residual: max |A - phi B| = " << format_number(scan.max) << "\n";
  return kSuccess;
}

int cmd_reduce(const RunConfig& c, const Flags& flags) {
  const GraphHypersurface S = analysis_surface(c);
  const int k = c.n - 1;
  const int count = c.reduce.samples;
  std::vector<AxisProfile> rows(static_cast<std::size_t>(count));
  std::vector<double> residuals(static_cast<std::size_t>(count));
  parallel_for(rows.size(), [&](std::size_t i) {
    const double y = c.reduce.y0 + (c.reduce.y1 - c.reduce.y0) * static_cast<double>(i) / (count - 1);
    rows[i] = decompose(S, y);
    residuals[i] = decomposition_residual(S, y);
  });

  std::vector<std::string> c2, c3, dc2;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      c2.push_back("c" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
      dc2.push_back("dc" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
      for (int l = j; l < k; ++l)
        c3.push_back("c" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" + std::to_string(l + 1));
    }
  Csv csv(concat({{"y", "a", "da", "dda"}, names("b", 1, k), names("db", 1, k), names("ddb", 1, k), c2, c3, dc2,
                  {"phi"}, names("dphi", 1, k), {"alpha"}, names("alpha_", 1, k), {"identity_residual"}}));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const AxisProfile& p = rows[r];
    std::vector<double> row{p.y, p.a, p.da, p.dda};
    row.insert(row.end(), p.b.begin(), p.b.end());
    row.insert(row.end(), p.db.begin(), p.db.end());
    row.insert(row.end(), p.ddb.begin(), p.ddb.end());
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) row.push_back(p.c(i, j));
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j)
        for (int l = j; l < k; ++l) row.push_back(p.c(i, j, l));
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) row.push_back(p.dc(i, j));
    row.push_back(p.phi);
    row.insert(row.end(), p.dphi.begin(), p.dphi.end());
    if (S.metric.is_minkowski()) {
      row.push_back(alpha(p));
      for (int l = 0; l < k; ++l) row.push_back(alpha_l(p, l));
    } else {
      row.push_back(alpha_generic(S, p.y));
      for (int l = 0; l < k; ++l) row.push_back(alpha_l_generic(S, p.y, l));
    }
    row.push_back(residuals[r]);
    csv.row(row);
  }
  write_file(flags.out, "reduce.csv", csv.str());
  std::cout << "reduce: " << rows.size() << " axis samples\n";
  return kSuccess;
}

void ode_csv(const RunConfig& c, const OdeTrajectory& tr, const Flags& flags) {
  const int k = c.n - 1;
  Csv csv(concat({{"y", "a", "da"}, names("b", 1, k), names("db", 1, k)}));
  for (const OdeState& s : tr.states) {
    std::vector<double> row{s.y, s.a, s.da};
    row.insert(row.end(), s.b.begin(), s.b.end());
    row.insert(row.end(), s.db.begin(), s.db.end());
    csv.row(row);
  }
  write_file(flags.out, "ode.csv", csv.str());
}

int cmd_ode(const RunConfig& c, const Flags& flags) {
  const GraphHypersurface S = analysis_surface(c);
  const int steps = flags.steps.value_or(c.ode.steps);
  try {
    const OdeTrajectory tr = integrate_reduced_ode(S, c.ode.y0, c.ode.y1, steps, c.ode.init);
    ode_csv(c, tr, flags);
    std::cout << "ode: " << tr.states.size() << " states\n";
    return kSuccess;
  } catch (const OdeBreakdown& e) {
    ode_csv(c, e.partial(), flags);
    std::cerr << "ode: " << e.what() << " (partial trajectory written)\n";
    return kFail;
  }
}

void geodesic_csv(const RunConfig& c, const MetricField& metric, const GeodesicPath& path, const Flags& flags) {
  Csv csv(concat({{"t"}, names("x", 0, c.n + 1), names("v", 0, c.n + 1), {"g_vv"}}));
  for (const GeodesicSample& s : path.samples) {
    std::vector<double> row{s.t};
    row.insert(row.end(), s.position.begin(), s.position.end());
    row.insert(row.end(), s.velocity.begin(), s.velocity.end());
    double gvv;
    try {
      gvv = metric_product(metric_at(metric, s.position), s.velocity, s.velocity);
    } catch (const DegenerateMetric&) {
      gvv = std::numeric_limits<double>::quiet_NaN();
    }
    row.push_back(gvv);
    csv.row(row);
  }
  write_file(flags.out, "geodesic.csv", csv.str());
}

int cmd_geodesic(const RunConfig& c, const Flags& flags) {
  const GraphHypersurface S = build_surface(c);
  const GeodesicParams& g = c.geodesic;
  const int steps = flags.steps.value_or(g.steps);
  try {
    const GeodesicPath path = integrate_geodesic(S.metric, g.point, g.velocity, g.t0, g.t1, steps);
    geodesic_csv(c, S.metric, path, flags);
    std::cout << "geodesic: " << path.samples.size() << " samples\n";
    return kSuccess;
  } catch (const GeodesicBreakdown& e) {
    geodesic_csv(c, S.metric, e.partial(), flags);
    std::cerr << "geodesic: " << e.what() << " (partial path written)\n";
    return kFail;
  }
}

int cmd_verify(RunConfig c, const Flags& flags) {
  if (flags.steps) c.verify.steps = *flags.steps;
  if (flags.seed) c.verify.seed = *flags.seed;
  const GraphHypersurface S = analysis_surface(c);
  const TheoremReport report = verify_theorem(S, c.verify);
  write_file(flags.out, "verify.json", dump_json(verify_report(c, report)));
  std::cout << "verify: " << report.verdict_text() << "\n";
  switch (report.verdict) {
    case Verdict::Pass:
      return kSuccess;
    case Verdict::Fail:
      return kFail;
    case Verdict::Inapplicable:
      return kInapplicable;
  }
  return kFail;
}

}  // namespace

Json residual_report(const RunConfig& c, const Grid& grid, const ResidualScan& scan) {
  Json j;
  j["schema"] = "lightcone.residual/1";
  j["command"] = "residual";
  j["surface"] = surface_json(c);
  Json nodes = Json::array();
  for (int k : grid.nodes) nodes.push_back(k);
  j["grid"] = {{"lower", numbers(grid.box.lower)}, {"upper", numbers(grid.box.upper)}, {"nodes", nodes}};
  j["max"] = number_or_null(scan.max);
  j["location"] = numbers(scan.location);
  j["points"] = scan.nodes;
  return j;
}

Json verify_report(const RunConfig& c, const TheoremReport& r) {
  const VerifyOptions& o = r.options;
  Json j;
  j["schema"] = "lightcone.verify/1";
  j["command"] = "verify";
  j["surface"] = surface_json(c);
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  j["verdict_text"] = r.verdict_text();
  j["zmc_residual_max"] = optional_number(r.zmc_residual_max);
  j["zmc_location"] = r.zmc_location.empty() ? Json(nullptr) : numbers(r.zmc_location);
  j["containment_max"] = optional_number(r.containment_max);
  j["degeneracy_max"] = {{"B", optional_number(r.degeneracy_B_max)},
                         {"gradB", optional_number(r.degeneracy_gradB_max)}};
  j["ode_deviation"] = optional_number(r.ode_deviation);
  j["lipschitz_estimate"] = optional_number(r.lipschitz_estimate);
  if (r.initial) {
    const AxisProfile& p = *r.initial;
    j["initial"] = {{"a", number_or_null(p.a)}, {"da", number_or_null(p.da)}, {"b", numbers(p.b)}, {"db", numbers(p.db)}};
  } else {
    j["initial"] = nullptr;
  }
  j["t_span"] = numbers({o.t0, o.t1});
  j["steps"] = o.steps;
  j["zmc_nodes"] = o.zmc_nodes;
  j["lipschitz"] = {{"samples", o.lipschitz_samples}, {"half_width", o.lipschitz_half_width}, {"seed", o.seed}};
  j["tolerances"] = {{"containment", o.tol.containment},
                     {"B", o.tol.B},
                     {"gradB", o.tol.gradB},
                     {"ode", o.tol.ode},
                     {"zmc", o.tol.zmc}};
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"Light-like points and zero mean curvature graphs in Lorentzian space", "lightcone"};
  app.require_subcommand(1);
  Flags flags;

  struct Command {
    const char* name;
    const char* help;
    bool tolerances, steps, seed;
  };
  const Command commands[] = {
      {"classify", "classify grid points by causal type (classify.csv, classify.json)", true, false, false},
      {"locus", "locate light-like points along grid lines (locus.csv)", true, false, false},
      {"residual", "scan |A - phi B| over the grid (residual.json)", false, false, false},
      {"reduce", "axis decomposition table over y (reduce.csv)", false, false, false},
      {"ode", "integrate the reduced ODE (ode.csv)", false, true, false},
      {"geodesic", "integrate an ambient geodesic (geodesic.csv)", false, true, false},
      {"verify", "check the light-like geodesic statement on the surface (verify.json)", false, true, true},
  };
  for (const Command& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", flags.config, "JSON run configuration")->required();
    sub->add_option("--out", flags.out, "output directory")->capture_default_str();
    if (cmd.tolerances) {
      sub->add_option("--tol-b", flags.tol_b, "|B| tolerance for light-like points");
      sub->add_option("--tol-grad", flags.tol_grad, "|grad B| tolerance for degenerate points");
    }
    if (cmd.steps) sub->add_option("--steps", flags.steps, "integration steps")->check(CLI::PositiveNumber);
    if (cmd.seed) sub->add_option("--seed", flags.seed, "seed for Lipschitz sampling");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  RunConfig config;
  try {
    config = load_config(flags.config);
    if (flags.tol_b) config.tol_b = *flags.tol_b;
    if (flags.tol_grad) config.tol_grad = *flags.tol_grad;
    build_surface(config);
  } catch (const std::exception& e) {
    std::cerr << "lightcone " << name << ": " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (name == "classify") return cmd_classify(config, flags);
    if (name == "locus") return cmd_locus(config, flags);
    if (name == "residual") return cmd_residual(config, flags);
    if (name == "reduce") return cmd_reduce(config, flags);
    if (name == "ode") return cmd_ode(config, flags);
    if (name == "geodesic") return cmd_geodesic(config, flags);
    return cmd_verify(config, flags);
  } catch (const std::invalid_argument& e) {
    std::cerr << "lightcone " << name << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "lightcone " << name << ": " << e.what() << "\n";
    return kFail;
  }
}

}  // namespace lightcone::cli
