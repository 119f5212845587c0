#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "run.hpp"

using namespace lightcone;
using namespace lightcone::cli;
namespace fs = std::filesystem;

namespace {

std::string config_path(const std::string& name) { return std::string(LIGHTCONE_SOURCE_DIR) + "/configs/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lightcone_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "lightcone");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  testing::internal::CaptureStdout();
  testing::internal::CaptureStderr();
  const int code = run(static_cast<int>(argv.size()), argv.data());
  testing::internal::GetCapturedStdout();
  testing::internal::GetCapturedStderr();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch("cfg_" + name) / "config.json";
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

}  // namespace

TEST(FormatNumber, FixedRepresentation) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1e-300), "1e-300");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.33333333333333331");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(DumpJson, LayoutAndNonFinite) {
  Json j;
  j["b"] = 0.5;
  j["a"] = Json::array({1.0, std::numeric_limits<double>::infinity()});
  j["s"] = "x";
  EXPECT_EQ(dump_json(j), "{\n  \"b\": 0.5,\n  \"a\": [1, null],\n  \"s\": \"x\"\n}\n");
}

TEST(Csv, RowsUseFixedFormatting) {
  Csv c({"x", "y", "label"});
  c.row({0.1, -0.0}, {"SpaceLike"});
  EXPECT_EQ(c.str(), "x,y,label\n0.10000000000000001,0,SpaceLike\n");
}

TEST(Config, ParsesShippedConfigs) {
  for (const char* name : {"plane.json", "tanh.json", "paraboloid.json", "perturbed.json"}) {
    const RunConfig c = load_config(config_path(name));
    EXPECT_GE(c.n, 2) << name;
    EXPECT_NO_THROW(build_surface(c)) << name;
  }
  const RunConfig t = load_config(config_path("tanh.json"));
  EXPECT_EQ(t.grid, (std::vector<int>{101, 101}));
  ASSERT_TRUE(t.normalize.has_value());
  EXPECT_EQ(t.verify.steps, 200);
}

TEST(Config, Defaults) {
  const RunConfig c = parse_config(R"({"n": 3, "f": "xn"})");
  EXPECT_TRUE(c.metric.empty());
  EXPECT_EQ(c.phi, "0");
  EXPECT_EQ(c.domain.lower, (std::vector<double>{-1, -1, -1}));
  EXPECT_EQ(c.grid, (std::vector<int>{21, 21, 21}));
  EXPECT_EQ(c.base_point, (std::vector<double>(4, 0.0)));
  EXPECT_EQ(c.ode.init.da, 1.0);
  EXPECT_EQ(c.ode.init.b.size(), 2u);
  EXPECT_EQ(c.geodesic.velocity, (std::vector<double>{1, 0, 0, 1}));
  EXPECT_FALSE(c.normalize.has_value());
}

TEST(Config, SyntaxErrorsCarryLineAndColumn) {
  try {
    parse_config("{\n  \"n\": 2,\n  \"f\": \"xn\"\n  \"grid\": 5\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.column(), 8u);  // last character of the offending token
    EXPECT_NE(std::string(e.what()).find("config:4:8:"), std::string::npos);
  }
  try {
    parse_config("{\"n\": 2, \"f\": }");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 15u);
  }
}

TEST(Config, SemanticErrorsNameThePath) {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(R"({"n": 2, "f": "xn", "colour": 1})").find("'/colour'"), std::string::npos);
  EXPECT_NE(message(R"({"n": 2})").find("missing key '/f'"), std::string::npos);
  EXPECT_NE(message(R"({"n": 1, "f": "x1"})").find("at least 2"), std::string::npos);
  EXPECT_NE(message(R"({"n": 2, "f": "xn", "grid": 1})").find("'/grid'"), std::string::npos);
  EXPECT_NE(message(R"({"n": 2, "f": "xn", "domain": {"lower": [0, 0], "upper": [1, 0]}})").find("nonempty"),
            std::string::npos);
  EXPECT_NE(message(R"({"n": 2, "f": "xn", "domain": {"lower": [0], "upper": [1, 1]}})").find("'/domain/lower'"),
            std::string::npos);
  EXPECT_NE(message(R"({"n": 2, "f": "xn", "metric": ["1"]})").find("6 upper-triangle"), std::string::npos);
  EXPECT_NE(message(R"({"n": 2, "f": "xn", "ode": {"init": {"b": [0, 0]}}})").find("'/ode/init/b'"),
            std::string::npos);
  EXPECT_NE(message(R"({"n": 2, "f": "xn", "verify": {"seed": -3}})").find("'/verify/seed'"), std::string::npos);
}

TEST(Config, ExpressionErrorsSurfaceWhenBuilding) {
  EXPECT_THROW(build_surface(parse_config(R"({"n": 2, "f": "x3"})")), ConfigError);
  EXPECT_THROW(build_surface(parse_config(R"({"n": 2, "f": "x1 +"})")), ConfigError);
  try {
    build_surface(parse_config(R"({"n": 2, "f": "xn", "metric": ["1","0","0","1","0","1"]})"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'/base_point'"), std::string::npos);
  }
}

TEST(Run, ExitCodes) {
  const fs::path out = scratch("exit");
  EXPECT_EQ(invoke({"verify", "--config", config_path("plane.json"), "--out", out.string()}), kSuccess);
  EXPECT_EQ(invoke({"verify", "--config", config_path("paraboloid.json"), "--out", out.string()}), kInapplicable);
  EXPECT_EQ(invoke({"verify", "--config", config_path("tanh.json"), "--out", out.string()}), kInapplicable);
  EXPECT_EQ(invoke({}), kUsage);
  EXPECT_EQ(invoke({"bogus"}), kUsage);
  EXPECT_EQ(invoke({"classify"}), kUsage);
  EXPECT_EQ(invoke({"classify", "--config", (out / "missing.json").string()}), kUsage);
  EXPECT_EQ(invoke({"residual", "--config", config_path("plane.json"), "--steps", "3"}), kUsage);
  EXPECT_EQ(invoke({"ode", "--config", config_path("plane.json"), "--steps", "0"}), kUsage);
  EXPECT_EQ(invoke({"--help"}), kSuccess);
}

TEST(Run, FailVerdictExitsTwo) {
  const fs::path cfg = write_config(
      "fail", R"({"n": 2, "f": "xn", "tolerances": {"ode": -1}, "verify": {"steps": 20}})");
  const fs::path out = scratch("fail");
  EXPECT_EQ(invoke({"verify", "--config", cfg.string(), "--out", out.string()}), kFail);
  EXPECT_NE(slurp(out / "verify.json").find("\"verdict\": \"FAIL\""), std::string::npos);
}

TEST(Run, OdeBreakdownWritesPartialTrajectory) {
  const fs::path cfg =
      write_config("ode", R"({"n": 2, "f": "xn", "ode": {"y0": 0, "y1": 1, "steps": 10, "init": {"b": [1]}}})");
  const fs::path out = scratch("ode_break");
  EXPECT_EQ(invoke({"ode", "--config", cfg.string(), "--out", out.string()}), kFail);
  EXPECT_EQ(slurp(out / "ode.csv"), "y,a,da,b1,db1\n0,0,1,1,0\n");
}

TEST(Run, HeadersAreFrozen) {
  const fs::path out = scratch("headers");
  const std::string cfg = config_path("tanh.json");
  for (const char* cmd : {"classify", "locus", "reduce", "ode", "geodesic"})
    ASSERT_EQ(invoke({cmd, "--config", cfg, "--out", out.string()}), kSuccess) << cmd;
  EXPECT_EQ(first_line(out / "classify.csv"), "x1,x2,B,grad_B_norm,class");
  EXPECT_EQ(first_line(out / "locus.csv"), "axis,parameter,x1,x2,B,grad_B_norm,class");
  EXPECT_EQ(first_line(out / "reduce.csv"),
            "y,a,da,dda,b1,db1,ddb1,c1_1,c1_1_1,dc1_1,phi,dphi1,alpha,alpha_1,identity_residual");
  EXPECT_EQ(first_line(out / "ode.csv"), "y,a,da,b1,db1");
  EXPECT_EQ(first_line(out / "geodesic.csv"), "t,x0,x1,x2,v0,v1,v2,g_vv");
}

TEST(Run, ClassifySplitsAlongCoshCurves) {
  const fs::path out = scratch("classify");
  ASSERT_EQ(invoke({"classify", "--config", config_path("tanh.json"), "--out", out.string()}), kSuccess);
  std::ifstream in(out / "classify.csv");
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream ss(line);
    std::string x1s, x2s, bs, gs, cls;
    std::getline(ss, x1s, ',');
    std::getline(ss, x2s, ',');
    std::getline(ss, bs, ',');
    std::getline(ss, gs, ',');
    std::getline(ss, cls, ',');
    const double x1 = std::stod(x1s), x2 = std::stod(x2s);
    const double gap = std::fabs(x1) - std::cosh(x2);
    if (gap < -1e-9) EXPECT_EQ(cls, "SpaceLike") << line;
    if (gap > 1e-9) EXPECT_EQ(cls, "TimeLike") << line;
  }
  EXPECT_EQ(rows, 101 * 101);
  const std::string json = slurp(out / "classify.json");
  EXPECT_NE(json.find("\"schema\": \"lightcone.classify/1\""), std::string::npos);
}

TEST(Run, ToleranceFlagsOverrideConfig) {
  const fs::path out = scratch("tol");
  ASSERT_EQ(invoke({"classify", "--config", config_path("plane.json"), "--out", out.string(), "--tol-b", "1e-3",
                    "--tol-grad", "0.5"}),
            kSuccess);
  EXPECT_NE(slurp(out / "classify.json").find("\"b\": 0.001"), std::string::npos);
}

TEST(Run, StepsFlagOverridesConfig) {
  const fs::path out = scratch("steps");
  ASSERT_EQ(invoke({"ode", "--config", config_path("plane.json"), "--out", out.string(), "--steps", "7"}), kSuccess);
  const std::string csv = slurp(out / "ode.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 8);
  ASSERT_EQ(invoke({"verify", "--config", config_path("plane.json"), "--out", out.string(), "--steps", "40",
                    "--seed", "7"}),
            kSuccess);
  const std::string report = slurp(out / "verify.json");
  EXPECT_NE(report.find("\"steps\": 40"), std::string::npos);
  EXPECT_NE(report.find("\"seed\": 7"), std::string::npos);
}

TEST(Run, OutputsAreByteIdentical) {
  for (const char* cfg : {"plane.json", "perturbed.json"}) {
    const fs::path a = scratch(std::string("det_a_") + cfg), b = scratch(std::string("det_b_") + cfg);
    for (const char* cmd : {"classify", "locus", "residual", "reduce", "ode", "geodesic", "verify"}) {
      const int ca = invoke({cmd, "--config", config_path(cfg), "--out", a.string()});
      const int cb = invoke({cmd, "--config", config_path(cfg), "--out", b.string()});
      EXPECT_EQ(ca, cb) << cmd;
    }
    for (const auto& entry : fs::directory_iterator(a)) {
      const fs::path other = b / entry.path().filename();
      ASSERT_TRUE(fs::exists(other)) << other;
      EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path();
    }
  }
}
