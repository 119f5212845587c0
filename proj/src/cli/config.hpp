#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lightcone/error.hpp"
#include "lightcone/verify.hpp"

namespace lightcone::cli {

/// Bad config file. `line`/`column` are 1-based and 0 when the error is not
/// tied to a position in the text (the message then names the JSON path).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? "config:" + std::to_string(line) + ":" + std::to_string(column) + ": " + message
                   : "config: " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ReduceParams {
  double y0 = -1.0, y1 = 1.0;
  int samples = 21;
};

struct OdeParams {
  double y0 = 0.0, y1 = 1.0;
  int steps = 100;
  OdeState init;  // defaults to (0, 1, 0, 0)
};

struct GeodesicParams {
  std::vector<double> point;     // defaults to the origin
  std::vector<double> velocity;  // defaults to (1, 0, ..., 0, 1)
  double t0 = 0.0, t1 = 1.0;
  int steps = 1000;
};

struct NormalizeParams {
  std::vector<double> point;
  std::vector<double> direction;  // empty: a null direction of s at `point`
  double radius = 0.25;
};

struct RunConfig {
  int n = 0;
  std::string f;
  std::vector<std::string> metric;  // upper triangle; empty means Minkowski
  std::string phi = "0";
  Box domain;
  std::vector<int> grid;
  std::optional<double> tol_b;
  double tol_grad = kDefaultTolGrad;
  std::vector<double> base_point;  // signature check; defaults to the origin
  ReduceParams reduce;
  OdeParams ode;
  GeodesicParams geodesic;
  std::optional<NormalizeParams> normalize;
  VerifyOptions verify;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// The configured surface. Expressions are parsed and the metric signature is
/// checked at base_point.
GraphHypersurface build_surface(const RunConfig& config);
/// build_surface followed by normalize_graph when a normalize section is set.
GraphHypersurface analysis_surface(const RunConfig& config);

}  // namespace lightcone::cli
