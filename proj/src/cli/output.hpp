#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace lightcone::cli {

using Json = nlohmann::ordered_json;

/// %.17g, with -0 written as 0. Non-finite values give "nan", "inf", "-inf".
std::string format_number(double v);

/// Two-space indented JSON with keys in insertion order, numbers through
/// format_number and non-finite numbers as null; ends with a newline.
std::string dump_json(const Json& j);

/// Number or null.
Json number_or_null(double v);

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  /// Numbers followed by trailing text cells.
  void row(const std::vector<double>& values, const std::vector<std::string>& text);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

/// Writes `content` to dir/name byte for byte, creating dir if needed.
void write_file(const std::string& dir, const std::string& name, const std::string& content);

}  // namespace lightcone::cli
