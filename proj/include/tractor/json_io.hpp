#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tractor/chart.hpp"
#include "tractor/cohomology.hpp"
#include "tractor/curvature.hpp"
#include "tractor/rational.hpp"
#include "tractor/transport.hpp"

namespace tractor {

// Deterministic JSON document: object keys emit sorted, rationals emit as
// canonical "p/q" strings, floats emit with 17 significant digits, so equal
// inputs serialize to identical bytes.
class JsonValue {
 public:
  JsonValue() = default;
  static JsonValue boolean(bool b);
  static JsonValue integer(long long i);
  static JsonValue real(double d);
  static JsonValue str(std::string s);
  static JsonValue rational(const Rational& q);
  static JsonValue array();
  static JsonValue object();

  void push(JsonValue v);
  void set(const std::string& key, JsonValue v);
  std::string dump() const;

 private:
  enum class Kind { null, boolean, integer, real, str, array, object };
  Kind kind_ = Kind::null;
  bool b_ = false;
  long long i_ = 0;
  double d_ = 0.0;
  std::string s_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> fields_;
  void write(std::string& out, int depth) const;
};

std::string format_double(double d);

JsonValue hodge_report_json(const HodgeReport& report);
JsonValue residual_report_json(const ResidualReport& report);
JsonValue recover_report_json(const RecoverReport& report);

struct ChartConfig {
  std::string kind = "flat";
  int n = 3;
  bool has_domain = false;
  Box domain;
  bool has_poly = false;
  std::vector<std::vector<Monomial>> poly_coeffs;
};

ChartConfig parse_chart_config(const std::string& text);
std::unique_ptr<MetricChart> build_chart(const ChartConfig& config);

JsonValue chart_fixture_json(const PolyChart& chart);
JsonValue conventions_json();

// TRACTORLAB_FIXTURES when set, otherwise ./fixtures.
std::string fixtures_directory();

}  // namespace tractor
