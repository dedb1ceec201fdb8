#include "tractor/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "json.hpp"

namespace tractor {

JsonValue JsonValue::boolean(bool b) {
  JsonValue v;
  v.kind_ = Kind::boolean;
  v.b_ = b;
  return v;
}

JsonValue JsonValue::integer(long long i) {
  JsonValue v;
  v.kind_ = Kind::integer;
  v.i_ = i;
  return v;
}

JsonValue JsonValue::real(double d) {
  if (!std::isfinite(d)) throw std::invalid_argument("non-finite value in a report");
  JsonValue v;
  v.kind_ = Kind::real;
  v.d_ = d;
  return v;
}

JsonValue JsonValue::str(std::string s) {
  JsonValue v;
  v.kind_ = Kind::str;
  v.s_ = std::move(s);
  return v;
}

JsonValue JsonValue::rational(const Rational& q) { return str(q.get_str()); }

JsonValue JsonValue::array() {
  JsonValue v;
  v.kind_ = Kind::array;
  return v;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.kind_ = Kind::object;
  return v;
}

void JsonValue::push(JsonValue v) {
  if (kind_ != Kind::array) throw std::logic_error("push on a non-array value");
  items_.push_back(std::move(v));
}

void JsonValue::set(const std::string& key, JsonValue v) {
  if (kind_ != Kind::object) throw std::logic_error("set on a non-object value");
  for (auto& [k, old] : fields_) {
    if (k == key) {
      old = std::move(v);
      return;
    }
  }
  fields_.emplace_back(key, std::move(v));
}

std::string format_double(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void indent(std::string& out, int depth) { out.append(std::size_t(depth) * 2, ' '); }

}  // namespace

void JsonValue::write(std::string& out, int depth) const {
  switch (kind_) {
    case Kind::null: out += "null"; break;
    case Kind::boolean: out += b_ ? "true" : "false"; break;
    case Kind::integer: out += std::to_string(i_); break;
    case Kind::real: out += format_double(d_); break;
    case Kind::str: write_escaped(out, s_); break;
    case Kind::array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        indent(out, depth + 1);
        items_[i].write(out, depth + 1);
        if (i + 1 < items_.size()) out += ',';
        out += '\n';
      }
      indent(out, depth);
      out += ']';
      break;
    }
    case Kind::object: {
      if (fields_.empty()) {
        out += "{}";
        break;
      }
      auto sorted = fields_;
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      out += "{\n";
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        indent(out, depth + 1);
        write_escaped(out, sorted[i].first);
        out += ": ";
        sorted[i].second.write(out, depth + 1);
        if (i + 1 < sorted.size()) out += ',';
        out += '\n';
      }
      indent(out, depth);
      out += '}';
      break;
    }
  }
}

std::string JsonValue::dump() const {
  std::string out;
  write(out, 0);
  out += '\n';
  return out;
}

JsonValue hodge_report_json(const HodgeReport& report) {
  JsonValue v = JsonValue::object();
  v.set("degree", JsonValue::integer(report.degree));
  v.set("dim_C", JsonValue::integer(report.dim_C));
  v.set("dim_im_dstar", JsonValue::integer(report.dim_im_dstar));
  v.set("dim_ker_box", JsonValue::integer(report.dim_ker_box));
  v.set("dim_im_d", JsonValue::integer(report.dim_im_d));
  v.set("dim_H", JsonValue::integer(report.dim_H));
  JsonValue hist = JsonValue::object();
  for (const auto& [grade, dim] : report.homogeneity_histogram()) {
    hist.set(grade.get_str(), JsonValue::integer(dim));
  }
  v.set("homogeneity_histogram", std::move(hist));
  JsonValue basis = JsonValue::array();
  for (const HarmonicVector& h : report.harmonic) {
    JsonValue coords = JsonValue::array();
    for (const Rational& c : h.coords) coords.push(JsonValue::rational(c));
    basis.push(std::move(coords));
  }
  v.set("harmonic_basis", std::move(basis));
  return v;
}

JsonValue residual_report_json(const ResidualReport& report) {
  JsonValue v = JsonValue::object();
  JsonValue residuals = JsonValue::object();
  for (const ResidualEntry& e : report.entries) {
    JsonValue entry = JsonValue::object();
    entry.set("max_abs", JsonValue::real(e.max_abs));
    entry.set("mean_abs", JsonValue::real(e.mean_abs));
    entry.set("samples", JsonValue::integer(e.samples));
    entry.set("tol", JsonValue::real(e.tol));
    entry.set("pass", JsonValue::boolean(e.pass));
    residuals.set(e.name, std::move(entry));
  }
  v.set("residuals", std::move(residuals));
  v.set("pass", JsonValue::boolean(report.all_pass()));
  return v;
}

JsonValue recover_report_json(const RecoverReport& report) {
  JsonValue v = JsonValue::object();
  JsonValue coeffs = JsonValue::array();
  for (double c : report.coeffs) coeffs.push(JsonValue::real(c));
  v.set("coeffs", std::move(coeffs));
  JsonValue sigma = JsonValue::array();
  for (double s : report.transported_sigma) sigma.push(JsonValue::real(s));
  v.set("transported_sigma", std::move(sigma));
  v.set("max_fit_gap", JsonValue::real(report.max_fit_gap));
  v.set("max_einstein_residual", JsonValue::real(report.max_einstein_residual));
  v.set("max_probe_defect", JsonValue::real(report.max_probe_defect));
  return v;
}

ChartConfig parse_chart_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("chart config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("chart config must be a JSON object");
  ChartConfig config;
  config.kind = j.value("chart", std::string("flat"));
  if (config.kind != "flat" && config.kind != "sphere" && config.kind != "poly") {
    throw std::invalid_argument("unknown chart kind '" + config.kind + "'");
  }
  config.n = j.value("n", 3);
  if (config.n < 3) throw std::invalid_argument("chart config needs n >= 3");
  if (j.contains("domain")) {
    const auto& dom = j.at("domain");
    if (!dom.is_array() || dom.size() != 2) {
      throw std::invalid_argument("domain must be [lo..., hi...] corner lists");
    }
    config.domain.lo = dom.at(0).get<std::vector<double>>();
    config.domain.hi = dom.at(1).get<std::vector<double>>();
    if (config.domain.lo.size() != std::size_t(config.n) ||
        config.domain.hi.size() != std::size_t(config.n)) {
      throw std::invalid_argument("domain corner dimension does not match n");
    }
    config.has_domain = true;
  }
  if (j.contains("poly_coeffs")) {
    for (const auto& entry : j.at("poly_coeffs")) {
      std::vector<Monomial> terms;
      for (const auto& term : entry) {
        Monomial m;
        m.coef = term.at("coef").get<double>();
        m.exps = term.at("exps").get<std::vector<int>>();
        if (m.exps.size() != std::size_t(config.n)) {
          throw std::invalid_argument("monomial exponent list does not match n");
        }
        terms.push_back(std::move(m));
      }
      config.poly_coeffs.push_back(std::move(terms));
    }
    config.has_poly = true;
  }
  return config;
}

std::unique_ptr<MetricChart> build_chart(const ChartConfig& config) {
  Box box = config.has_domain ? config.domain : Box{};
  if (config.kind == "flat") return std::make_unique<FlatChart>(config.n, box);
  if (config.kind == "sphere") return std::make_unique<SphereChart>(config.n, box);
  if (config.has_poly) {
    return std::make_unique<PolyChart>(config.n, config.poly_coeffs, box);
  }
  PolyChart builtin = builtin_poly_chart(config.n);
  if (config.has_domain) {
    return std::make_unique<PolyChart>(config.n, builtin.upper_entries(), box);
  }
  return std::make_unique<PolyChart>(builtin);
}

JsonValue chart_fixture_json(const PolyChart& chart) {
  JsonValue v = JsonValue::object();
  v.set("chart", JsonValue::str("poly"));
  v.set("n", JsonValue::integer(chart.dim()));
  JsonValue domain = JsonValue::array();
  JsonValue lo = JsonValue::array(), hi = JsonValue::array();
  for (double d : chart.domain().lo) lo.push(JsonValue::real(d));
  for (double d : chart.domain().hi) hi.push(JsonValue::real(d));
  domain.push(std::move(lo));
  domain.push(std::move(hi));
  v.set("domain", std::move(domain));
  JsonValue entries = JsonValue::array();
  for (const auto& terms : chart.upper_entries()) {
    JsonValue list = JsonValue::array();
    for (const Monomial& m : terms) {
      JsonValue term = JsonValue::object();
      term.set("coef", JsonValue::real(m.coef));
      JsonValue exps = JsonValue::array();
      for (int e : m.exps) exps.push(JsonValue::integer(e));
      term.set("exps", std::move(exps));
      list.push(std::move(term));
    }
    entries.push(std::move(list));
  }
  v.set("poly_coeffs", std::move(entries));
  return v;
}

JsonValue conventions_json() {
  JsonValue v = JsonValue::object();
  v.set("bracket_orientation",
        JsonValue::str("[Z_j, X_i] = delta_ij E - m_ij with m_ij = E_ij - E_ji"));
  v.set("round_sphere_curvature",
        JsonValue::str("kappa(X_a, X_b) = +m_ab; normalize_rho then returns the pairing "
                       "-1/2 identity"));
  v.set("codifferential_trace_multiple",
        JsonValue::str("divergence of the round-sphere curvature pairs each direction with "
                       "1/2 (n-1), i.e. 1/2 of the Ricci eigenvalue"));
  v.set("quadratic_shift_pairing_scale",
        JsonValue::str("coordinate pairing of 1/2 (ad Upsilon)^2 xi against eta equals "
                       "-(Upsilon(xi) Upsilon(eta) - 1/2 |Upsilon|^2 g(xi, eta))"));
  v.set("riemann_sign",
        JsonValue::str("R_ab^c_d = d_a Gamma^c_bd - d_b Gamma^c_ad + Gamma Gamma terms; "
                       "Ricci_bd = R_ab^a_d; round sphere then has Ricci = +(n-1) g"));
  v.set("schouten",
        JsonValue::str("P = (Ricci - scalar/(2(n-1)) g)/(n-2); round sphere P = g/2"));
  v.set("flat_transport_closed_form",
        JsonValue::str("sigma(x0+dx) = sigma0 + mu0.dx - 1/2 rho0 |dx|^2, mu = mu0 - rho0 dx, "
                       "rho = rho0; this fixes the sign of every connection slot"));
  v.set("tractor_metric", JsonValue::str("2 sigma rho + g^{ab} mu_a mu_b"));
  v.set("density_component_change",
        JsonValue::str("weight-w density numerics change by Omega^w; tractor slots change by "
                       "(Omega, Omega, 1/Omega) around the component shift"));
  return v;
}

std::string fixtures_directory() {
  const char* env = std::getenv("TRACTORLAB_FIXTURES");
  if (env != nullptr && env[0] != '\0') return env;
#ifdef TRACTORLAB_DEFAULT_FIXTURES
  return TRACTORLAB_DEFAULT_FIXTURES;
#else
  return "fixtures";
#endif
}

}  // namespace tractor
