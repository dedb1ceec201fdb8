#include "tractor/conformal_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace tractor {

namespace {

std::vector<double> value_matrix(const MetricChart& chart, const VecD& x) {
  std::vector<Jet3> g = chart.metric_jets(x);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].v;
  return out;
}

std::vector<double> value_inverse(int n, std::vector<double> m) {
  std::vector<double> inv(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) inv[ix2(n, i, i)] = 1.0;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    for (int r = k + 1; r < n; ++r) {
      if (std::fabs(m[ix2(n, r, k)]) > std::fabs(m[ix2(n, pivot, k)])) pivot = r;
    }
    if (m[ix2(n, pivot, k)] == 0.0) throw std::domain_error("singular metric values");
    if (pivot != k) {
      for (int c = 0; c < n; ++c) {
        std::swap(m[ix2(n, k, c)], m[ix2(n, pivot, c)]);
        std::swap(inv[ix2(n, k, c)], inv[ix2(n, pivot, c)]);
      }
    }
    double s = 1.0 / m[ix2(n, k, k)];
    for (int c = 0; c < n; ++c) {
      m[ix2(n, k, c)] *= s;
      inv[ix2(n, k, c)] *= s;
    }
    for (int r = 0; r < n; ++r) {
      if (r == k) continue;
      double f = m[ix2(n, r, k)];
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        m[ix2(n, r, c)] -= f * m[ix2(n, k, c)];
        inv[ix2(n, r, c)] -= f * inv[ix2(n, k, c)];
      }
    }
  }
  return inv;
}

void require_scale(const std::string& have, const std::string& want, const char* what) {
  if (have != want) {
    throw std::invalid_argument(std::string(what) + " carries scale '" + have +
                                "' but the chart is '" + want + "'");
  }
}

Jet1 bottom_slot_jet(const CurvatureJets& cj, const Jet3& f) {
  Jet1 lap = laplacian(cj, f);
  Jet1 out = (lap + cj.schouten_trace * jet_truncate<1>(f)) * (-1.0 / cj.n);
  return out;
}

}  // namespace

ScalarField constant_field(int n, double c) {
  return [n, c](const VecD&) { return jet_constant<3>(n, c); };
}

ScalarField monomial_field(int n, std::vector<Monomial> terms) {
  return [n, terms = std::move(terms)](const VecD& x) { return eval_monomials(n, terms, x); };
}

Jet3 DensityField::jet(const VecD& x) const { return eval(x); }

DensityField make_density(Rational weight, std::string scale, ScalarField eval) {
  DensityField f;
  f.weight = std::move(weight);
  f.scale = std::move(scale);
  f.eval = std::move(eval);
  return f;
}

DensityField rescale_density(const DensityField& f, const ConformalFactor& omega,
                             const std::string& new_scale) {
  double w = rat_to_double(f.weight);
  DensityField out;
  out.weight = f.weight;
  out.scale = new_scale;
  out.eval = [base = f.eval, omega, w](const VecD& x) {
    return jet_pow(omega.jet(x), w) * base(x);
  };
  return out;
}

TractorField tractor_field_from_monomials(int n,
                                          std::vector<std::vector<Monomial>> slots) {
  if (slots.size() != std::size_t(n) + 2) {
    throw std::invalid_argument("tractor field needs n + 2 component slots");
  }
  return [n, slots = std::move(slots)](const VecD& x) {
    std::vector<Jet1> out;
    out.reserve(slots.size());
    for (const auto& terms : slots) out.push_back(jet_truncate<1>(eval_monomials(n, terms, x)));
    return out;
  };
}

TractorVec ttchange_apply(const MetricChart& chart, const ConformalFactor& omega,
                          const TractorVec& v, const VecD& x,
                          const std::string& new_scale, const Rational& extra_weight) {
  require_scale(v.scale, chart.label(), "tractor vector");
  const int n = chart.dim();
  if (v.mu.size() != std::size_t(n)) throw std::invalid_argument("middle slot dimension mismatch");
  std::vector<double> ginv = value_inverse(n, value_matrix(chart, x));
  VecD ups = upsilon(omega, x);
  VecD ups_up(n, 0.0);
  for (int c = 0; c < n; ++c)
    for (int b = 0; b < n; ++b) ups_up[c] += ginv[ix2(n, c, b)] * ups[b];
  double dot = 0.0, norm2 = 0.0;
  for (int c = 0; c < n; ++c) {
    dot += ups_up[c] * v.mu[c];
    norm2 += ups_up[c] * ups[c];
  }
  double om = omega.jet(x).v;
  double extra = std::pow(om, rat_to_double(extra_weight));
  TractorVec out;
  out.scale = new_scale;
  out.sigma = extra * om * v.sigma;
  out.mu.resize(n);
  for (int a = 0; a < n; ++a) out.mu[a] = extra * om * (v.mu[a] + v.sigma * ups[a]);
  out.rho = extra / om * (v.rho - dot - 0.5 * norm2 * v.sigma);
  return out;
}

double TractorDerivative::max_abs() const {
  double m = 0.0;
  for (double v : d_sigma) m = std::max(m, std::fabs(v));
  for (double v : d_mu) m = std::max(m, std::fabs(v));
  for (double v : d_rho) m = std::max(m, std::fabs(v));
  return m;
}

TractorDerivative tractor_connection_apply(const MetricChart& chart,
                                           const TractorField& field, const VecD& x) {
  const int n = chart.dim();
  CurvatureJets cj = curvature_jets(chart, x);
  std::vector<Jet1> slots = field(x);
  if (slots.size() != std::size_t(n) + 2) {
    throw std::invalid_argument("tractor field returned the wrong number of slots");
  }
  const Jet1& sigma = slots[0];
  const Jet1& rho = slots[n + 1];
  TractorDerivative out;
  out.n = n;
  out.d_sigma.assign(n, 0.0);
  out.d_mu.assign(std::size_t(n) * n, 0.0);
  out.d_rho.assign(n, 0.0);
  for (int a = 0; a < n; ++a) {
    out.d_sigma[a] = sigma.g1(a) - slots[1 + a].v;
    for (int b = 0; b < n; ++b) {
      double val = slots[1 + b].g1(a);
      for (int e = 0; e < n; ++e) val -= cj.gamma[ix3(n, e, a, b)].v * slots[1 + e].v;
      val += cj.g[ix2(n, a, b)].v * rho.v;
      val += cj.schouten[ix2(n, a, b)].v * sigma.v;
      out.d_mu[ix2(n, a, b)] = val;
    }
    double val = rho.g1(a);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        val -= cj.schouten[ix2(n, a, b)].v * cj.ginv[ix2(n, b, c)].v * slots[1 + c].v;
    out.d_rho[a] = val;
  }
  return out;
}

std::vector<double> einstein_operator(const MetricChart& chart, const ScalarField& sigma,
                                      const VecD& x) {
  const int n = chart.dim();
  CurvatureJets cj = curvature_jets(chart, x);
  Jet3 f = sigma(x);
  std::vector<Jet1> hess = covariant_hessian(cj, f);
  std::vector<double> t(std::size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      t[ix2(n, a, b)] = hess[ix2(n, a, b)].v + cj.schouten[ix2(n, a, b)].v * f.v;
  double trace = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) trace += cj.ginv[ix2(n, a, b)].v * t[ix2(n, a, b)];
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[ix2(n, a, b)] -= trace / n * cj.g[ix2(n, a, b)].v;
  return t;
}

TractorVec prolong(const MetricChart& chart, const ScalarField& sigma, const VecD& x) {
  const int n = chart.dim();
  CurvatureJets cj = curvature_jets(chart, x);
  Jet3 f = sigma(x);
  TractorVec out;
  out.scale = chart.label();
  out.sigma = f.v;
  out.mu.resize(n);
  for (int a = 0; a < n; ++a) out.mu[a] = f.g1(a);
  out.rho = bottom_slot_jet(cj, f).v;
  return out;
}

TractorField prolong_field(const MetricChart& chart, const ScalarField& sigma) {
  const MetricChart* base = &chart;
  return [base, sigma](const VecD& x) {
    const int n = base->dim();
    CurvatureJets cj = curvature_jets(*base, x);
    Jet3 f = sigma(x);
    std::vector<Jet1> slots;
    slots.reserve(n + 2);
    slots.push_back(jet_truncate<1>(f));
    for (int a = 0; a < n; ++a) slots.push_back(jet_truncate<1>(jet_derivative(f, a)));
    slots.push_back(bottom_slot_jet(cj, f));
    return slots;
  };
}

double closure_residual(const MetricChart& chart, const ScalarField& sigma, const VecD& x) {
  const int n = chart.dim();
  CurvatureJets cj = curvature_jets(chart, x);
  Jet3 f = sigma(x);
  Jet1 rho = bottom_slot_jet(cj, f);
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    double val = rho.g1(a);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        val -= cj.schouten[ix2(n, a, b)].v * cj.ginv[ix2(n, b, c)].v * f.g1(c);
    worst = std::max(worst, std::fabs(val));
  }
  return worst;
}

TractorVec thomas_D(const MetricChart& chart, const DensityField& f, const VecD& x) {
  require_scale(f.scale, chart.label(), "density");
  const int n = chart.dim();
  CurvatureJets cj = curvature_jets(chart, x);
  Jet3 fv = f.jet(x);
  Rational front = Rational(n) + 2 * f.weight - 2;
  double front_d = rat_to_double(front);
  double w_d = rat_to_double(f.weight);
  TractorVec out;
  out.scale = chart.label();
  out.sigma = rat_to_double(front * f.weight) * fv.v;
  out.mu.resize(n);
  for (int a = 0; a < n; ++a) out.mu[a] = front_d * fv.g1(a);
  out.rho = -(laplacian(cj, fv).v + w_d * cj.schouten_trace.v * fv.v);
  return out;
}

double yamabe(const MetricChart& chart, const ScalarField& f, const VecD& x) {
  const int n = chart.dim();
  CurvatureJets cj = curvature_jets(chart, x);
  Jet3 fv = f(x);
  return laplacian(cj, fv).v + (1.0 - 0.5 * n) * cj.schouten_trace.v * fv.v;
}

namespace {

std::vector<std::vector<Monomial>> frozen_component_polys(int n) {
  return {
      monomials_padded(n, {{1.0, {0, 0, 0}}, {0.5, {1, 1, 0}}, {-0.25, {0, 0, 2}}}),
      monomials_padded(n, {{1.0, {1, 0, 0}}, {-0.5, {0, 2, 0}}, {0.125, {1, 0, 1}}}),
      monomials_padded(n, {{0.5, {0, 1, 0}}, {0.25, {2, 0, 0}}, {-1.0, {0, 1, 1}}}),
      monomials_padded(n, {{-0.5, {0, 0, 1}}, {1.0, {1, 1, 1}}, {0.25, {0, 2, 0}}}),
  };
}

}  // namespace

ResidualReport check_rescale_laws(const MetricChart& chart, const ConformalFactor& omega,
                                  const std::vector<VecD>& samples, double tol) {
  const int n = chart.dim();
  RescaledChart hat = rescale(chart, omega, chart.label() + "-hat");
  ResidualReport report;
  auto polys = frozen_component_polys(n);
  auto component = [&](int slot, const VecD& x) {
    return eval_monomials(n, polys[slot % polys.size()], x);
  };

  for (const VecD& x : samples) {
    CurvatureJets base = curvature_jets(chart, x);
    CurvatureJets hc = curvature_jets(hat, x);
    VecD ups = upsilon(omega, x);
    VecD ups_up(n, 0.0);
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b) ups_up[c] += base.ginv[ix2(n, c, b)].v * ups[b];

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double law = base.gamma[ix3(n, i, j, k)].v + (i == j ? ups[k] : 0.0) +
                       (i == k ? ups[j] : 0.0) - base.g[ix2(n, j, k)].v * ups_up[i];
          report.add("christoffel_shift", hc.gamma[ix3(n, i, j, k)].v - law);
        }

    std::vector<Jet1> vcomp(n), acomp(n);
    for (int b = 0; b < n; ++b) {
      vcomp[b] = jet_truncate<1>(component(b, x));
      acomp[b] = jet_truncate<1>(component(b + 1, x));
    }
    VecD v_low(n, 0.0);
    double ups_dot_v = 0.0, ups_dot_a = 0.0;
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) v_low[b] += base.g[ix2(n, b, c)].v * vcomp[c].v;
      ups_dot_v += ups[b] * vcomp[b].v;
      ups_dot_a += ups_up[b] * acomp[b].v;
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double base_cov_v = vcomp[b].g1(a);
        double hat_cov_v = vcomp[b].g1(a);
        for (int e = 0; e < n; ++e) {
          base_cov_v += base.gamma[ix3(n, b, a, e)].v * vcomp[e].v;
          hat_cov_v += hc.gamma[ix3(n, b, a, e)].v * vcomp[e].v;
        }
        double law_v = base_cov_v + ups[a] * vcomp[b].v - ups_up[b] * v_low[a] +
                       (a == b ? ups_dot_v : 0.0);
        report.add("vector_law", hat_cov_v - law_v);

        double base_cov_a = acomp[b].g1(a);
        double hat_cov_a = acomp[b].g1(a);
        for (int e = 0; e < n; ++e) {
          base_cov_a -= base.gamma[ix3(n, e, a, b)].v * acomp[e].v;
          hat_cov_a -= hc.gamma[ix3(n, e, a, b)].v * acomp[e].v;
        }
        double law_a = base_cov_a - ups[a] * acomp[b].v - ups[b] * acomp[a].v +
                       base.g[ix2(n, a, b)].v * ups_dot_a;
        report.add("covector_law", hat_cov_a - law_a);
      }

    const double w = 2.0;
    Jet3 f = component(0, x);
    Jet3 fhat = jet_pow(omega.jet(x), w) * f;
    double om_w = jet_pow(omega.jet(x), w).v;
    for (int a = 0; a < n; ++a) {
      double law = om_w * (f.g1(a) + w * ups[a] * f.v);
      report.add("density_law", fhat.g1(a) - law);
    }
  }

  for (int field = 0; field < 2; ++field) {
    ScalarField sigma = monomial_field(n, polys[field]);
    ScalarField sigma_hat = [omega, sigma](const VecD& x) { return omega.jet(x) * sigma(x); };
    for (const VecD& x : samples) {
      TractorVec native = prolong(hat, sigma_hat, x);
      TractorVec moved = ttchange_apply(chart, omega, prolong(chart, sigma, x), x, hat.label());
      report.add("ttchange", native.sigma - moved.sigma);
      for (int a = 0; a < n; ++a) report.add("ttchange", native.mu[a] - moved.mu[a]);
      report.add("ttchange", native.rho - moved.rho);
    }
  }

  for (const char* name :
       {"christoffel_shift", "vector_law", "covector_law", "density_law", "ttchange"}) {
    report.set_tol(name, tol);
  }
  return report;
}

ResidualReport operator_naturality(const MetricChart& chart, const ConformalFactor& omega,
                                   const std::vector<VecD>& samples, double tol) {
  const int n = chart.dim();
  RescaledChart hat = rescale(chart, omega, chart.label() + "-hat");
  ResidualReport report;
  auto polys = frozen_component_polys(n);

  for (int field = 0; field < 2; ++field) {
    ScalarField sigma = monomial_field(n, polys[field]);
    ScalarField sigma_hat = [omega, sigma](const VecD& x) { return omega.jet(x) * sigma(x); };
    for (const VecD& x : samples) {
      std::vector<double> lhs = einstein_operator(hat, sigma_hat, x);
      std::vector<double> rhs = einstein_operator(chart, sigma, x);
      double om = omega.jet(x).v;
      for (std::size_t i = 0; i < lhs.size(); ++i) {
        report.add("einstein_naturality", lhs[i] - om * rhs[i]);
      }
    }
  }

  const double yw = 1.0 - 0.5 * n;
  for (int field = 0; field < 2; ++field) {
    ScalarField f = monomial_field(n, polys[field + 1]);
    ScalarField f_hat = [omega, f, yw](const VecD& x) {
      return jet_pow(omega.jet(x), yw) * f(x);
    };
    for (const VecD& x : samples) {
      double lhs = yamabe(hat, f_hat, x);
      double rhs = std::pow(omega.jet(x).v, yw - 2.0) * yamabe(chart, f, x);
      report.add("yamabe_covariance", lhs - rhs);
    }
  }

  const Rational w = rat(3, 2);
  for (int field = 0; field < 2; ++field) {
    DensityField f = make_density(w, chart.label(), monomial_field(n, polys[field + 2]));
    DensityField f_hat = rescale_density(f, omega, hat.label());
    for (const VecD& x : samples) {
      TractorVec lhs = thomas_D(hat, f_hat, x);
      TractorVec moved =
          ttchange_apply(chart, omega, thomas_D(chart, f, x), x, hat.label(), w - 1);
      report.add("thomas_naturality", lhs.sigma - moved.sigma);
      for (int a = 0; a < n; ++a) report.add("thomas_naturality", lhs.mu[a] - moved.mu[a]);
      report.add("thomas_naturality", lhs.rho - moved.rho);
    }
  }

  for (const char* name : {"einstein_naturality", "yamabe_covariance", "thomas_naturality"}) {
    report.set_tol(name, tol);
  }
  return report;
}

}  // namespace tractor
