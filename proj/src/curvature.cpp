#include "tractor/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace tractor {

namespace {

// Gauss-Jordan with value pivoting, all arithmetic on jets.
std::vector<Jet3> jet_matrix_inverse(int n, std::vector<Jet3> a) {
  const int vars = a.empty() ? 0 : a[0].n;
  std::vector<Jet3> inv(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[ix2(n, i, j)] = jet_constant<3>(vars, i == j ? 1.0 : 0.0);
  for (int k = 0; k < n; ++k) {
    int pivot_row = k;
    for (int r = k + 1; r < n; ++r) {
      if (std::fabs(a[ix2(n, r, k)].v) > std::fabs(a[ix2(n, pivot_row, k)].v)) pivot_row = r;
    }
    if (a[ix2(n, pivot_row, k)].v == 0.0) {
      throw std::domain_error("metric is singular at the evaluation point");
    }
    if (pivot_row != k) {
      for (int c = 0; c < n; ++c) {
        std::swap(a[ix2(n, k, c)], a[ix2(n, pivot_row, c)]);
        std::swap(inv[ix2(n, k, c)], inv[ix2(n, pivot_row, c)]);
      }
    }
    Jet3 scale = jet_reciprocal(a[ix2(n, k, k)]);
    for (int c = 0; c < n; ++c) {
      a[ix2(n, k, c)] = a[ix2(n, k, c)] * scale;
      inv[ix2(n, k, c)] = inv[ix2(n, k, c)] * scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == k) continue;
      Jet3 f = a[ix2(n, r, k)];
      if (f.v == 0.0) {
        bool zero = true;
        for (double d : f.d1) zero = zero && d == 0.0;
        for (double d : f.d2) zero = zero && d == 0.0;
        for (double d : f.d3) zero = zero && d == 0.0;
        if (zero) continue;
      }
      for (int c = 0; c < n; ++c) {
        a[ix2(n, r, c)] = a[ix2(n, r, c)] - f * a[ix2(n, k, c)];
        inv[ix2(n, r, c)] = inv[ix2(n, r, c)] - f * inv[ix2(n, k, c)];
      }
    }
  }
  return inv;
}

}  // namespace

CurvatureJets curvature_jets(const MetricChart& chart, const VecD& x) {
  const int n = chart.dim();
  CurvatureJets cj;
  cj.n = n;
  cj.g = chart.metric_jets(x);
  cj.ginv = jet_matrix_inverse(n, cj.g);

  std::vector<Jet2> dg(std::size_t(n) * n * n);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dg[ix3(n, c, a, b)] = jet_derivative(cj.g[ix2(n, a, b)], c);

  std::vector<Jet2> ginv2(std::size_t(n) * n);
  for (std::size_t i = 0; i < ginv2.size(); ++i) ginv2[i] = jet_truncate<2>(cj.ginv[i]);

  cj.gamma.assign(std::size_t(n) * n * n, Jet2(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Jet2 sum(n);
        for (int l = 0; l < n; ++l) {
          sum = sum + ginv2[ix2(n, i, l)] *
                          (dg[ix3(n, k, l, j)] + dg[ix3(n, j, l, k)] - dg[ix3(n, l, j, k)]);
        }
        sum = sum * 0.5;
        cj.gamma[ix3(n, i, j, k)] = sum;
        cj.gamma[ix3(n, i, k, j)] = sum;
      }

  std::vector<Jet1> gamma1(cj.gamma.size());
  for (std::size_t i = 0; i < gamma1.size(); ++i) gamma1[i] = jet_truncate<1>(cj.gamma[i]);

  cj.riemann.assign(std::size_t(n) * n * n * n, Jet1(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Jet1 val = jet_derivative(cj.gamma[ix3(n, c, b, d)], a) -
                     jet_derivative(cj.gamma[ix3(n, c, a, d)], b);
          for (int e = 0; e < n; ++e) {
            val = val + gamma1[ix3(n, c, a, e)] * gamma1[ix3(n, e, b, d)] -
                  gamma1[ix3(n, c, b, e)] * gamma1[ix3(n, e, a, d)];
          }
          cj.riemann[ix4(n, a, b, c, d)] = val;
        }
    }

  std::vector<Jet1> g1(std::size_t(n) * n), ginv1(std::size_t(n) * n);
  for (std::size_t i = 0; i < g1.size(); ++i) {
    g1[i] = jet_truncate<1>(cj.g[i]);
    ginv1[i] = jet_truncate<1>(cj.ginv[i]);
  }

  cj.riemann_low.assign(std::size_t(n) * n * n * n, Jet1(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Jet1 val(n);
          for (int e = 0; e < n; ++e) {
            val = val + g1[ix2(n, c, e)] * cj.riemann[ix4(n, a, b, e, d)];
          }
          cj.riemann_low[ix4(n, a, b, c, d)] = val;
        }

  cj.ricci.assign(std::size_t(n) * n, Jet1(n));
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      Jet1 val(n);
      for (int a = 0; a < n; ++a) val = val + cj.riemann[ix4(n, a, b, a, d)];
      cj.ricci[ix2(n, b, d)] = val;
    }

  cj.scalar = Jet1(n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      cj.scalar = cj.scalar + ginv1[ix2(n, b, d)] * cj.ricci[ix2(n, b, d)];

  cj.schouten.assign(std::size_t(n) * n, Jet1(n));
  const double p_scale = 1.0 / (n - 2);
  const double s_scale = 1.0 / (2.0 * (n - 1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cj.schouten[ix2(n, a, b)] =
          (cj.ricci[ix2(n, a, b)] - cj.scalar * g1[ix2(n, a, b)] * s_scale) * p_scale;
    }

  cj.schouten_trace = Jet1(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      cj.schouten_trace = cj.schouten_trace + ginv1[ix2(n, a, b)] * cj.schouten[ix2(n, a, b)];

  return cj;
}

std::vector<double> christoffel(const MetricChart& chart, const VecD& x) {
  CurvatureJets cj = curvature_jets(chart, x);
  std::vector<double> out(cj.gamma.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cj.gamma[i].v;
  return out;
}

std::vector<Jet1> covariant_hessian(const CurvatureJets& cj, const Jet3& f) {
  const int n = cj.n;
  std::vector<Jet1> hess(std::size_t(n) * n, Jet1(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet1 t = jet_derivative(jet_derivative(f, a), b);
      for (int e = 0; e < n; ++e) {
        t = t - jet_truncate<1>(cj.gamma[ix3(n, e, a, b)]) *
                    jet_truncate<1>(jet_derivative(f, e));
      }
      hess[ix2(n, a, b)] = t;
    }
  return hess;
}

Jet1 laplacian(const CurvatureJets& cj, const Jet3& f) {
  const int n = cj.n;
  std::vector<Jet1> hess = covariant_hessian(cj, f);
  Jet1 out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      out = out + jet_truncate<1>(cj.ginv[ix2(n, a, b)]) * hess[ix2(n, a, b)];
  return out;
}

namespace {

PointCurvature point_values(const CurvatureJets& cj) {
  const int n = cj.n;
  PointCurvature pc;
  pc.n = n;
  auto values = [](const auto& jets) {
    std::vector<double> out(jets.size());
    for (std::size_t i = 0; i < jets.size(); ++i) out[i] = jets[i].v;
    return out;
  };
  pc.g = values(cj.g);
  pc.ginv = values(cj.ginv);
  pc.gamma = values(cj.gamma);
  pc.riemann = values(cj.riemann);
  pc.riemann_low = values(cj.riemann_low);
  pc.ricci = values(cj.ricci);
  pc.schouten = values(cj.schouten);
  pc.scalar = cj.scalar.v;
  pc.schouten_trace = cj.schouten_trace.v;

  pc.weyl.assign(pc.riemann_low.size(), 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double pg = pc.g[ix2(n, a, c)] * pc.schouten[ix2(n, b, d)] +
                      pc.g[ix2(n, b, d)] * pc.schouten[ix2(n, a, c)] -
                      pc.g[ix2(n, a, d)] * pc.schouten[ix2(n, b, c)] -
                      pc.g[ix2(n, b, c)] * pc.schouten[ix2(n, a, d)];
          pc.weyl[ix4(n, a, b, c, d)] = pc.riemann_low[ix4(n, a, b, c, d)] - pg;
        }
  return pc;
}

}  // namespace

PointCurvature curvature_suite(const MetricChart& chart, const VecD& x) {
  return point_values(curvature_jets(chart, x));
}

void ResidualReport::add(const std::string& name, double value) {
  for (ResidualEntry& e : entries) {
    if (e.name == name) {
      double v = std::fabs(value);
      e.max_abs = std::max(e.max_abs, v);
      e.mean_abs = (e.mean_abs * e.samples + v) / (e.samples + 1);
      e.samples += 1;
      return;
    }
  }
  ResidualEntry e;
  e.name = name;
  e.max_abs = std::fabs(value);
  e.mean_abs = e.max_abs;
  e.samples = 1;
  entries.push_back(std::move(e));
}

void ResidualReport::set_tol(const std::string& name, double tol) {
  for (ResidualEntry& e : entries) {
    if (e.name == name) {
      e.tol = tol;
      e.pass = e.max_abs <= tol;
      return;
    }
  }
  throw std::invalid_argument("no residual entry named " + name);
}

const ResidualEntry& ResidualReport::entry(const std::string& name) const {
  for (const ResidualEntry& e : entries) {
    if (e.name == name) return e;
  }
  throw std::invalid_argument("no residual entry named " + name);
}

bool ResidualReport::all_pass() const {
  for (const ResidualEntry& e : entries) {
    if (!e.pass) return false;
  }
  return true;
}

ResidualReport curvature_invariants(const MetricChart& chart,
                                    const std::vector<VecD>& samples, double tol) {
  ResidualReport report;
  const int n = chart.dim();
  for (const VecD& x : samples) {
    CurvatureJets cj = curvature_jets(chart, x);
    PointCurvature pc = point_values(cj);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          report.add("gamma_symmetry",
                     pc.gamma[ix3(n, i, j, k)] - pc.gamma[ix3(n, i, k, j)]);
        }
        double kron = 0.0;
        for (int k = 0; k < n; ++k) kron += pc.ginv[ix2(n, i, k)] * pc.g[ix2(n, k, j)];
        report.add("inverse_metric", kron - (i == j ? 1.0 : 0.0));
        report.add("ricci_symmetry", pc.ricci[ix2(n, i, j)] - pc.ricci[ix2(n, j, i)]);
      }
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double nabla_g = cj.g[ix2(n, a, b)].g1(c);
          for (int e = 0; e < n; ++e) {
            nabla_g -= pc.gamma[ix3(n, e, c, a)] * pc.g[ix2(n, e, b)];
            nabla_g -= pc.gamma[ix3(n, e, c, b)] * pc.g[ix2(n, a, e)];
          }
          report.add("metric_compatibility", nabla_g);
        }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const auto& R = pc.riemann_low;
            report.add("riemann_antisymmetry",
                       R[ix4(n, a, b, c, d)] + R[ix4(n, b, a, c, d)]);
            report.add("riemann_antisymmetry",
                       R[ix4(n, a, b, c, d)] + R[ix4(n, a, b, d, c)]);
            report.add("riemann_pair_symmetry",
                       R[ix4(n, a, b, c, d)] - R[ix4(n, c, d, a, b)]);
            report.add("first_bianchi", R[ix4(n, a, b, c, d)] + R[ix4(n, b, c, a, d)] +
                                            R[ix4(n, c, a, b, d)]);
          }
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        double trace = 0.0;
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c)
            trace += pc.ginv[ix2(n, a, c)] * pc.weyl[ix4(n, a, b, c, d)];
        report.add("weyl_trace", trace);
      }
    double j_check = pc.schouten_trace - pc.scalar / (2.0 * (n - 1));
    report.add("schouten_trace", j_check);
  }
  for (const char* name :
       {"gamma_symmetry", "inverse_metric", "ricci_symmetry", "metric_compatibility",
        "riemann_antisymmetry", "riemann_pair_symmetry", "first_bianchi", "weyl_trace",
        "schouten_trace"}) {
    report.set_tol(name, tol);
  }
  return report;
}

ResidualReport bianchi_checks(const MetricChart& chart,
                              const std::vector<VecD>& samples, double tol) {
  ResidualReport report;
  const int n = chart.dim();
  const std::vector<std::vector<Monomial>> densities = {
      monomials_padded(n, {{1.0, {2, 1, 0}}, {1.0, {0, 0, 3}}, {-1.0, {1, 1, 1}}}),
      monomials_padded(n,
                       {{1.0, {3, 0, 0}}, {-2.0, {0, 2, 1}}, {1.0, {1, 0, 2}}, {1.0, {0, 1, 0}}}),
  };
  for (const VecD& x : samples) {
    CurvatureJets cj = curvature_jets(chart, x);
    auto gamma_v = [&](int i, int j, int k) { return cj.gamma[ix3(n, i, j, k)].v; };
    auto rlow = [&](int a, int b, int c, int d) -> const Jet1& {
      return cj.riemann_low[ix4(n, a, b, c, d)];
    };

    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            report.add("first_bianchi", rlow(a, b, c, d).v + rlow(b, c, a, d).v +
                                            rlow(c, a, b, d).v);

    // nabla_e R_{abcd} with the four Christoffel corrections.
    auto cov_riemann = [&](int e, int a, int b, int c, int d) {
      double val = rlow(a, b, c, d).g1(e);
      for (int f = 0; f < n; ++f) {
        val -= gamma_v(f, e, a) * rlow(f, b, c, d).v;
        val -= gamma_v(f, e, b) * rlow(a, f, c, d).v;
        val -= gamma_v(f, e, c) * rlow(a, b, f, d).v;
        val -= gamma_v(f, e, d) * rlow(a, b, c, f).v;
      }
      return val;
    };
    for (int e = 0; e < n; ++e)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d)
              report.add("second_bianchi", cov_riemann(e, a, b, c, d) +
                                               cov_riemann(a, b, e, c, d) +
                                               cov_riemann(b, e, a, c, d));

    for (int c = 0; c < n; ++c) {
      double div_p = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double nabla_p = cj.schouten[ix2(n, b, c)].g1(a);
          for (int e = 0; e < n; ++e) {
            nabla_p -= gamma_v(e, a, b) * cj.schouten[ix2(n, e, c)].v;
            nabla_p -= gamma_v(e, a, c) * cj.schouten[ix2(n, b, e)].v;
          }
          div_p += cj.ginv[ix2(n, a, b)].v * nabla_p;
        }
      report.add("schouten_divergence", div_p - cj.schouten_trace.g1(c));
    }

    for (const auto& terms : densities) {
      Jet3 sigma = eval_monomials(n, terms, x);
      std::vector<Jet1> hess = covariant_hessian(cj, sigma);
      Jet1 lap = laplacian(cj, sigma);
      for (int c = 0; c < n; ++c) {
        double grad_of_laplacian = lap.g1(c);
        double laplacian_of_grad = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double nabla_t = hess[ix2(n, b, c)].g1(a);
            for (int f = 0; f < n; ++f) {
              nabla_t -= gamma_v(f, a, b) * hess[ix2(n, f, c)].v;
              nabla_t -= gamma_v(f, a, c) * hess[ix2(n, b, f)].v;
            }
            laplacian_of_grad += cj.ginv[ix2(n, a, b)].v * nabla_t;
          }
        double rhs = 0.0;
        for (int b = 0; b < n; ++b)
          for (int d = 0; d < n; ++d)
            for (int e = 0; e < n; ++e)
              rhs += cj.riemann[ix4(n, c, b, b, d)].v * cj.ginv[ix2(n, d, e)].v * sigma.g1(e);
        report.add("laplacian_commutator", grad_of_laplacian - laplacian_of_grad - rhs);
      }
    }
  }
  for (const char* name :
       {"first_bianchi", "second_bianchi", "schouten_divergence", "laplacian_commutator"}) {
    report.set_tol(name, tol);
  }
  return report;
}

std::vector<VecD> sample_box(const Box& box, int count, unsigned seed, double inset_fraction) {
  std::mt19937 rng(seed);
  const int n = static_cast<int>(box.lo.size());
  std::vector<VecD> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    VecD x(n);
    for (int i = 0; i < n; ++i) {
      double w = box.hi[i] - box.lo[i];
      std::uniform_real_distribution<double> dist(box.lo[i] + inset_fraction * w,
                                                  box.hi[i] - inset_fraction * w);
      x[i] = dist(rng);
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace tractor
