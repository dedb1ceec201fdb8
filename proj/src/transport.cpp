#include "tractor/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tractor/curvature.hpp"

namespace tractor {

namespace {

// y' = A(t) y for y = (sigma, mu_0 .. mu_{n-1}, rho): parallelism means the
// connection slots vanish along the curve.
std::vector<double> connection_matrix(const MetricChart& chart, const VecD& point,
                                      const VecD& vel) {
  const int n = chart.dim();
  const int m = n + 2;
  CurvatureJets cj = curvature_jets(chart, point);
  std::vector<double> a(std::size_t(m) * m, 0.0);
  for (int i = 0; i < n; ++i) a[ix2(m, 0, 1 + i)] = vel[i];
  for (int b = 0; b < n; ++b) {
    for (int i = 0; i < n; ++i) {
      for (int e = 0; e < n; ++e)
        a[ix2(m, 1 + b, 1 + e)] += vel[i] * cj.gamma[ix3(n, e, i, b)].v;
      a[ix2(m, 1 + b, m - 1)] -= vel[i] * cj.g[ix2(n, i, b)].v;
      a[ix2(m, 1 + b, 0)] -= vel[i] * cj.schouten[ix2(n, i, b)].v;
    }
  }
  for (int c = 0; c < n; ++c) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b)
        acc += vel[i] * cj.schouten[ix2(n, i, b)].v * cj.ginv[ix2(n, b, c)].v;
    a[ix2(m, m - 1, 1 + c)] = acc;
  }
  return a;
}

// columns: m x k state, row-major.
std::vector<double> apply(int m, int k, const std::vector<double>& a,
                          const std::vector<double>& y) {
  std::vector<double> out(std::size_t(m) * k, 0.0);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) {
      double ars = a[ix2(m, r, s)];
      if (ars == 0.0) continue;
      for (int c = 0; c < k; ++c) out[std::size_t(r) * k + c] += ars * y[std::size_t(s) * k + c];
    }
  return out;
}

std::vector<double> rk4_transport(const MetricChart& chart, const Path& path, double h,
                                  std::vector<double> y, int k) {
  const int m = chart.dim() + 2;
  if (!(h > 0.0)) throw std::invalid_argument("transport step must be positive");
  const double span = path.t1 - path.t0;
  const long steps = std::max(1L, std::lround(std::ceil(span / h - 1e-12)));
  const double hs = span / steps;
  VecD point, vel;
  auto a_at = [&](double t) {
    path.eval(t, point, vel);
    return connection_matrix(chart, point, vel);
  };
  auto shifted = [&](const std::vector<double>& base, const std::vector<double>& dir,
                     double scale) {
    std::vector<double> out = base;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += scale * dir[i];
    return out;
  };
  for (long s = 0; s < steps; ++s) {
    double t = path.t0 + s * hs;
    std::vector<double> a1 = a_at(t);
    std::vector<double> k1 = apply(m, k, a1, y);
    std::vector<double> a2 = a_at(t + 0.5 * hs);
    std::vector<double> k2 = apply(m, k, a2, shifted(y, k1, 0.5 * hs));
    std::vector<double> k3 = apply(m, k, a2, shifted(y, k2, 0.5 * hs));
    std::vector<double> a4 = a_at(t + hs);
    std::vector<double> k4 = apply(m, k, a4, shifted(y, k3, hs));
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] += hs / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  return y;
}

std::vector<double> matmul(int m, const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(std::size_t(m) * m, 0.0);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) {
      double ars = a[ix2(m, r, s)];
      if (ars == 0.0) continue;
      for (int c = 0; c < m; ++c) out[ix2(m, r, c)] += ars * b[ix2(m, s, c)];
    }
  return out;
}

}  // namespace

Path line_path(VecD a, VecD b) {
  Path p;
  p.t0 = 0.0;
  p.t1 = 1.0;
  p.eval = [a = std::move(a), b = std::move(b)](double t, VecD& point, VecD& velocity) {
    point.resize(a.size());
    velocity.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      point[i] = a[i] + t * (b[i] - a[i]);
      velocity[i] = b[i] - a[i];
    }
  };
  return p;
}

TractorVec parallel_transport(const MetricChart& chart, const Path& path,
                              const TractorVec& start, double h) {
  const int n = chart.dim();
  if (start.scale != chart.label()) {
    throw std::invalid_argument("tractor components carry scale '" + start.scale +
                                "' but the chart is '" + chart.label() + "'");
  }
  if (start.mu.size() != std::size_t(n)) {
    throw std::invalid_argument("middle slot dimension mismatch");
  }
  std::vector<double> y(n + 2);
  y[0] = start.sigma;
  for (int i = 0; i < n; ++i) y[1 + i] = start.mu[i];
  y[n + 1] = start.rho;
  y = rk4_transport(chart, path, h, std::move(y), 1);
  TractorVec out;
  out.scale = chart.label();
  out.sigma = y[0];
  out.mu.assign(y.begin() + 1, y.begin() + 1 + n);
  out.rho = y[n + 1];
  return out;
}

std::vector<double> transport_matrix(const MetricChart& chart, const Path& path, double h) {
  const int m = chart.dim() + 2;
  std::vector<double> eye(std::size_t(m) * m, 0.0);
  for (int i = 0; i < m; ++i) eye[ix2(m, i, i)] = 1.0;
  return rk4_transport(chart, path, h, std::move(eye), m);
}

std::vector<double> holonomy_polygon(const MetricChart& chart,
                                     const std::vector<VecD>& vertices, double h) {
  if (vertices.size() < 2) throw std::invalid_argument("polygon needs at least two vertices");
  const int m = chart.dim() + 2;
  std::vector<double> hol(std::size_t(m) * m, 0.0);
  for (int i = 0; i < m; ++i) hol[ix2(m, i, i)] = 1.0;
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const VecD& from = vertices[v];
    const VecD& to = vertices[(v + 1) % vertices.size()];
    std::vector<double> edge = transport_matrix(chart, line_path(from, to), h);
    hol = matmul(m, edge, hol);
  }
  return hol;
}

std::vector<double> holonomy_loop(const MetricChart& chart, const VecD& base, int i, int j,
                                  double side, double h) {
  if (i == j) throw std::invalid_argument("loop plane needs two distinct directions");
  VecD p1 = base, p2 = base, p3 = base;
  p1[i] += side;
  p2[i] += side;
  p2[j] += side;
  p3[j] += side;
  return holonomy_polygon(chart, {base, p1, p2, p3}, h);
}

double identity_defect(const std::vector<double>& m) {
  std::size_t dim = 0;
  while (dim * dim < m.size()) ++dim;
  if (dim * dim != m.size()) throw std::invalid_argument("matrix is not square");
  double worst = 0.0;
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      double want = r == c ? 1.0 : 0.0;
      worst = std::max(worst, std::fabs(m[r * dim + c] - want));
    }
  return worst;
}

double tractor_norm(const MetricChart& chart, const TractorVec& v, const VecD& x) {
  const int n = chart.dim();
  CurvatureJets cj = curvature_jets(chart, x);
  double q = 2.0 * v.sigma * v.rho;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) q += cj.ginv[ix2(n, a, b)].v * v.mu[a] * v.mu[b];
  return q;
}

RecoverReport einstein_recover(const MetricChart& chart, const TractorVec& seed,
                               const VecD& base, const std::vector<VecD>& samples,
                               double h, double probe_tol) {
  const int n = chart.dim();
  if (samples.size() < std::size_t(n) + 2) {
    throw std::invalid_argument("recovery needs at least n + 2 sample points");
  }

  // Probe tractor flatness before trusting path independence of transport.
  const VecD* far = &base;
  double far_dist = -1.0;
  for (const VecD& x : samples) {
    double d = 0.0;
    for (int i = 0; i < n; ++i) d += (x[i] - base[i]) * (x[i] - base[i]);
    if (d > far_dist) {
      far_dist = d;
      far = &x;
    }
  }
  const double probe_side = 0.05;
  double worst_defect = 0.0;
  for (const VecD* at : {&base, far}) {
    for (auto [i, j] : {std::pair<int, int>{0, 1}, std::pair<int, int>{1, 2}}) {
      VecD corner = *at;
      for (int d : {i, j}) {
        if (corner[d] + probe_side > chart.domain().hi[d]) corner[d] -= probe_side;
      }
      double defect =
          identity_defect(holonomy_loop(chart, corner, i, j, probe_side, 0.05));
      worst_defect = std::max(worst_defect, defect);
    }
  }
  RecoverReport report;
  report.max_probe_defect = worst_defect;
  if (worst_defect > probe_tol) {
    throw std::runtime_error(
        "tractor holonomy is above the probe tolerance; the transported scale "
        "would be path dependent here");
  }
  const ConformalFactor* flat = chart.flat_factor();
  if (flat == nullptr) {
    throw std::runtime_error(
        "chart has no recorded conformal-to-flat factor to anchor the scale fit");
  }

  report.transported_sigma.resize(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    TractorVec moved = parallel_transport(chart, line_path(base, samples[s]), seed, h);
    report.transported_sigma[s] = moved.sigma;
  }

  // Least squares for sigma = F (a + b.x + c |x|^2) over the samples.
  const int cols = n + 2;
  std::vector<double> design(samples.size() * cols);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const VecD& x = samples[s];
    double fv = flat->jet(x).v;
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
    design[s * cols + 0] = fv;
    for (int i = 0; i < n; ++i) design[s * cols + 1 + i] = fv * x[i];
    design[s * cols + n + 1] = fv * r2;
  }
  std::vector<double> ata(std::size_t(cols) * cols, 0.0), atb(cols, 0.0);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (int r = 0; r < cols; ++r) {
      atb[r] += design[s * cols + r] * report.transported_sigma[s];
      for (int c = 0; c < cols; ++c)
        ata[ix2(cols, r, c)] += design[s * cols + r] * design[s * cols + c];
    }
  }
  // Gaussian elimination with partial pivoting on the normal equations.
  for (int k = 0; k < cols; ++k) {
    int pivot = k;
    for (int r = k + 1; r < cols; ++r) {
      if (std::fabs(ata[ix2(cols, r, k)]) > std::fabs(ata[ix2(cols, pivot, k)])) pivot = r;
    }
    if (ata[ix2(cols, pivot, k)] == 0.0) {
      throw std::runtime_error("sample set does not determine the scale fit");
    }
    if (pivot != k) {
      for (int c = 0; c < cols; ++c) std::swap(ata[ix2(cols, k, c)], ata[ix2(cols, pivot, c)]);
      std::swap(atb[k], atb[pivot]);
    }
    for (int r = 0; r < cols; ++r) {
      if (r == k) continue;
      double f = ata[ix2(cols, r, k)] / ata[ix2(cols, k, k)];
      if (f == 0.0) continue;
      for (int c = k; c < cols; ++c) ata[ix2(cols, r, c)] -= f * ata[ix2(cols, k, c)];
      atb[r] -= f * atb[k];
    }
  }
  report.coeffs.resize(cols);
  for (int k = 0; k < cols; ++k) report.coeffs[k] = atb[k] / ata[ix2(cols, k, k)];

  for (std::size_t s = 0; s < samples.size(); ++s) {
    double fit = 0.0;
    for (int c = 0; c < cols; ++c) fit += design[s * cols + c] * report.coeffs[c];
    report.max_fit_gap =
        std::max(report.max_fit_gap, std::fabs(fit - report.transported_sigma[s]));
  }

  ConformalFactor factor = *flat;
  VecD coeffs = report.coeffs;
  report.candidate = [factor, coeffs, n](const VecD& x) {
    Jet3 poly = jet_constant<3>(n, coeffs[0]);
    Jet3 r2(n);
    for (int i = 0; i < n; ++i) {
      Jet3 xi = jet_coordinate<3>(n, i, x[i]);
      poly = poly + xi * coeffs[1 + i];
      r2 = r2 + xi * xi;
    }
    poly = poly + r2 * coeffs[n + 1];
    return factor.jet(x) * poly;
  };

  for (const VecD& x : samples) {
    std::vector<double> e = einstein_operator(chart, report.candidate, x);
    for (double v : e) report.max_einstein_residual = std::max(report.max_einstein_residual,
                                                               std::fabs(v));
  }
  return report;
}

}  // namespace tractor
