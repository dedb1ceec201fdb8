#include "tractor/chart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace tractor {

bool Box::contains(const VecD& x) const {
  if (x.size() != lo.size() || x.size() != hi.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

Box cube_box(int n, double half_width) {
  Box box;
  box.lo.assign(n, -half_width);
  box.hi.assign(n, half_width);
  return box;
}

Jet3 ConformalFactor::jet(const VecD& x) const {
  Jet3 w = eval(x);
  if (!(w.v > 0.0)) {
    throw std::domain_error("conformal factor must be positive on the domain");
  }
  return w;
}

ConformalFactor constant_factor(int n, double c) {
  ConformalFactor f;
  f.eval = [n, c](const VecD& x) {
    if (static_cast<int>(x.size()) != n) {
      throw std::invalid_argument("point dimension mismatch");
    }
    return jet_constant<3>(n, c);
  };
  return f;
}

ConformalFactor polynomial_factor(int n, double base, std::vector<Monomial> terms) {
  ConformalFactor f;
  f.eval = [n, base, terms = std::move(terms)](const VecD& x) {
    return jet_constant<3>(n, base) + eval_monomials(n, terms, x);
  };
  return f;
}

ConformalFactor sphere_flat_factor(int n) {
  ConformalFactor f;
  f.eval = [n](const VecD& x) {
    if (static_cast<int>(x.size()) != n) {
      throw std::invalid_argument("point dimension mismatch");
    }
    Jet3 s = jet_constant<3>(n, 1.0);
    for (int i = 0; i < n; ++i) {
      Jet3 xi = jet_coordinate<3>(n, i, x[i]);
      s = s + xi * xi;
    }
    return jet_reciprocal(s) * 2.0;
  };
  return f;
}

ConformalFactor product_factor(ConformalFactor a, ConformalFactor b) {
  ConformalFactor f;
  f.eval = [a = std::move(a), b = std::move(b)](const VecD& x) {
    return a.jet(x) * b.jet(x);
  };
  return f;
}

VecD upsilon(const ConformalFactor& omega, const VecD& x) {
  Jet3 w = omega.jet(x);
  VecD u(w.n);
  for (int a = 0; a < w.n; ++a) u[a] = w.g1(a) / w.v;
  return u;
}

MetricChart::MetricChart(int n, Box box, std::string label)
    : n_(n), box_(std::move(box)), label_(std::move(label)) {
  if (n_ < 3) throw std::invalid_argument("chart dimension must be at least 3");
  if (box_.lo.size() != static_cast<std::size_t>(n_) ||
      box_.hi.size() != static_cast<std::size_t>(n_)) {
    throw std::invalid_argument("domain box dimension mismatch");
  }
  for (int i = 0; i < n_; ++i) {
    if (!(box_.lo[i] < box_.hi[i])) throw std::invalid_argument("empty domain box");
  }
}

void MetricChart::require_inside(const VecD& x) const {
  if (!box_.contains(x)) {
    throw std::domain_error("point outside the chart domain");
  }
}

std::vector<Jet3> MetricChart::metric_jets(const VecD& x) const {
  require_inside(x);
  std::vector<Jet3> g;
  g.reserve(static_cast<std::size_t>(n_) * n_);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) g.push_back(metric(a, b, x));
  }
  return g;
}

FlatChart::FlatChart(int n, Box box, std::string label)
    : MetricChart(n, box.lo.empty() ? cube_box(n, 2.0) : std::move(box), std::move(label)),
      one_(constant_factor(n, 1.0)) {}

Jet3 FlatChart::metric(int a, int b, const VecD& x) const {
  require_inside(x);
  return jet_constant<3>(dim(), a == b ? 1.0 : 0.0);
}

SphereChart::SphereChart(int n, Box box, std::string label)
    : MetricChart(n, box.lo.empty() ? cube_box(n, 2.0) : std::move(box), std::move(label)),
      factor_(sphere_flat_factor(n)) {}

Jet3 SphereChart::metric(int a, int b, const VecD& x) const {
  require_inside(x);
  if (a != b) return jet_constant<3>(dim(), 0.0);
  Jet3 f = factor_.jet(x);
  return f * f;
}

PolyChart::PolyChart(int n, std::vector<std::vector<Monomial>> upper_entries, Box box,
                     std::string label)
    : MetricChart(n, box.lo.empty() ? cube_box(n, 0.3) : std::move(box), std::move(label)),
      entries_(std::move(upper_entries)) {
  std::size_t expect = static_cast<std::size_t>(n) * (n + 1) / 2;
  if (entries_.size() != expect) {
    throw std::invalid_argument("polynomial chart needs one entry list per pair a <= b");
  }
}

Jet3 PolyChart::metric(int a, int b, const VecD& x) const {
  require_inside(x);
  int n = dim();
  if (a > b) std::swap(a, b);
  int idx = a * n - a * (a - 1) / 2 + (b - a);
  Jet3 value = eval_monomials(n, entries_[idx], x);
  if (a == b) value = value + 1.0;
  return value;
}

namespace {

Monomial mono(double coef, std::vector<int> exps) { return Monomial{coef, std::move(exps)}; }

std::vector<std::vector<Monomial>> poly_entries_3() {
  const double s = 1.0 / 8.0;
  std::vector<std::vector<Monomial>> e(6);
  // (0,0)
  e[0] = {mono(s, {0, 1, 0}), mono(s, {1, 0, 1}), mono(s, {1, 1, 1})};
  // (0,1)
  e[1] = {mono(s, {0, 0, 1}), mono(s, {2, 0, 0}), mono(-s, {0, 1, 2})};
  // (0,2)
  e[2] = {mono(s, {0, 1, 0}), mono(-s, {0, 0, 2}), mono(s, {2, 0, 1})};
  // (1,1)
  e[3] = {mono(s, {0, 0, 1}), mono(-s, {1, 1, 0}), mono(s, {0, 2, 1})};
  // (1,2)
  e[4] = {mono(s, {1, 0, 0}), mono(s, {1, 1, 0}), mono(-s, {0, 3, 0})};
  // (2,2)
  e[5] = {mono(s, {1, 0, 0}), mono(s, {0, 1, 1}), mono(s, {2, 1, 0})};
  return e;
}

std::vector<std::vector<Monomial>> poly_entries_4() {
  const double s = 1.0 / 8.0;
  std::vector<std::vector<Monomial>> e(10);
  // (0,0)
  e[0] = {mono(s, {0, 1, 0, 0}), mono(s, {1, 0, 1, 0}), mono(s, {1, 1, 0, 1})};
  // (0,1)
  e[1] = {mono(s, {0, 0, 1, 0}), mono(s, {2, 0, 0, 0}), mono(-s, {0, 1, 0, 2})};
  // (0,2)
  e[2] = {mono(s, {0, 0, 0, 1}), mono(-s, {0, 2, 0, 0}), mono(s, {2, 0, 1, 0})};
  // (0,3)
  e[3] = {mono(s, {0, 1, 0, 0}), mono(s, {0, 0, 2, 0}), mono(-s, {0, 0, 0, 3})};
  // (1,1)
  e[4] = {mono(s, {0, 0, 1, 0}), mono(-s, {1, 1, 0, 0}), mono(s, {0, 1, 1, 1})};
  // (1,2)
  e[5] = {mono(s, {1, 0, 0, 0}), mono(s, {1, 0, 0, 1}), mono(-s, {0, 0, 3, 0})};
  // (1,3)
  e[6] = {mono(s, {0, 0, 1, 0}), mono(-s, {1, 0, 0, 1}), mono(s, {0, 3, 0, 0})};
  // (2,2)
  e[7] = {mono(s, {0, 0, 0, 1}), mono(s, {1, 1, 0, 0}), mono(s, {2, 0, 0, 1})};
  // (2,3)
  e[8] = {mono(s, {1, 1, 0, 0}), mono(s, {0, 0, 0, 2}), mono(-s, {3, 0, 0, 0})};
  // (3,3)
  e[9] = {mono(s, {1, 0, 0, 0}), mono(s, {0, 0, 1, 1}), mono(s, {0, 2, 1, 0})};
  return e;
}

}  // namespace

PolyChart builtin_poly_chart(int n) {
  if (n == 3) return PolyChart(3, poly_entries_3());
  if (n == 4) return PolyChart(4, poly_entries_4());
  throw std::invalid_argument("builtin polynomial chart exists for n = 3 and n = 4 only");
}

RescaledChart::RescaledChart(const MetricChart& base, ConformalFactor omega, std::string label)
    : MetricChart(base.dim(), base.domain(),
                  label.empty() ? base.label() + "-rescaled" : std::move(label)),
      base_(&base),
      omega_(omega),
      has_flat_(base.flat_factor() != nullptr) {
  if (has_flat_) composed_ = product_factor(omega_, *base.flat_factor());
}

Jet3 RescaledChart::metric(int a, int b, const VecD& x) const {
  Jet3 w = omega_.jet(x);
  return w * w * base_->metric(a, b, x);
}

const ConformalFactor* RescaledChart::flat_factor() const {
  return has_flat_ ? &composed_ : nullptr;
}

RescaledChart rescale(const MetricChart& base, ConformalFactor omega, std::string label) {
  return RescaledChart(base, std::move(omega), std::move(label));
}

namespace {

double fd_first(const MetricChart& chart, int a, int b, const VecD& x, int i, double h) {
  VecD xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  return (chart.metric(a, b, xp).v - chart.metric(a, b, xm).v) / (2.0 * h);
}

double fd_second(const MetricChart& chart, int a, int b, const VecD& x, int i, int j, double h) {
  VecD xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  return (chart.metric(a, b, xp).g1(j) - chart.metric(a, b, xm).g1(j)) / (2.0 * h);
}

double fd_third(const MetricChart& chart, int a, int b, const VecD& x, int i, int j, int k,
                double h) {
  VecD xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  return (chart.metric(a, b, xp).g2(j, k) - chart.metric(a, b, xm).g2(j, k)) / (2.0 * h);
}

}  // namespace

ChartValidation validate_chart(const MetricChart& chart, const std::vector<VecD>& samples) {
  ChartValidation out;
  out.min_pivot = std::numeric_limits<double>::infinity();
  const int n = chart.dim();
  const double h = 1e-4;
  for (const VecD& x : samples) {
    std::vector<Jet3> g = chart.metric_jets(x);
    auto at = [&](int a, int b) -> const Jet3& { return g[a * n + b]; };
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        double gap = std::fabs(at(a, b).v - at(b, a).v);
        for (int i = 0; i < n; ++i) {
          gap = std::max(gap, std::fabs(at(a, b).g1(i) - at(b, a).g1(i)));
        }
        out.max_symmetry_gap = std::max(out.max_symmetry_gap, gap);
      }
    }
    // Cholesky pivots of the value matrix.
    std::vector<double> m(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) m[a * n + b] = at(a, b).v;
    }
    for (int k = 0; k < n; ++k) {
      double pivot = m[k * n + k];
      out.min_pivot = std::min(out.min_pivot, pivot);
      if (!(pivot > 0.0)) {
        out.positive_definite = false;
        break;
      }
      for (int r = k + 1; r < n; ++r) {
        double f = m[r * n + k] / pivot;
        for (int c = k; c < n; ++c) m[r * n + c] -= f * m[k * n + c];
      }
    }
    // Spot-check supplied partials against central differences of the next
    // lower order; used for validation only, never inside an operation.
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        const Jet3& jab = at(a, b);
        for (int i = 0; i < n; ++i) {
          double r1 = std::fabs(jab.g1(i) - fd_first(chart, a, b, x, i, h));
          out.max_partial_residual = std::max(out.max_partial_residual, r1);
          for (int j = i; j < n; ++j) {
            double r2 = std::fabs(jab.g2(i, j) - fd_second(chart, a, b, x, i, j, h));
            out.max_partial_residual = std::max(out.max_partial_residual, r2);
            for (int k = j; k < n; ++k) {
              double r3 = std::fabs(jab.g3(i, j, k) - fd_third(chart, a, b, x, i, j, k, h));
              out.max_partial_residual = std::max(out.max_partial_residual, r3);
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace tractor
