#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tractor/chart.hpp"
#include "tractor/conformal_ops.hpp"

namespace tractor {

// Curve with velocity on a parameter interval, smooth on the interval.
struct Path {
  double t0 = 0.0;
  double t1 = 1.0;
  std::function<void(double t, VecD& point, VecD& velocity)> eval;
};

Path line_path(VecD a, VecD b);

// Fixed-step RK4 on the first-order system for parallel tractor components
// along the path; the step count is ceil((t1 - t0) / h).
TractorVec parallel_transport(const MetricChart& chart, const Path& path,
                              const TractorVec& start, double h);

// Transport operator of the path on all n + 2 component slots, row-major.
std::vector<double> transport_matrix(const MetricChart& chart, const Path& path, double h);

// Composition of edge transports around the closed polygon through the
// vertices (the last edge returns to the first vertex).
std::vector<double> holonomy_polygon(const MetricChart& chart,
                                     const std::vector<VecD>& vertices, double h);

// Axis-aligned square loop with corner at base, spanning coordinate
// directions i and j; h is the RK4 step in each edge's unit parameter.
std::vector<double> holonomy_loop(const MetricChart& chart, const VecD& base, int i, int j,
                                  double side, double h);

// Largest |entry| of (M - I).
double identity_defect(const std::vector<double>& m);

// 2 sigma rho + g^{ab} mu_a mu_b, evaluated with the chart metric at x.
double tractor_norm(const MetricChart& chart, const TractorVec& v, const VecD& x);

struct RecoverReport {
  VecD coeffs;             // a, b_0 .. b_{n-1}, c
  VecD transported_sigma;  // top slot at each sample
  double max_fit_gap = 0.0;
  double max_einstein_residual = 0.0;
  double max_probe_defect = 0.0;
  ScalarField candidate;
};

// Recovers the scale function of a parallel standard tractor: probes tractor
// flatness with small holonomy loops, transports the seed from the base point
// to each sample, and fits sigma = F (a + b.x + c |x|^2) where F is the
// chart's conformal-to-flat factor. The report carries the fit gap and the
// residual of the candidate under the second-order operator whose kernel the
// recovered scales form.
RecoverReport einstein_recover(const MetricChart& chart, const TractorVec& seed,
                               const VecD& base, const std::vector<VecD>& samples,
                               double h, double probe_tol);

}  // namespace tractor
