#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tractor/jets.hpp"

namespace tractor {

struct Box {
  VecD lo, hi;
  bool contains(const VecD& x) const;
};

Box cube_box(int n, double half_width);

// Positive scalar factor with exact partials; jets carry order 3 so charts
// rescaled by it keep full differentiation depth.
struct ConformalFactor {
  std::function<Jet3(const VecD&)> eval;
  Jet3 jet(const VecD& x) const;
};

ConformalFactor constant_factor(int n, double c);
ConformalFactor polynomial_factor(int n, double base, std::vector<Monomial> terms);
// 2 / (1 + |x|^2): relates the flat chart to the stereographic sphere chart.
ConformalFactor sphere_flat_factor(int n);
ConformalFactor product_factor(ConformalFactor a, ConformalFactor b);

VecD upsilon(const ConformalFactor& omega, const VecD& x);

// Metric evaluator on a coordinate box, with partials supplied to order 3.
class MetricChart {
 public:
  MetricChart(int n, Box box, std::string label);
  virtual ~MetricChart() = default;

  int dim() const { return n_; }
  const Box& domain() const { return box_; }
  const std::string& label() const { return label_; }

  virtual Jet3 metric(int a, int b, const VecD& x) const = 0;

  // Factor F with g = F^2 * (flat metric) when the chart is a known
  // conformal rescaling of the flat one; null otherwise.
  virtual const ConformalFactor* flat_factor() const { return nullptr; }

  // All n*n metric jets, row-major; checks the domain.
  std::vector<Jet3> metric_jets(const VecD& x) const;
  void require_inside(const VecD& x) const;

 private:
  int n_;
  Box box_;
  std::string label_;
};

class FlatChart : public MetricChart {
 public:
  explicit FlatChart(int n, Box box = {}, std::string label = "flat");
  Jet3 metric(int a, int b, const VecD& x) const override;
  const ConformalFactor* flat_factor() const override { return &one_; }

 private:
  ConformalFactor one_;
};

// Unit round sphere in stereographic coordinates: g = 4 / (1 + |x|^2)^2 delta.
class SphereChart : public MetricChart {
 public:
  explicit SphereChart(int n, Box box = {}, std::string label = "sphere");
  Jet3 metric(int a, int b, const VecD& x) const override;
  const ConformalFactor* flat_factor() const override { return &factor_; }

 private:
  ConformalFactor factor_;
};

// delta_ab plus a fixed polynomial perturbation; entries indexed (a, b) with
// a <= b hold the monomials of the symmetric matrix.
class PolyChart : public MetricChart {
 public:
  PolyChart(int n, std::vector<std::vector<Monomial>> upper_entries, Box box = {},
            std::string label = "poly");
  Jet3 metric(int a, int b, const VecD& x) const override;
  const std::vector<std::vector<Monomial>>& upper_entries() const { return entries_; }

 private:
  std::vector<std::vector<Monomial>> entries_;
};

// The frozen non-symmetric analytic test metric (n = 3 or 4).
PolyChart builtin_poly_chart(int n);

// ghat = Omega^2 g over a base chart the caller keeps alive.
class RescaledChart : public MetricChart {
 public:
  RescaledChart(const MetricChart& base, ConformalFactor omega, std::string label);
  Jet3 metric(int a, int b, const VecD& x) const override;
  const ConformalFactor* flat_factor() const override;

 private:
  const MetricChart* base_;
  ConformalFactor omega_;
  bool has_flat_;
  ConformalFactor composed_;
};

RescaledChart rescale(const MetricChart& base, ConformalFactor omega, std::string label = "");

struct ChartValidation {
  double max_symmetry_gap = 0.0;
  double min_pivot = 0.0;
  double max_partial_residual = 0.0;
  bool positive_definite = true;
};

ChartValidation validate_chart(const MetricChart& chart, const std::vector<VecD>& samples);

}  // namespace tractor
