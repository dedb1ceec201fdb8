#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tractor/chart.hpp"
#include "tractor/curvature.hpp"
#include "tractor/rational.hpp"

namespace tractor {

// Function of position carrying partials to order 3.
using ScalarField = std::function<Jet3(const VecD&)>;

ScalarField constant_field(int n, double c);
ScalarField monomial_field(int n, std::vector<Monomial> terms);

// Density of exact rational weight, stored as a plain function in a named
// scale; changing scale by ghat = Omega^2 g multiplies the function by
// Omega^w.
struct DensityField {
  Rational weight;
  std::string scale;
  ScalarField eval;
  Jet3 jet(const VecD& x) const;
};

DensityField make_density(Rational weight, std::string scale, ScalarField eval);

DensityField rescale_density(const DensityField& f, const ConformalFactor& omega,
                             const std::string& new_scale);

// Standard tractor components (sigma, mu_a, rho) at a point, tagged with the
// scale they trivialize.
struct TractorVec {
  double sigma = 0.0;
  VecD mu;
  double rho = 0.0;
  std::string scale;
};

// Field of tractor components as n+2 jets ordered (sigma, mu_0..mu_{n-1}, rho);
// one derivative is all the connection consumes.
using TractorField = std::function<std::vector<Jet1>(const VecD&)>;

TractorField tractor_field_from_monomials(int n,
                                          std::vector<std::vector<Monomial>> slots);

// Component change under ghat = Omega^2 g, indices raised with g:
//   sigma_hat = Omega sigma
//   mu_hat_a  = Omega (mu_a + sigma Upsilon_a)
//   rho_hat   = Omega^{-1} (rho - Upsilon^c mu_c - 1/2 |Upsilon|^2 sigma)
// extra_weight adds a further Omega^{w} factor on every slot, for tractors
// twisted by a density of weight w.
TractorVec ttchange_apply(const MetricChart& chart, const ConformalFactor& omega,
                          const TractorVec& v, const VecD& x,
                          const std::string& new_scale,
                          const Rational& extra_weight = Rational(0));

// Covariant derivative slots of a tractor field in each coordinate direction:
//   (nabla_a sigma - mu_a,
//    nabla_a mu_b + g_ab rho + P_ab sigma,
//    nabla_a rho - P_ab mu^b).
struct TractorDerivative {
  int n = 0;
  VecD d_sigma;  // n
  VecD d_mu;     // n*n, [a][b]
  VecD d_rho;    // n
  double max_abs() const;
};

TractorDerivative tractor_connection_apply(const MetricChart& chart,
                                           const TractorField& field, const VecD& x);

// Trace-free part of nabla_a nabla_b sigma + P_ab sigma; n*n values.
std::vector<double> einstein_operator(const MetricChart& chart, const ScalarField& sigma,
                                      const VecD& x);

// (sigma, nabla sigma, -(1/n)(Laplacian + tr P) sigma).
TractorVec prolong(const MetricChart& chart, const ScalarField& sigma, const VecD& x);

// Prolonged field of sigma as a TractorField usable by the connection.
TractorField prolong_field(const MetricChart& chart, const ScalarField& sigma);

// max_a |nabla_a rho - P_a{}^b mu_b| for the prolongation of sigma.
double closure_residual(const MetricChart& chart, const ScalarField& sigma, const VecD& x);

// ((n + 2w - 2) w f, (n + 2w - 2) nabla_a f, -(Laplacian + w tr P) f) on a
// weight-w density; the prefactor n + 2w - 2 is formed in exact rational
// arithmetic before conversion.
TractorVec thomas_D(const MetricChart& chart, const DensityField& f, const VecD& x);

// Laplacian + (1 - n/2) tr P, acting on a plain function in the chart scale.
double yamabe(const MetricChart& chart, const ScalarField& f, const VecD& x);

// The three transformation laws for vectors, covectors and densities, the
// Christoffel change, and consistency of the component change with native
// prolongation in the rescaled chart.
ResidualReport check_rescale_laws(const MetricChart& chart, const ConformalFactor& omega,
                                  const std::vector<VecD>& samples, double tol);

// Scale naturality of the three operators above under ghat = Omega^2 g.
ResidualReport operator_naturality(const MetricChart& chart, const ConformalFactor& omega,
                                   const std::vector<VecD>& samples, double tol);

}  // namespace tractor
