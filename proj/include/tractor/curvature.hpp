#pragma once

#include <string>
#include <vector>

#include "tractor/chart.hpp"
#include "tractor/jets.hpp"

namespace tractor {

inline std::size_t ix2(int n, int a, int b) { return std::size_t(a) * n + b; }
inline std::size_t ix3(int n, int a, int b, int c) {
  return (std::size_t(a) * n + b) * n + c;
}
inline std::size_t ix4(int n, int a, int b, int c, int d) {
  return ((std::size_t(a) * n + b) * n + c) * n + d;
}

// Everything curvature_jets produces, kept as jets deep enough that one more
// coordinate derivative of each tensor is still exact: g and its inverse at
// order 3, Christoffel symbols at order 2, curvature tensors at order 1.
struct CurvatureJets {
  int n = 0;
  std::vector<Jet3> g;            // n*n
  std::vector<Jet3> ginv;         // n*n
  std::vector<Jet2> gamma;        // n^3, [i][j][k] = Gamma^i_{jk}
  std::vector<Jet1> riemann;      // n^4, R_{ab}{}^c{}_d
  std::vector<Jet1> riemann_low;  // n^4, R_{abcd}
  std::vector<Jet1> ricci;        // n*n
  Jet1 scalar;
  std::vector<Jet1> schouten;     // n*n
  Jet1 schouten_trace;
};

// Point values of the curvature suite plus the Weyl tensor.
struct PointCurvature {
  int n = 0;
  std::vector<double> g, ginv;    // n*n
  std::vector<double> gamma;      // n^3
  std::vector<double> riemann;    // n^4, R_{ab}{}^c{}_d
  std::vector<double> riemann_low;  // n^4
  std::vector<double> weyl;       // n^4
  std::vector<double> ricci;      // n*n
  std::vector<double> schouten;   // n*n
  double scalar = 0.0;
  double schouten_trace = 0.0;
};

std::vector<double> christoffel(const MetricChart& chart, const VecD& x);

// nabla_a nabla_b f of a scalar, one derivative deep; n*n entries.
std::vector<Jet1> covariant_hessian(const CurvatureJets& cj, const Jet3& f);

Jet1 laplacian(const CurvatureJets& cj, const Jet3& f);

CurvatureJets curvature_jets(const MetricChart& chart, const VecD& x);

PointCurvature curvature_suite(const MetricChart& chart, const VecD& x);

struct ResidualEntry {
  std::string name;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  long samples = 0;
  double tol = 0.0;
  bool pass = true;
};

struct ResidualReport {
  std::vector<ResidualEntry> entries;
  void add(const std::string& name, double value);
  void set_tol(const std::string& name, double tol);
  const ResidualEntry& entry(const std::string& name) const;
  bool all_pass() const;
};

// Symmetries, traces and the Weyl + Schouten split of the Riemann tensor,
// checked pointwise over the samples.
ResidualReport curvature_invariants(const MetricChart& chart,
                                    const std::vector<VecD>& samples, double tol);

// First and second Bianchi identities, the contracted identity
// div P = d tr P, and the commutator of a gradient with the Laplacian
// against its curvature expression on fixed polynomial densities.
ResidualReport bianchi_checks(const MetricChart& chart,
                              const std::vector<VecD>& samples, double tol);

// Deterministic interior sample points, inset from the boundary by the given
// fraction of each edge.
std::vector<VecD> sample_box(const Box& box, int count, unsigned seed,
                             double inset_fraction = 0.1);

}  // namespace tractor
