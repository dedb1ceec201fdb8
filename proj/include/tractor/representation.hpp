#pragma once

#include <string>
#include <vector>

#include "tractor/lie_algebra.hpp"

namespace tractor {

struct Representation {
  const GradedLieAlgebra* alg = nullptr;
  std::string label;  // "adjoint" | "standard" | "density(w)" | "tangent"
  int module_dim = 0;
  std::vector<RatMatrix> action;       // one module_dim x module_dim matrix per basis element
  std::vector<Rational> module_grade;  // E-eigenvalue per module basis vector
  bool p_only = false;                 // homomorphism law holds on g_0 + g_1 only
  bool completely_reducible = false;   // g_1 acts trivially
  Rational density_weight = Rational(0);

  RatVec act(int basis_index, const RatVec& v) const { return action[basis_index].apply(v); }
  // Action of a general algebra element given by coefficients.
  RatVec act_elem(const RatVec& coeffs, const RatVec& v) const;
  std::vector<Rational> distinct_grades_sorted() const;
  std::vector<int> indices_of_module_grade(const Rational& g) const;
};

Representation adjoint_rep(const GradedLieAlgebra& alg);
Representation standard_rep(const GradedLieAlgebra& alg);
// One-dimensional p-module: E acts by -w, the rest of g_0 and all of g_1 by 0.
Representation density_rep(const GradedLieAlgebra& alg, const Rational& w);
// g_{-1} as a completely reducible p-module (g_1 acting trivially).
Representation tangent_rep(const GradedLieAlgebra& alg);

// Homomorphism law (restricted to the parabolic for p_only reps), E-action
// diagonality against module_grade, and grade-shift compatibility of every
// action matrix. Throws on failure.
void validate_representation(const Representation& rep);

}  // namespace tractor
