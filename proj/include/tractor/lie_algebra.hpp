#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tractor/ratmat.hpp"
#include "tractor/rational.hpp"

namespace tractor {

// A |1|-graded algebra g = g_{-1} + g_0 + g_1 realized by matrices in its
// defining representation. Basis layout contract: the g_{-1} block first,
// then g_0 with the grading element E as the last g_0 element, then g_1;
// row-major ordering inside each matrix-shaped block.
struct GradedLieAlgebra {
  std::string kind;  // "conformal" | "projective" | "grassmannian" | "custom"
  std::vector<int> params;
  int defining_dim = 0;
  std::vector<RatMatrix> basis;
  std::vector<int> grade;  // per basis element, in {-1, 0, 1}
  int grading_element_index = -1;
  // Sparse structure constants: cijk[i][j] lists (k, c) with
  // [b_i, b_j] = sum_k c * b_k.
  std::vector<std::vector<std::vector<std::pair<int, Rational>>>> cijk;
  // dual_g1[a] = coefficients over the g_1 block of the element zeta_a with
  // tr(zeta_a * X_b) = delta_ab; used to transport the homology boundary to
  // a codifferential on g_{-1} cochains.
  std::vector<RatVec> dual_g1;

  int dim() const { return int(basis.size()); }
  int dim_minus() const;
  int dim_zero() const;
  int dim_plus() const;
  int g0_offset() const { return dim_minus(); }
  int g1_offset() const { return dim_minus() + dim_zero(); }

  RatVec bracket(const RatVec& x, const RatVec& y) const;
  // Bracket of two basis elements as a sparse list.
  const std::vector<std::pair<int, Rational>>& bracket_basis(int i, int j) const { return cijk[i][j]; }
  RatMatrix trace_form() const;
};

GradedLieAlgebra build_conformal_algebra(int n);     // so(n+1, 1), n >= 3
GradedLieAlgebra build_projective_algebra(int n);    // sl(n+1), n >= 2
GradedLieAlgebra build_grassmannian_algebra(int p, int q);  // sl(p+q), 2 <= p <= q

// User-supplied matrix realization; runs the same derivation pipeline
// (structure constants by exact solve, closure, grading element, duality).
GradedLieAlgebra build_custom_algebra(std::vector<RatMatrix> basis, std::vector<int> grade,
                                      int grading_element_index, std::string kind = "custom",
                                      std::vector<int> params = {});

// Full invariant battery: Jacobi on all triples, graded closure, E-eigenvalue
// consistency, trace form nondegenerate and associative. Throws on failure.
void validate_algebra(const GradedLieAlgebra& alg);

struct ComplexRatVec {
  RatVec re, im;
};

// Coefficient vectors (over the full algebra basis, supported on the g_0
// block) of one simple raising operator set for the semisimple part of g_0.
// Real for the sl families; genuinely complex for the so middle block of the
// conformal family. Throws for custom algebras.
std::vector<ComplexRatVec> raising_operators(const GradedLieAlgebra& alg);

}  // namespace tractor
