#pragma once

#include <vector>

#include "tractor/cohomology.hpp"
#include "tractor/lie_algebra.hpp"
#include "tractor/ratmat.hpp"
#include "tractor/representation.hpp"

namespace tractor {

// Element of the adjoint bundle fiber, split by grade: (xi, s0, s1) with
// xi over the g_{-1} basis, s0 over g_0, s1 over g_1.
struct AdjointTractorTriple {
  RatVec xi;
  RatVec s0;
  RatVec s1;
};

RatVec triple_to_full(const GradedLieAlgebra& alg, const AdjointTractorTriple& s);
AdjointTractorTriple triple_from_full(const GradedLieAlgebra& alg, const RatVec& full);

// Module vector split into its grade components. Components are packed:
// components[i] holds the coordinates at the module indices of grade
// grades[i], in ascending index order, and every grade of the module is
// present (possibly as a zero block).
struct SplitModuleVector {
  const Representation* rep = nullptr;
  std::vector<Rational> grades;
  std::vector<RatVec> components;
};

SplitModuleVector split_module_vector(const Representation& rep, const RatVec& full);
RatVec merge_components(const SplitModuleVector& v);
void validate_split(const SplitModuleVector& v);

// One-cochain on g_{-1} with values in g_1, stored over the full adjoint
// one-cochain coordinate layout so the cohomology operators apply directly.
struct RhoCochain {
  RatVec coords;
};

RhoCochain rho_from_matrix(const GradedLieAlgebra& alg, const RatMatrix& pairing);
RatMatrix rho_to_matrix(const GradedLieAlgebra& alg, const RhoCochain& rho);
RatVec rho_apply(const GradedLieAlgebra& alg, const RhoCochain& rho, const RatVec& xi);

// Antisymmetrized bracket deformation (X, Y) -> [X, phi(Y)] - [Y, phi(X)]
// of a g_0- or g_1-valued one-cochain, evaluated through the structure
// constants. Input and output use the adjoint cochain coordinate layout.
RatVec deform_curvature_lowest(const GradedLieAlgebra& alg, const RatVec& phi);

// Unique solution Rho in im d* of box(Rho) = -d*(R) for a g_0-valued
// two-cochain R of homogeneity 2.
RhoCochain normalize_rho(const GradedLieAlgebra& alg, const RatVec& curvature);

// d*(R) for the conformal algebra, computed as the trace contraction
// (d*R)(X_a) = sum_c [zeta_c, R(X_c, X_a)] and reported as the bilinear
// form T with (d*R)(X_a) = sum_b T(a,b) Z_b.
RatMatrix codifferential_as_trace(const GradedLieAlgebra& alg, const RatVec& curvature);

// Action of exp(-Upsilon) on a split module vector:
// vhat_l = sum_{i+j=l} ((-1)^i / i!) (Upsilon-action)^i v_j.
SplitModuleVector recalibrate_components(const Representation& rep, const RatVec& upsilon,
                                         const SplitModuleVector& v);

// Correction term -lambda([Upsilon, xi]) v for a completely reducible
// representation; the connection change for such bundles.
RatVec weyl_connection_shift(const Representation& rep, const RatVec& upsilon, const RatVec& xi,
                             const RatVec& v);

// Rho_hat(xi) = Rho(xi) + nabla_xi Upsilon + (1/2)[Upsilon, [Upsilon, xi]],
// returned over the g_1 basis. The derivative value is caller-supplied.
RatVec rho_shift(const GradedLieAlgebra& alg, const RatVec& upsilon, const RatVec& xi,
                 const RatVec& nabla_upsilon_val, const RhoCochain& rho);

// (D_s v)_i = nabla_{pi(s)} v_i - s0 . v_i + (Rho(pi(s)) - s1) . v_{i-1};
// the derivative values and Rho(pi(s)) are caller-supplied.
SplitModuleVector fundamental_derivative_components(const Representation& rep,
                                                    const AdjointTractorTriple& s,
                                                    const SplitModuleVector& v,
                                                    const SplitModuleVector& nabla_v,
                                                    const RatVec& rho_of_xi);

// (nabla_xi v)_i = nabla_xi v_i + Rho(xi) . v_{i-1} + xi . v_{i+1};
// requires a representation with g_{-1} action matrices.
SplitModuleVector tractor_derivative_components(const Representation& rep, const RatVec& xi,
                                                const SplitModuleVector& v,
                                                const SplitModuleVector& nabla_v,
                                                const RatVec& rho_of_xi);

RatVec bullet_action(const Representation& rep, const RatVec& adjoint_elem, const RatVec& v);
RatVec algebraic_bracket(const GradedLieAlgebra& alg, const RatVec& s1, const RatVec& s2);

}  // namespace tractor
